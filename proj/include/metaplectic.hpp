#pragma once

// Metaplectic layer: the polynomial module of the coweight lattice with
// Gauss-sum coefficients.  The finite Weyl group acts through the
// Chinta-Gunnells star operation (which lives in a localization), the Hecke
// algebra acts through metaplectic Demazure-Lusztig operators (which stay
// polynomial), and the spherical quotient is realized concretely as the free
// module on dominant coweights with `straighten` as the projection.  On the
// quotient we build the kappa-rescaled v-basis, the normalized bar
// involution, the canonical bases with their g-twisted Kazhdan-Lusztig
// coefficients, twisted Littlewood-Richardson polynomials, symmetrizers, the
// tensor-product identities at box weights, and the strong-linkage order.
//
// Everything is exact.  Coefficients come from ring::Coefficient (tau and
// g-symbols with the period of the underlying twist); the twisted affine
// Weyl combinatorics comes from weyl::System.  Operators act on the right,
// matching the weyl layer.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hecke.hpp"

namespace metaplectic {

using ring::Coefficient;
using ring::TauLaurent;
using rootdata::Coweight;
using rootdata::RootContext;
using weyl::AffineElement;
using weyl::System;

// A localized element was asked to clear its denominator and could not.
struct IllegalDenominator : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// No +-tau^{2k} rescaling makes the block involution unitriangular with
// diagonal 1; this would mean a convention error, so it is fatal.
struct NormalizationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotInBox : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotInTildeLattice : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// The big module: finitely supported sums  sum_mu c_mu Y_mu.

using PolyElement = std::map<Coweight, Coefficient>;

PolyElement peMonomial(const Coweight& mu, const Coefficient& c);
void peAddTerm(PolyElement* a, const Coweight& mu, const Coefficient& c);
PolyElement peAdd(const PolyElement& a, const PolyElement& b);
PolyElement peSub(const PolyElement& a, const PolyElement& b);
PolyElement peScale(const Coefficient& c, const PolyElement& a);
PolyElement peMul(const PolyElement& a, const PolyElement& b);
// Y_mu -> Y_{mu m} for a right-action matrix m (coefficients untouched).
PolyElement peApply(const PolyElement& a, const rootdata::Mat& m);
PolyElement fromGroupAlgebra(int period, const hecke::GroupAlgebra& a);

// ---------------------------------------------------------------------------
// Localization at the star denominators.  A factor is a binomial
// 1 - tau^{-2v} Y_gamma with v in {0, 1}; the star action starts from
// gamma = -(scaled coroot) and permutes the gammas, so general gamma must be
// representable.  Cancellation against the numerator is by exact division.

struct DenomFactor {
  Coweight gamma;
  bool vFactor = false;  // true: 1 - tau^-2 Y_gamma, false: 1 - Y_gamma

  bool operator==(const DenomFactor& o) const {
    return vFactor == o.vFactor && gamma == o.gamma;
  }
  bool operator<(const DenomFactor& o) const {
    if (vFactor != o.vFactor) return vFactor < o.vFactor;
    return gamma < o.gamma;
  }
};

struct LocalizedElement {
  PolyElement num;
  std::map<DenomFactor, int> den;  // factor -> positive multiplicity
};

LocalizedElement lzFromPoly(const PolyElement& f);
LocalizedElement lzScale(const Coefficient& c, const LocalizedElement& a);
LocalizedElement lzMulPoly(const LocalizedElement& a, const PolyElement& f);
LocalizedElement lzMul(const LocalizedElement& a, const LocalizedElement& b);
LocalizedElement lzAdd(const LocalizedElement& a, const LocalizedElement& b);
// Cancels every denominator factor that divides the numerator exactly.
LocalizedElement lzSimplify(const LocalizedElement& a);
// Cross-multiplied equality (no normal form needed).
bool lzEquals(int period, const LocalizedElement& a, const LocalizedElement& b);
// Simplify and require an empty denominator, else IllegalDenominator.
PolyElement lzAsPoly(const LocalizedElement& a);

// ---------------------------------------------------------------------------
// Operators on the big module.

// The Chinta-Gunnells reflection f * s_a for a simple root index a,
// extended to quotients by (f/h) * s = (f * s)/h^{s}.
LocalizedElement cgReflect(const System& sys, const LocalizedElement& f,
                           int a);

// f . Ttilde_a through the two-case closed formula; always polynomial.
PolyElement dlAct(const System& sys, const PolyElement& f, int a);

// One letter of a Hecke word: a finite generator (acting as tau^-1 Ttilde)
// or a translation by a vector of the twisted lattice.
struct WordItem {
  int gen = -1;  // >= 0: simple reflection index; -1: translation
  Coweight beta;

  static WordItem generator(int k) { return WordItem{k, {}}; }
  static WordItem translation(const Coweight& b) { return WordItem{-1, b}; }
};

PolyElement heckeWordAct(const System& sys, const PolyElement& f,
                         const std::vector<WordItem>& word);

// f . eps_I^+ for the full finite Weyl group: the denominator-free
// symmetrizer sum_w tau^{l(w) - l(w0)} H_w.
PolyElement symmetrize(const System& sys, const PolyElement& f);

// ---------------------------------------------------------------------------
// Blocks, kappa, and the spherical quotient.

// kappa(mu) = prod tau^-1 g_{<eta + rho, a> Q(a-check)} over the positive
// roots a with (a) sigma < 0, where mu = eta dot sigma t(beta) is the
// minimal alcove decomposition.  v_mu = kappa(mu) Y_mu.  The Hecke word
// along the walk produces the same coefficient as long as no inversion has
// g-index divisible by the period; walks through the affine wall pick up an
// extra tau^2 per such crossing (the dot image and the geometric-sum term of
// the operator merge there).
Coefficient kappa(const System& sys, const Coweight& mu);
// Multiplicative inverse of kappa(mu), assembled factor by factor (the ring
// only inverts signed tau powers directly, but each walk factor is a unit).
Coefficient kappaInverse(const System& sys, const Coweight& mu);

enum class Coords { Y, V };

struct SphericalElement {
  std::map<Coweight, Coefficient> terms;  // supported on dominant coweights
  Coords coords = Coords::Y;

  bool operator==(const SphericalElement& o) const {
    return coords == o.coords && terms == o.terms;
  }
};

SphericalElement toVCoords(const System& sys, const SphericalElement& x);
SphericalElement fromVCoords(const System& sys, const SphericalElement& x);

// Which non-dominant term to rewrite next.  RootFirst picks the
// lexicographically smallest offending weight and its most negative wall;
// WeightFirst picks the (coordinate sum, lex) lowest weight and its first
// negative wall.  Both must agree (confluence is a tested property).
enum class Strategy { RootFirst, WeightFirst };

// Normal form onto the spherical quotient: rewrites non-dominant symbols by
// the wall/divisible/short/long rules until the support is dominant.  With
// coords = V the input is read as sum c_mu [v_mu] and the tau-coefficient
// variants of the rules apply.  The iteration cap throws
// weyl::NonTermination (diagnostic; the rules strictly raise weights).
SphericalElement straighten(const System& sys, const PolyElement& f,
                            Coords coords,
                            Strategy strategy = Strategy::RootFirst);

struct BlockDescriptor {
  Coweight eta;                 // closed-alcove representative
  std::vector<int> stabilizer;  // J, as generator indices (rank() = affine)
  long long longestLengthJ = 0;
  // Dominant block elements dominance-below the requested ceiling, sorted
  // by (coordinate sum, lex).
  std::vector<Coweight> elements;
};

BlockDescriptor blockOf(const System& sys, const Coweight& la);

// The normalized bar involution D of one block: semilinear over bar,
// unitriangular in dominance with diagonal 1, D^2 = id.  The raw formula
// [v_la] -> (-1)^{l(w0J)} tau^{-l(w0)-l(w0J)} straighten([v_{la dot w0}])
// is rescaled by the unique block constant +-tau^{2k} fixing the minimal
// dominant block element.
class Involution {
 public:
  Involution(const System& sys, const Coweight& eta);

  const Coweight& eta() const { return eta_; }
  const Coefficient& blockConstant() const { return constant_; }

  // Raw image of a single basis vector, before rescaling.
  SphericalElement rawImage(const Coweight& la) const;
  // The normalized semilinear map on a v-coordinate element.
  SphericalElement apply(const SphericalElement& x) const;

 private:
  const System& sys_;
  Coweight eta_;
  std::vector<int> stabilizer_;
  long long lw0J_ = 0;
  Coefficient constant_;
  mutable std::map<Coweight, SphericalElement> imageMemo_;
};

// ---------------------------------------------------------------------------
// Canonical bases.

struct CanonicalBasisRecord {
  Coweight weight;
  bool plusFamily = false;
  // v-coordinate expansion: leading coefficient 1, lower coefficients pure
  // tau-Laurent in the family's sign class.
  SphericalElement expansion;
  // Y-coordinate coefficients of the same element normalized to leading
  // coefficient 1 (the g-twisted Kazhdan-Lusztig polynomials).
  std::map<Coweight, Coefficient> gTwistedKL;
};

CanonicalBasisRecord canonicalBasis(const System& sys, const Coweight& la,
                                    bool plus);
// All records of the block of la for weights dominance-below la, in
// increasing (coordinate sum, lex) order; the last one belongs to la.
std::vector<CanonicalBasisRecord> canonicalBasisBelow(const System& sys,
                                                      const Coweight& la,
                                                      bool plus);

// ---------------------------------------------------------------------------
// Twisted Littlewood-Richardson polynomials and friends.

// Straightened product [Y_mu] * chi_la for dominant mu and la in Ytilde_+;
// the coefficient at [Y_zeta] is the twisted LR polynomial.
SphericalElement gLR(const System& sys, const Coweight& mu,
                     const Coweight& la);
// Same with the symmetrized Hall-Littlewood element in place of chi_la.
SphericalElement hAction(const System& sys, const Coweight& mu,
                         const Coweight& la);

enum class TensorVariant { Minus, PlusDagger };

struct TensorCheck {
  bool holds = false;
  Coweight top;           // la0 + zeta resp. dagger(la0) + zeta
  SphericalElement lhs;   // canonical element * character, Y-coords
  SphericalElement rhs;   // canonical element at the top weight, Y-coords
};

// Verifies the tensor identity G^-_{la0} * c_zeta = G^-_{la0+zeta}, resp.
// the plus family at the dagger weight la0 w0 + 2(rho-tilde - rho).
TensorCheck tensorProductCheck(const System& sys, const Coweight& la0,
                               const Coweight& zeta, TensorVariant variant);

// Reachability of mu from la by dominance-decreasing dilated dot
// reflections nu -> nu dot s_beta + m n(beta) beta inside the dominant
// weights below la.
bool stronglyLinked(const System& sys, const Coweight& mu, const Coweight& la);

std::string renderPoly(const PolyElement& f);
std::string renderSpherical(const SphericalElement& x);

}  // namespace metaplectic
