#pragma once

// Hecke algebra layer on top of the (twisted) affine Weyl group.  Two
// realizations live here side by side:
//
//   * the Iwahori-Matsumoto realization, spanned by H_x over affine Weyl
//     elements x, where the bar involution and the Kazhdan-Lusztig bases
//     (full, parabolic, and double-coset) are computed;
//   * the commutative picture: the group algebra of the coweight lattice,
//     carrying the polynomial representation, Weyl characters, Hall-
//     Littlewood elements, and the Bernstein presentation.
//
// Coefficients at this layer are plain Laurent polynomials in tau; the
// Gauss-sum symbols only enter with the metaplectic layer.  Memo tables are
// per-object and not synchronized, so keep each table on one thread.

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coeff_ring.hpp"
#include "weyl.hpp"

namespace hecke {

using ring::TauLaurent;
using rootdata::Coweight;
using rootdata::Mat;
using rootdata::RootContext;
using weyl::AffineElement;
using weyl::System;

// A coset representative handed to a parabolic module that is not minimal
// for that module (or not regular, for double cosets).
struct IllegalRepresentative : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// A quotient that the surrounding formula promises to be exact was not.
struct DivisionNotExact : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Peeling a positive combination of characters off a product failed.
struct PeelingFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Iwahori-Matsumoto realization.  An element is a finite sum sum_x c_x H_x
// with H_s^2 = (tau - tau^-1) H_s + 1.

using HeckeElement = std::map<AffineElement, TauLaurent>;

HeckeElement heckeBasis(const AffineElement& x);

void heckeAddTerm(HeckeElement* a, const AffineElement& x, const TauLaurent& c);
HeckeElement heckeAdd(const HeckeElement& a, const HeckeElement& b);
HeckeElement heckeScale(const TauLaurent& c, const HeckeElement& a);

// a * H_{s_k} and H_{s_k} * a; k ranges over [0, rank] with rank the affine
// node, as everywhere in the weyl layer.
HeckeElement heckeMulGenRight(const System& sys, const HeckeElement& a, int k);
HeckeElement heckeMulGenLeft(const System& sys, int k, const HeckeElement& a);
HeckeElement heckeMul(const System& sys, const HeckeElement& a,
                      const HeckeElement& b);

// H_x^{-1}, one generator factor at a time (H_s^{-1} = H_s + tau^-1 - tau).
HeckeElement heckeBasisInverse(const System& sys, const AffineElement& x);

// Ring involution: tau -> tau^-1 on coefficients, H_x -> (H_{x^-1})^{-1}.
HeckeElement heckeBar(const System& sys, const HeckeElement& a);

// Image of the commutative generator Y_beta inside this realization:
// H_{t(beta)} for dominant beta, extended to the whole lattice by splitting
// beta as a difference of dominant coweights.  Kept as a separate bridge;
// the commutative realization below is the definition.
HeckeElement translationElement(const System& sys, const Coweight& beta);

// The symmetrizers attached to a finite parabolic W_J:
//   plus:  tau^{-l(w0J)} sum tau^{l(w)} H_w
//   minus: (-tau)^{l(w0J)} sum (-tau^-1)^{l(w)} H_w
HeckeElement symmetrizer(const System& sys, const std::vector<int>& J,
                         bool plus);

// Kazhdan-Lusztig bases.  basis(w, plus) is the unique bar-fixed element
// with leading term H_w and lower coefficients in tau Z[tau] (plus) or
// tau^-1 Z[tau^-1] (minus); coeff reads off one coefficient.
class KLTable {
 public:
  explicit KLTable(const System& sys) : sys_(sys) {}

  const System& system() const { return sys_; }
  const HeckeElement& basis(const AffineElement& w, bool plus);
  TauLaurent coeff(const AffineElement& y, const AffineElement& w, bool plus);

 private:
  const System& sys_;
  std::map<std::pair<bool, AffineElement>, HeckeElement> memo_;
};

// ---------------------------------------------------------------------------
// Parabolic modules.  Kind::Right is the right module spanned by N_sigma
// over sigma with no left descent in J (the image of eps_J^- H); a generator
// acts by
//   N_sigma H_s = N_{sigma s}                     if legal, longer
//               = N_{sigma s} + (tau - tau^-1) N_sigma   if legal, shorter
//               = -tau^-1 N_sigma                 if sigma s is not legal.
// Kind::Left is the mirrored left module on H eps_J^+ (legal: no right
// descent in J; the last case reads H_s M_sigma = tau M_sigma).  Elements
// reuse the HeckeElement map with keys restricted to legal representatives.

class ParabolicModule {
 public:
  enum class Kind { Right, Left };

  ParabolicModule(const System& sys, std::vector<int> J, Kind kind);

  const System& system() const { return sys_; }
  const std::vector<int>& parabolic() const { return J_; }
  Kind kind() const { return kind_; }

  bool legal(const AffineElement& x) const;
  // Throws IllegalRepresentative when x is not minimal for the module.
  HeckeElement basisElement(const AffineElement& x) const;

  HeckeElement actGen(const HeckeElement& el, int k) const;
  // Right kind: el * H_w; Left kind: H_w * el.
  HeckeElement act(const HeckeElement& el, const AffineElement& w) const;
  HeckeElement bar(const HeckeElement& el) const;

  // Self-dual unitriangular element at a legal representative, lower
  // coefficients in the sign class picked by `plus`.
  const HeckeElement& kl(const AffineElement& rep, bool plus);
  TauLaurent klCoeff(const AffineElement& y, const AffineElement& rep,
                     bool plus);

 private:
  const System& sys_;
  std::vector<int> J_;
  Kind kind_;
  std::map<std::pair<bool, AffineElement>, HeckeElement> memo_;
};

// Strip left descents in J and right descents in K until none remain; for a
// regular double coset this is its unique minimal-length representative.
AffineElement minimalDoubleCosetRep(const System& sys, const AffineElement& x,
                                    const std::vector<int>& J,
                                    const std::vector<int>& K);

// Coefficients of the self-dual basis of the (J, K) double-coset module at
// regular minimal representatives.  The minus family is read off the right
// parabolic module for J at u w0K and cross-checked against the alternating
// W_J-sum of full KL coefficients; the plus family mirrors this through the
// left module for K at w0J u.
class DoubleCosetTable {
 public:
  DoubleCosetTable(const System& sys, std::vector<int> J, std::vector<int> K);

  TauLaurent coeff(const AffineElement& t, const AffineElement& u, bool plus);

 private:
  void requireRegular(const AffineElement& x) const;

  const System& sys_;
  std::vector<int> J_;
  std::vector<int> K_;
  AffineElement w0J_;
  AffineElement w0K_;
  std::vector<AffineElement> wJElements_;
  std::vector<AffineElement> wKElements_;
  ParabolicModule right_;
  ParabolicModule left_;
  KLTable full_;
};

// ---------------------------------------------------------------------------
// Commutative picture: Laurent polynomials on the coweight lattice.

using GroupAlgebra = std::map<Coweight, TauLaurent>;

GroupAlgebra gaOne(int rank);
GroupAlgebra gaMonomial(const Coweight& mu, const TauLaurent& c);
void gaAddTerm(GroupAlgebra* a, const Coweight& mu, const TauLaurent& c);
GroupAlgebra gaAdd(const GroupAlgebra& a, const GroupAlgebra& b);
GroupAlgebra gaSub(const GroupAlgebra& a, const GroupAlgebra& b);
GroupAlgebra gaMul(const GroupAlgebra& a, const GroupAlgebra& b);
GroupAlgebra gaScale(const TauLaurent& c, const GroupAlgebra& a);
// Y_mu -> Y_{mu m} for a right-action matrix m.
GroupAlgebra gaApply(const GroupAlgebra& a, const Mat& m);
// tau -> 1, Y -> 1 (dimension counts).
long long gaEvalAtOne(const GroupAlgebra& a);

// Exact division by (1 - Y_gamma); gamma must have negative coordinate sum,
// and the quotient must come out polynomial, otherwise DivisionNotExact.
GroupAlgebra gaDivideFactor(const GroupAlgebra& a, const Coweight& gamma);

// Y_mu . H_{s_i} in the polynomial representation (finite i only):
//   (tau^-1 - tau Y_{-c_i}) / (1 - Y_{-c_i}) Y_{s_i mu}
//     + (tau - tau^-1) / (1 - Y_{-c_i}) Y_mu
// where c_i = n_i acheck_i is the rescaled coroot; always expands exactly.
GroupAlgebra polyRepGen(const RootContext& ctx, const GroupAlgebra& p, int i);
GroupAlgebra polyRepWord(const RootContext& ctx, const GroupAlgebra& p,
                         const std::vector<int>& word);

// Weyl character of the (possibly twisted) system at a dominant coweight in
// the rescaled lattice, by the alternating-sum-over-W formula with exact
// factor division.
GroupAlgebra weylCharacter(const System& sys, const Coweight& la);

// chi_mu chi_la = sum c_zeta chi_zeta by peeling dominance-maximal terms;
// coefficients are nonnegative integers and dimensions are rechecked.
std::map<Coweight, long long> lrCoeffs(const System& sys, const Coweight& mu,
                                       const Coweight& la);

// Spherical Hall-Littlewood element at a dominant coweight of the rescaled
// lattice, via the summed rational formula evaluated exactly.
GroupAlgebra hallLittlewood(const System& sys, const Coweight& mu);

// Coefficients p_mu with chi_la = sum p_mu S(h_mu), solved top down in
// dominance order; diagonal entries come out as signed tau-powers.
std::map<Coweight, TauLaurent> satakeTransition(const System& sys,
                                                const Coweight& la);

// ---------------------------------------------------------------------------
// Bernstein presentation.  An element is a finite sum H_w p(Y) over the
// finite Weyl group, with the finite part stored as its action matrix.  The
// defining commutation rule is
//   H_s Y_beta - Y_{s beta} H_s = (tau^-1 - tau)(Y_{s beta} - Y_beta)
//                                   / (1 - Y_{-c_s}),
// whose right side is always an exact polynomial.

using BernsteinElement = std::map<Mat, GroupAlgebra>;

BernsteinElement bernsteinY(const System& sys, const Coweight& beta);
BernsteinElement bernsteinH(const System& sys, const Mat& w);
BernsteinElement bernsteinAdd(const BernsteinElement& a,
                              const BernsteinElement& b);
BernsteinElement bernsteinSub(const BernsteinElement& a,
                              const BernsteinElement& b);
BernsteinElement bernsteinMul(const System& sys, const BernsteinElement& a,
                              const BernsteinElement& b);

}  // namespace hecke
