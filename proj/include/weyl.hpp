#pragma once

// Finite and affine Weyl groups acting on coweights from the right.  An
// element is sigma * t(beta); multiplying and inverting these pairs is cheap,
// and lengths come from the wall-counting formula with the per-root n values
// of the underlying RootContext.  Building the context with n = 1 recovers
// the ordinary affine Weyl group, so the same code serves both settings.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "root_data.hpp"

namespace weyl {

using rootdata::Coweight;
using rootdata::Mat;
using rootdata::RootContext;

struct NonTermination : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfiniteParabolic : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// sigma * t(beta); m is the right-action matrix of sigma on coweight rows.
struct AffineElement {
  Mat m;
  Coweight beta;

  bool operator==(const AffineElement& o) const {
    return m == o.m && beta == o.beta;
  }
  bool operator<(const AffineElement& o) const {
    if (m != o.m) return m < o.m;
    return beta < o.beta;
  }
  bool translationOnly() const;
  bool isIdentity() const;
};

struct AlcovePoint {
  Coweight eta;                 // orbit representative in the closed alcove
  AffineElement xRaw;           // lambda = eta dot xRaw (walk product)
  AffineElement xMin;           // minimal length element of Stab(eta) * xRaw
  std::vector<int> stabilizer;  // generators fixing eta; rank() = affine node
};

struct ParabolicData {
  std::vector<AffineElement> elements;  // sorted by (length, element key)
  AffineElement longest;
  long long longestLength = 0;
  std::vector<long long> poincare;  // coefficient of q^k at index k
};

class System {
 public:
  explicit System(RootContext ctx);

  const RootContext& ctx() const { return ctx_; }
  int rank() const { return ctx_.rank(); }
  int affineIndex() const { return rank(); }  // generator index of s_0
  int affineRootIdx() const { return affineRoot_; }
  int rootCount() const { return static_cast<int>(ctx_.positiveRoots.size()); }
  // n(coroot) of the positive root behind the affine wall.
  int affineN() const { return ctx_.positiveRoots[affineRoot_].nCoroot; }

  AffineElement identity() const;
  // k in [0, rank()]; rank() is the affine generator.
  AffineElement generator(int k) const;
  AffineElement reflection(int rootIdx) const;
  AffineElement translation(const Coweight& beta) const;
  AffineElement mul(const AffineElement& x, const AffineElement& y) const;
  AffineElement mulGen(int k, const AffineElement& x) const;  // g_k * x
  AffineElement inverse(const AffineElement& x) const;
  AffineElement fromWord(const std::vector<int>& word) const;

  Coweight apply(const Coweight& la, const AffineElement& x) const;
  Coweight dotApply(const Coweight& la, const AffineElement& x) const;

  long long length(const AffineElement& x) const;
  bool isLeftDescent(int k, const AffineElement& x) const;
  bool isRightDescent(const AffineElement& x, int k) const;
  // Reduced word obtained by always peeling the smallest left descent;
  // canonical, so equal words mean equal elements.
  std::vector<int> canonicalWord(const AffineElement& x) const;
  bool inParabolic(const AffineElement& x, const std::vector<int>& J) const;

  // Image of a positive root under the word (applied left to right); roots
  // are tracked by index, with ~idx encoding the negative of root idx.
  int rootImage(int rootIdx, const std::vector<int>& word) const;

  const std::vector<int>& longestWord() const { return longestWord_; }
  AffineElement longestElement() const { return fromWord(longestWord_); }

  bool insideClosedAlcove(const Coweight& la) const;
  AlcovePoint alcoveRep(const Coweight& la) const;
  // Dominant coweights with coordinates at most `ceiling` whose orbit
  // representative is `eta`, sorted by (coordinate sum, lex).
  std::vector<Coweight> dominantBlockElements(const Coweight& eta,
                                              const Coweight& ceiling) const;

  std::vector<AffineElement> elementsUpToLength(const std::vector<int>& gens,
                                                long long maxLen) const;
  // Minimal coset representatives for W_J \ W, among elements of length at
  // most maxLen (the finite group when includeAffine is false).
  std::vector<AffineElement> minimalCosetReps(const std::vector<int>& J,
                                              long long maxLen,
                                              bool includeAffine) const;
  ParabolicData parabolicData(const std::vector<int>& J) const;
  bool bruhatLeq(const AffineElement& x, const AffineElement& y) const;
  // True when no nontrivial w in W_leftJ satisfies x^-1 w x in W_rightK.
  bool regularDoubleCoset(const AffineElement& x, const std::vector<int>& leftJ,
                          const std::vector<int>& rightK) const;

 private:
  std::vector<int> finiteWord(const Mat& m) const;

  RootContext ctx_;
  int affineRoot_ = -1;
  // rootReflect_[i][a] = signed index of (root a) s_i.
  std::vector<std::vector<int>> rootReflect_;
  std::map<std::vector<long long>, int> rootIndex_;
  std::vector<int> longestWord_;
  mutable std::map<Mat, std::vector<int>> wordCache_;
};

std::string renderElement(const System& sys, const AffineElement& x);

}  // namespace weyl
