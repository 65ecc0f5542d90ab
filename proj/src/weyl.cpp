#include "weyl.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace weyl {

namespace {

Mat identityMat(int n) {
  Mat m(n, std::vector<long long>(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

bool isIdentityMat(const Mat& m) {
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m.size(); ++j)
      if (m[i][j] != (i == j ? 1 : 0)) return false;
  return true;
}

}  // namespace

bool AffineElement::translationOnly() const { return isIdentityMat(m); }

bool AffineElement::isIdentity() const {
  return translationOnly() &&
         std::all_of(beta.begin(), beta.end(), [](long long x) { return x == 0; });
}

System::System(RootContext ctx) : ctx_(std::move(ctx)) {
  affineRoot_ = ctx_.twistedHighest;
  const int r = rank();
  const int nroots = rootCount();
  for (int a = 0; a < nroots; ++a)
    rootIndex_[ctx_.positiveRoots[a].rootCoords] = a;

  rootReflect_.assign(r, std::vector<int>(nroots, 0));
  for (int i = 0; i < r; ++i)
    for (int a = 0; a < nroots; ++a) {
      const auto& c = ctx_.positiveRoots[a].rootCoords;
      long long p = 0;  // <coroot_i, root a>
      for (int j = 0; j < r; ++j) p += ctx_.datum.cartan[i][j] * c[j];
      std::vector<long long> image = c;
      image[i] -= p;
      if (std::all_of(image.begin(), image.end(),
                      [](long long x) { return x <= 0; })) {
        rootReflect_[i][a] = ~a;  // only the simple root itself flips sign
      } else {
        auto it = rootIndex_.find(image);
        if (it == rootIndex_.end())
          throw std::logic_error("reflection left the root system");
        rootReflect_[i][a] = it->second;
      }
    }

  // Longest element: keep ascending until every simple coroot is inverted.
  Mat w0 = identityMat(r);
  for (int steps = 0; steps <= nroots; ++steps) {
    int ascent = -1;
    for (int i = 0; i < r && ascent < 0; ++i) {
      bool rowNeg = std::any_of(w0[i].begin(), w0[i].end(),
                                [](long long x) { return x < 0; });
      if (!rowNeg) ascent = i;
    }
    if (ascent < 0) break;
    w0 = rootdata::matMul(generator(ascent).m, w0);
  }
  longestWord_ = finiteWord(w0);
  if (static_cast<int>(longestWord_.size()) != nroots)
    throw std::logic_error("longest element has wrong length");
}

AffineElement System::identity() const {
  return {identityMat(rank()), Coweight(rank(), 0)};
}

AffineElement System::reflection(int rootIdx) const {
  const int r = rank();
  const auto& root = ctx_.positiveRoots.at(rootIdx);
  std::vector<long long> p(r, 0);  // <coroot_k, a> per k
  for (int k = 0; k < r; ++k)
    for (int j = 0; j < r; ++j)
      p[k] += ctx_.datum.cartan[k][j] * root.rootCoords[j];
  Mat m = identityMat(r);
  for (int k = 0; k < r; ++k)
    for (int j = 0; j < r; ++j) m[k][j] -= p[k] * root.corootCoords[j];
  return {std::move(m), Coweight(r, 0)};
}

AffineElement System::generator(int k) const {
  if (k < 0 || k > rank()) throw std::out_of_range("generator index");
  if (k < rank()) {
    // s_k as the reflection in the k-th simple root.
    const int r = rank();
    Mat m = identityMat(r);
    for (int j = 0; j < r; ++j) m[j][k] -= ctx_.datum.cartan[j][k];
    return {std::move(m), Coweight(r, 0)};
  }
  AffineElement s = reflection(affineRoot_);
  const auto& star = ctx_.positiveRoots[affineRoot_];
  for (int j = 0; j < rank(); ++j)
    s.beta[j] = -static_cast<long long>(star.nCoroot) * star.corootCoords[j];
  return s;
}

AffineElement System::translation(const Coweight& beta) const {
  if (!rootdata::inTildeLattice(ctx_, beta))
    throw std::invalid_argument("translation by " +
                                rootdata::renderCoweight(beta) +
                                " leaves the twisted lattice");
  return {identityMat(rank()), beta};
}

AffineElement System::mul(const AffineElement& x, const AffineElement& y) const {
  AffineElement z;
  z.m = rootdata::matMul(x.m, y.m);
  z.beta = rootdata::vecMat(x.beta, y.m);
  for (int j = 0; j < rank(); ++j) z.beta[j] += y.beta[j];
  return z;
}

AffineElement System::mulGen(int k, const AffineElement& x) const {
  return mul(generator(k), x);
}

AffineElement System::inverse(const AffineElement& x) const {
  Mat adj;
  long long det;
  rootdata::adjugate(x.m, &adj, &det);
  if (det != 1 && det != -1) throw std::logic_error("non-unimodular element");
  AffineElement z;
  z.m.assign(rank(), std::vector<long long>(rank(), 0));
  for (int i = 0; i < rank(); ++i)
    for (int j = 0; j < rank(); ++j) z.m[i][j] = adj[i][j] * det;
  z.beta = rootdata::vecMat(x.beta, z.m);
  for (auto& v : z.beta) v = -v;
  return z;
}

AffineElement System::fromWord(const std::vector<int>& word) const {
  AffineElement x = identity();
  for (int k : word) x = mul(x, generator(k));
  return x;
}

Coweight System::apply(const Coweight& la, const AffineElement& x) const {
  Coweight out = rootdata::vecMat(la, x.m);
  for (int j = 0; j < rank(); ++j) out[j] += x.beta[j];
  return out;
}

Coweight System::dotApply(const Coweight& la, const AffineElement& x) const {
  Coweight doubled(rank());
  for (int j = 0; j < rank(); ++j) doubled[j] = 2 * la[j] + ctx_.twoRho[j];
  Coweight out = rootdata::vecMat(doubled, x.m);
  for (int j = 0; j < rank(); ++j) {
    out[j] += 2 * x.beta[j] - ctx_.twoRho[j];
    if (out[j] % 2 != 0) throw std::logic_error("dot action left the lattice");
    out[j] /= 2;
  }
  return out;
}

std::vector<int> System::finiteWord(const Mat& m) const {
  auto cached = wordCache_.find(m);
  if (cached != wordCache_.end()) return cached->second;
  std::vector<int> word;
  Mat cur = m;
  for (;;) {
    int descent = -1;
    for (int i = 0; i < rank() && descent < 0; ++i)
      if (std::any_of(cur[i].begin(), cur[i].end(),
                      [](long long x) { return x < 0; }))
        descent = i;
    if (descent < 0) break;
    word.push_back(descent);
    cur = rootdata::matMul(generator(descent).m, cur);
    if (word.size() > ctx_.positiveRoots.size())
      throw NonTermination("matrix is not a Weyl group element");
  }
  if (!isIdentityMat(cur))
    throw std::logic_error("descent-free matrix is not the identity");
  wordCache_[m] = word;
  return word;
}

int System::rootImage(int rootIdx, const std::vector<int>& word) const {
  int s = rootIdx;
  for (int k : word)
    s = (s >= 0) ? rootReflect_[k][s] : ~rootReflect_[k][~s];
  return s;
}

long long System::length(const AffineElement& x) const {
  std::vector<int> word = finiteWord(x.m);
  std::reverse(word.begin(), word.end());  // word of sigma^-1
  Coweight pa = rootdata::vecMat(x.beta, ctx_.datum.cartan);
  long long total = 0;
  for (int a = 0; a < rootCount(); ++a) {
    const auto& root = ctx_.positiveRoots[a];
    long long pairing = 0;
    for (int j = 0; j < rank(); ++j) pairing += root.rootCoords[j] * pa[j];
    if (pairing % root.nCoroot != 0)
      throw std::logic_error("translation part pairs fractionally");
    long long v = pairing / root.nCoroot;
    if (rootImage(a, word) < 0) v += 1;
    total += std::llabs(v);
  }
  return total;
}

bool System::isLeftDescent(int k, const AffineElement& x) const {
  return length(mulGen(k, x)) < length(x);
}

bool System::isRightDescent(const AffineElement& x, int k) const {
  return length(mul(x, generator(k))) < length(x);
}

std::vector<int> System::canonicalWord(const AffineElement& x) const {
  std::vector<int> word;
  AffineElement cur = x;
  long long len = length(cur);
  while (!cur.isIdentity()) {
    int pick = -1;
    for (int k = 0; k <= rank() && pick < 0; ++k) {
      AffineElement next = mulGen(k, cur);
      if (length(next) < len) {
        pick = k;
        cur = next;
      }
    }
    if (pick < 0) throw std::logic_error("nonidentity element with no descent");
    word.push_back(pick);
    --len;
  }
  return word;
}

bool System::inParabolic(const AffineElement& x, const std::vector<int>& J) const {
  std::set<int> allowed(J.begin(), J.end());
  for (int k : canonicalWord(x))
    if (!allowed.count(k)) return false;
  return true;
}

bool System::insideClosedAlcove(const Coweight& la) const {
  Coweight doubled(rank());
  for (int j = 0; j < rank(); ++j) doubled[j] = 2 * la[j] + ctx_.twoRho[j];
  Coweight p = rootdata::vecMat(doubled, ctx_.datum.cartan);
  for (int i = 0; i < rank(); ++i)
    if (p[i] > 0) return false;
  const auto& star = ctx_.positiveRoots[affineRoot_];
  long long affPairing = 0;
  for (int j = 0; j < rank(); ++j) affPairing += star.rootCoords[j] * p[j];
  return affPairing >= -2 * star.nCoroot;
}

AlcovePoint System::alcoveRep(const Coweight& la) const {
  AlcovePoint out;
  AffineElement x = identity();
  Coweight cur = la;
  long long cap = 50;
  for (long long v : la) cap += 10 * (1 + std::llabs(v));
  Coweight rhoPair = rootdata::vecMat(ctx_.twoRho, ctx_.datum.cartan);
  for (long long steps = 0; !insideClosedAlcove(cur); ++steps) {
    if (steps > cap)
      throw NonTermination("alcove walk from " + rootdata::renderCoweight(la));
    Coweight p = rootdata::pairings(ctx_, cur);
    int pick = affineIndex();
    for (int i = 0; i < rank(); ++i)
      if (2 * p[i] + rhoPair[i] > 0) {  // <cur + rho, alpha_i> > 0, doubled
        pick = i;
        break;
      }
    AffineElement g = generator(pick);
    cur = dotApply(cur, g);
    x = mul(g, x);
  }
  if (dotApply(cur, x) != la)
    throw std::logic_error("alcove walk lost track of its product");
  out.eta = cur;
  out.xRaw = x;

  Coweight doubled(rank());
  for (int j = 0; j < rank(); ++j) doubled[j] = 2 * cur[j] + ctx_.twoRho[j];
  Coweight p = rootdata::vecMat(doubled, ctx_.datum.cartan);
  for (int i = 0; i < rank(); ++i)
    if (p[i] == 0) out.stabilizer.push_back(i);
  const auto& star = ctx_.positiveRoots[affineRoot_];
  long long affPairing = 0;
  for (int j = 0; j < rank(); ++j) affPairing += star.rootCoords[j] * p[j];
  if (affPairing == -2 * star.nCoroot)
    out.stabilizer.push_back(affineIndex());

  AffineElement xmin = x;
  long long len = length(xmin);
  for (bool dropped = true; dropped;) {
    dropped = false;
    for (int k : out.stabilizer) {
      AffineElement next = mulGen(k, xmin);
      long long nl = length(next);
      if (nl < len) {
        xmin = next;
        len = nl;
        dropped = true;
        break;
      }
    }
  }
  out.xMin = xmin;
  return out;
}

std::vector<Coweight> System::dominantBlockElements(const Coweight& eta,
                                                    const Coweight& ceiling) const {
  for (long long c : ceiling)
    if (c < 0) throw std::invalid_argument("negative ceiling");
  std::vector<Coweight> out;
  long long cells = 1;
  for (long long c : ceiling) cells *= c + 1;
  for (long long it = 0; it < cells; ++it) {
    long long t = it;
    Coweight la(rank());
    for (int i = 0; i < rank(); ++i) {
      la[i] = t % (ceiling[i] + 1);
      t /= ceiling[i] + 1;
    }
    if (!rootdata::isDominant(ctx_, la)) continue;
    if (alcoveRep(la).eta == eta) out.push_back(la);
  }
  std::sort(out.begin(), out.end(), [](const Coweight& x, const Coweight& y) {
    long long sx = std::accumulate(x.begin(), x.end(), 0LL);
    long long sy = std::accumulate(y.begin(), y.end(), 0LL);
    if (sx != sy) return sx < sy;
    return x < y;
  });
  return out;
}

std::vector<AffineElement> System::elementsUpToLength(const std::vector<int>& gens,
                                                      long long maxLen) const {
  std::set<AffineElement> seen{identity()};
  std::vector<AffineElement> frontier{identity()}, all{identity()};
  for (long long len = 1; len <= maxLen && !frontier.empty(); ++len) {
    std::vector<AffineElement> next;
    for (const auto& x : frontier)
      for (int k : gens) {
        AffineElement y = mul(x, generator(k));
        if (seen.count(y)) continue;
        if (length(y) != len) continue;
        seen.insert(y);
        next.push_back(y);
        if (seen.size() > 500000)
          throw NonTermination("group enumeration exploded");
      }
    all.insert(all.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return all;
}

std::vector<AffineElement> System::minimalCosetReps(const std::vector<int>& J,
                                                    long long maxLen,
                                                    bool includeAffine) const {
  std::vector<int> gens;
  for (int k = 0; k < rank() + (includeAffine ? 1 : 0); ++k) gens.push_back(k);
  std::vector<AffineElement> out;
  for (const auto& x : elementsUpToLength(gens, maxLen)) {
    bool minimal = true;
    for (int j : J)
      if (isLeftDescent(j, x)) {
        minimal = false;
        break;
      }
    if (minimal) out.push_back(x);
  }
  std::sort(out.begin(), out.end(),
            [this](const AffineElement& x, const AffineElement& y) {
              long long lx = length(x), ly = length(y);
              if (lx != ly) return lx < ly;
              return x < y;
            });
  return out;
}

ParabolicData System::parabolicData(const std::vector<int>& J) const {
  std::set<int> dedup(J.begin(), J.end());
  for (int k : dedup)
    if (k < 0 || k > rank()) throw std::out_of_range("parabolic index");
  if (static_cast<int>(dedup.size()) == rank() + 1)
    throw InfiniteParabolic("the full affine generator set spans an infinite group");
  std::vector<int> gens(dedup.begin(), dedup.end());

  ParabolicData out;
  std::set<AffineElement> seen{identity()};
  std::vector<AffineElement> frontier{identity()};
  std::vector<std::vector<AffineElement>> levels{{identity()}};
  while (!frontier.empty()) {
    std::vector<AffineElement> next;
    long long len = static_cast<long long>(levels.size());
    for (const auto& x : frontier)
      for (int k : gens) {
        AffineElement y = mul(x, generator(k));
        if (seen.count(y)) continue;
        if (length(y) != len) continue;
        seen.insert(y);
        next.push_back(y);
        if (seen.size() > 200000)
          throw NonTermination("parabolic subgroup enumeration exploded");
      }
    if (next.empty()) break;
    std::sort(next.begin(), next.end());
    levels.push_back(next);
    frontier = levels.back();
  }
  out.poincare.resize(levels.size());
  for (size_t l = 0; l < levels.size(); ++l) {
    out.poincare[l] = static_cast<long long>(levels[l].size());
    for (const auto& x : levels[l]) out.elements.push_back(x);
  }
  if (levels.back().size() != 1)
    throw std::logic_error("parabolic subgroup lacks a unique longest element");
  out.longest = levels.back()[0];
  out.longestLength = static_cast<long long>(levels.size()) - 1;
  return out;
}

bool System::bruhatLeq(const AffineElement& x, const AffineElement& y) const {
  if (x.isIdentity()) return true;
  if (length(x) > length(y)) return false;
  int k = canonicalWord(y)[0];
  AffineElement sy = mulGen(k, y);
  if (isLeftDescent(k, x)) return bruhatLeq(mulGen(k, x), sy);
  return bruhatLeq(x, sy);
}

bool System::regularDoubleCoset(const AffineElement& x,
                                const std::vector<int>& leftJ,
                                const std::vector<int>& rightK) const {
  AffineElement xinv = inverse(x);
  for (const auto& w : parabolicData(leftJ).elements) {
    if (w.isIdentity()) continue;
    if (inParabolic(mul(mul(xinv, w), x), rightK)) return false;
  }
  return true;
}

std::string renderElement(const System& sys, const AffineElement& x) {
  std::vector<int> word = sys.canonicalWord(x);
  if (word.empty()) return "e";
  std::string s;
  for (size_t i = 0; i < word.size(); ++i) {
    if (i) s += '.';
    s += (word[i] == sys.affineIndex()) ? "A" : std::to_string(word[i]);
  }
  return s;
}

}  // namespace weyl
