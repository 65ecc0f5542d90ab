#include "metaplectic.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace metaplectic {

namespace {

using rootdata::Mat;

Coefficient cInt(int n, long long v) { return Coefficient::integer(n, v); }
Coefficient cTau(int n, int e, long long c = 1) {
  return Coefficient::tauPower(n, e, c);
}

// g_j^{-1}: the trivial index has g = -1, self-inverse; otherwise
// g_j g_{-j} = tau^2 gives g_j^{-1} = tau^-2 g_{-j}.
Coefficient gaussInverse(int n, long long j) {
  if (((j % n) + n) % n == 0) return cInt(n, -1);
  return Coefficient::gauss(n, -j) * cTau(n, -2);
}

// One kappa factor tau^-1 g_j, or its inverse tau^-1 g_{-j} (resp. -tau).
Coefficient kappaFactor(int n, long long j, bool inverse) {
  if (!inverse) return Coefficient::gauss(n, j) * cTau(n, -1);
  if (((j % n) + n) % n == 0) return cTau(n, 1, -1);
  return Coefficient::gauss(n, -j) * cTau(n, -1);
}

Coweight zeroOf(size_t rank) { return Coweight(rank, 0); }

long long coordSum(const Coweight& v) {
  return std::accumulate(v.begin(), v.end(), 0LL);
}

bool sumLexLess(const Coweight& a, const Coweight& b) {
  long long sa = coordSum(a), sb = coordSum(b);
  if (sa != sb) return sa < sb;
  return a < b;
}

void requireFinite(const System& sys, int a, const char* who) {
  if (a < 0 || a >= sys.rank())
    throw std::invalid_argument(std::string(who) +
                                ": finite simple reflection index required");
}

PolyElement denomAsPoly(int period, const DenomFactor& fac) {
  PolyElement out;
  peAddTerm(&out, zeroOf(fac.gamma.size()), cInt(period, 1));
  peAddTerm(&out, fac.gamma, cTau(period, fac.vFactor ? -2 : 0, -1));
  return out;
}

PolyElement denomProduct(int period, const std::map<DenomFactor, int>& den,
                         size_t rank) {
  PolyElement out = peMonomial(zeroOf(rank), cInt(period, 1));
  for (const auto& [fac, mult] : den)
    for (int i = 0; i < mult; ++i) out = peMul(out, denomAsPoly(period, fac));
  return out;
}

// Exact division of f by 1 - c Y_gamma (c = 1 or tau^-2).  Works along a
// linear functional that is negative on gamma, peeling the top term; a
// nonzero tail below the input's range means the division is not exact.
bool tryDivideBinomial(int period, const PolyElement& f, const DenomFactor& fac,
                       PolyElement* quot) {
  quot->clear();
  if (f.empty()) return true;
  const Coweight& gamma = fac.gamma;
  auto phi = [&gamma](const Coweight& w) {
    long long s = 0;
    for (size_t i = 0; i < w.size(); ++i) s -= w[i] * gamma[i];
    return s;
  };
  long long phiMin = 0;
  bool first = true;
  for (const auto& [w, c] : f) {
    long long p = phi(w);
    if (first || p < phiMin) phiMin = p;
    first = false;
  }
  Coefficient cfac = cTau(period, fac.vFactor ? -2 : 0);
  PolyElement rem = f;
  for (long long guard = 0; !rem.empty(); ++guard) {
    if (guard > 200000) return false;
    auto top = rem.begin();
    for (auto it = std::next(rem.begin()); it != rem.end(); ++it)
      if (phi(it->first) > phi(top->first)) top = it;
    if (phi(top->first) < phiMin) return false;
    Coweight w = top->first;
    Coefficient qc = top->second;
    peAddTerm(quot, w, qc);
    peAddTerm(&rem, w, -qc);
    Coweight shifted = w;
    for (size_t i = 0; i < w.size(); ++i) shifted[i] += gamma[i];
    peAddTerm(&rem, shifted, qc * cfac);
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Polynomial helpers.

PolyElement peMonomial(const Coweight& mu, const Coefficient& c) {
  PolyElement out;
  peAddTerm(&out, mu, c);
  return out;
}

void peAddTerm(PolyElement* a, const Coweight& mu, const Coefficient& c) {
  if (c.isZero()) return;
  auto it = a->find(mu);
  if (it == a->end()) {
    a->emplace(mu, c);
    return;
  }
  it->second += c;
  if (it->second.isZero()) a->erase(it);
}

PolyElement peAdd(const PolyElement& a, const PolyElement& b) {
  PolyElement out = a;
  for (const auto& [mu, c] : b) peAddTerm(&out, mu, c);
  return out;
}

PolyElement peSub(const PolyElement& a, const PolyElement& b) {
  PolyElement out = a;
  for (const auto& [mu, c] : b) peAddTerm(&out, mu, -c);
  return out;
}

PolyElement peScale(const Coefficient& c, const PolyElement& a) {
  PolyElement out;
  for (const auto& [mu, v] : a) peAddTerm(&out, mu, c * v);
  return out;
}

PolyElement peMul(const PolyElement& a, const PolyElement& b) {
  PolyElement out;
  for (const auto& [mu, c] : a)
    for (const auto& [nu, d] : b) {
      Coweight w = mu;
      for (size_t i = 0; i < w.size(); ++i) w[i] += nu[i];
      peAddTerm(&out, w, c * d);
    }
  return out;
}

PolyElement peApply(const PolyElement& a, const rootdata::Mat& m) {
  PolyElement out;
  for (const auto& [mu, c] : a) peAddTerm(&out, rootdata::vecMat(mu, m), c);
  return out;
}

PolyElement fromGroupAlgebra(int period, const hecke::GroupAlgebra& a) {
  PolyElement out;
  for (const auto& [mu, c] : a)
    peAddTerm(&out, mu, ring::fromTauLaurent(period, c));
  return out;
}

// ---------------------------------------------------------------------------
// Localization.

LocalizedElement lzFromPoly(const PolyElement& f) {
  return LocalizedElement{f, {}};
}

LocalizedElement lzScale(const Coefficient& c, const LocalizedElement& a) {
  return LocalizedElement{peScale(c, a.num), a.den};
}

LocalizedElement lzMulPoly(const LocalizedElement& a, const PolyElement& f) {
  return LocalizedElement{peMul(a.num, f), a.den};
}

LocalizedElement lzMul(const LocalizedElement& a, const LocalizedElement& b) {
  LocalizedElement out{peMul(a.num, b.num), a.den};
  for (const auto& [fac, mult] : b.den) out.den[fac] += mult;
  return out;
}

LocalizedElement lzAdd(const LocalizedElement& a, const LocalizedElement& b) {
  if (a.num.empty()) return b;
  if (b.num.empty()) return a;
  int period = a.num.begin()->second.period();
  size_t rank = a.num.begin()->first.size();
  LocalizedElement out;
  out.den = a.den;
  for (const auto& [fac, mult] : b.den)
    out.den[fac] = std::max(out.den[fac], mult);
  std::map<DenomFactor, int> extraA = out.den, extraB = out.den;
  for (const auto& [fac, mult] : a.den) extraA[fac] -= mult;
  for (const auto& [fac, mult] : b.den) extraB[fac] -= mult;
  std::erase_if(extraA, [](const auto& kv) { return kv.second == 0; });
  std::erase_if(extraB, [](const auto& kv) { return kv.second == 0; });
  out.num = peAdd(peMul(a.num, denomProduct(period, extraA, rank)),
                  peMul(b.num, denomProduct(period, extraB, rank)));
  return out;
}

LocalizedElement lzSimplify(const LocalizedElement& a) {
  if (a.num.empty()) return LocalizedElement{};
  int period = a.num.begin()->second.period();
  LocalizedElement out = a;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = out.den.begin(); it != out.den.end();) {
      PolyElement quot;
      if (tryDivideBinomial(period, out.num, it->first, &quot)) {
        out.num = quot;
        if (--it->second == 0) it = out.den.erase(it);
        changed = true;
        break;
      }
      ++it;
    }
  }
  return out;
}

bool lzEquals(int period, const LocalizedElement& a, const LocalizedElement& b) {
  size_t rank = 0;
  if (!a.num.empty())
    rank = a.num.begin()->first.size();
  else if (!b.num.empty())
    rank = b.num.begin()->first.size();
  else
    return true;
  return peMul(a.num, denomProduct(period, b.den, rank)) ==
         peMul(b.num, denomProduct(period, a.den, rank));
}

PolyElement lzAsPoly(const LocalizedElement& a) {
  LocalizedElement s = lzSimplify(a);
  if (!s.den.empty())
    throw IllegalDenominator(
        "localized element does not clear its denominator");
  return s.num;
}

// ---------------------------------------------------------------------------
// The star operation and the Demazure-Lusztig operators.

LocalizedElement cgReflect(const System& sys, const LocalizedElement& f,
                           int a) {
  requireFinite(sys, a, "cgReflect");
  const RootContext& ctx = sys.ctx();
  int n = ctx.n;
  long long m = ctx.nSimple[a];
  long long Q = ctx.qSimple[a];
  Mat refl = sys.generator(a).m;

  LocalizedElement out;
  for (const auto& [fac, mult] : f.den)
    out.den[DenomFactor{rootdata::vecMat(fac.gamma, refl), fac.vFactor}] +=
        mult;
  Coweight negScaled = zeroOf(ctx.rank());
  negScaled[a] = -m;
  out.den[DenomFactor{negScaled, true}] += 1;

  Coefficient oneMinusV = cInt(n, 1) - cTau(n, -2);
  for (const auto& [la, c] : f.num) {
    Coweight base = rootdata::vecMat(la, refl);
    long long r = rootdata::pairings(ctx, la)[a];
    long long rr = ((r % m) + m) % m;
    Coefficient gc = c * Coefficient::gauss(n, Q * (1 + r)) * cTau(n, -2);
    Coweight w = base;
    w[a] += rr;
    peAddTerm(&out.num, w, c * oneMinusV);
    w = base;
    w[a] += m - 1;
    peAddTerm(&out.num, w, -gc);
    w = base;
    w[a] -= 1;
    peAddTerm(&out.num, w, gc);
  }
  return lzSimplify(out);
}

PolyElement dlAct(const System& sys, const PolyElement& f, int a) {
  requireFinite(sys, a, "dlAct");
  const RootContext& ctx = sys.ctx();
  int n = ctx.n;
  long long m = ctx.nSimple[a];
  long long Q = ctx.qSimple[a];
  Coefficient tsqMinusOne = cTau(n, 2) - cInt(n, 1);

  PolyElement out;
  for (const auto& [la, c] : f) {
    long long r = rootdata::pairings(ctx, la)[a];
    peAddTerm(&out, sys.dotApply(la, sys.generator(a)),
              c * Coefficient::gauss(n, Q * (r + 1)));
    if (r >= 0) {
      for (long long k = 0; k * m <= r; ++k) {
        Coweight w = la;
        w[a] -= k * m;
        peAddTerm(&out, w, c * tsqMinusOne);
      }
    } else {
      for (long long k = 1; k * m < -r; ++k) {
        Coweight w = la;
        w[a] += k * m;
        peAddTerm(&out, w, -(c * tsqMinusOne));
      }
    }
  }
  return out;
}

PolyElement heckeWordAct(const System& sys, const PolyElement& f,
                         const std::vector<WordItem>& word) {
  const RootContext& ctx = sys.ctx();
  PolyElement cur = f;
  for (const auto& item : word) {
    if (item.gen >= 0) {
      cur = peScale(cTau(ctx.n, -1), dlAct(sys, cur, item.gen));
      continue;
    }
    if (!rootdata::inTildeLattice(ctx, item.beta))
      throw NotInTildeLattice(
          "heckeWordAct: translation step outside the twisted lattice");
    PolyElement shifted;
    for (const auto& [la, c] : cur) {
      Coweight w = la;
      for (size_t i = 0; i < w.size(); ++i) w[i] += item.beta[i];
      shifted.emplace(w, c);
    }
    cur = std::move(shifted);
  }
  return cur;
}

PolyElement symmetrize(const System& sys, const PolyElement& f) {
  const RootContext& ctx = sys.ctx();
  std::vector<int> J(ctx.rank());
  std::iota(J.begin(), J.end(), 0);
  weyl::ParabolicData pd = sys.parabolicData(J);

  std::map<AffineElement, PolyElement> partial;
  partial[sys.identity()] = f;
  PolyElement total = peScale(cTau(ctx.n, -pd.longestLength), f);
  for (const auto& w : pd.elements) {
    if (w.isIdentity()) continue;
    int k = 0;
    while (!sys.isRightDescent(w, k)) ++k;
    const PolyElement& prev = partial.at(sys.mul(w, sys.generator(k)));
    PolyElement img = peScale(cTau(ctx.n, -1), dlAct(sys, prev, k));
    total = peAdd(total,
                  peScale(cTau(ctx.n, static_cast<int>(sys.length(w) -
                                                       pd.longestLength)),
                          img));
    partial[w] = std::move(img);
  }
  return total;
}

// ---------------------------------------------------------------------------
// kappa and the spherical quotient.

namespace {

Coefficient kappaImpl(const System& sys, const Coweight& mu, bool inverse) {
  const RootContext& ctx = sys.ctx();
  weyl::AlcovePoint ap = sys.alcoveRep(mu);
  weyl::AffineElement finitePart{ap.xMin.m, Coweight(ctx.rank(), 0)};
  std::vector<int> word = sys.canonicalWord(finitePart);
  Coefficient out = cInt(ctx.n, 1);
  for (int r = 0; r < sys.rootCount(); ++r) {
    if (sys.rootImage(r, word) >= 0) continue;
    const rootdata::Root& root = ctx.positiveRoots[r];
    long long pairing = rootdata::rootPairing(ctx, ap.eta, r) + root.height;
    out = out * kappaFactor(ctx.n, pairing * root.qValue, inverse);
  }
  return out;
}

}  // namespace

Coefficient kappa(const System& sys, const Coweight& mu) {
  return kappaImpl(sys, mu, false);
}

Coefficient kappaInverse(const System& sys, const Coweight& mu) {
  return kappaImpl(sys, mu, true);
}

SphericalElement toVCoords(const System& sys, const SphericalElement& x) {
  if (x.coords == Coords::V) return x;
  SphericalElement out;
  out.coords = Coords::V;
  for (const auto& [mu, c] : x.terms)
    out.terms.emplace(mu, c * kappaImpl(sys, mu, true));
  return out;
}

SphericalElement fromVCoords(const System& sys, const SphericalElement& x) {
  if (x.coords == Coords::Y) return x;
  SphericalElement out;
  out.coords = Coords::Y;
  for (const auto& [mu, c] : x.terms)
    out.terms.emplace(mu, c * kappaImpl(sys, mu, false));
  return out;
}

namespace {

struct Violation {
  Coweight mu;
  int root = -1;
  bool found = false;
};

Violation pickViolation(const RootContext& ctx,
                        const std::map<Coweight, Coefficient>& work,
                        Strategy strategy) {
  Violation v;
  if (strategy == Strategy::RootFirst) {
    for (const auto& [mu, c] : work) {
      std::vector<long long> p = rootdata::pairings(ctx, mu);
      int best = -1;
      for (int i = 0; i < ctx.rank(); ++i)
        if (p[i] < 0 && (best < 0 || p[i] < p[best])) best = i;
      if (best >= 0) return Violation{mu, best, true};
    }
    return v;
  }
  for (const auto& [mu, c] : work) {
    std::vector<long long> p = rootdata::pairings(ctx, mu);
    int first = -1;
    for (int i = 0; i < ctx.rank(); ++i)
      if (p[i] < 0) {
        first = i;
        break;
      }
    if (first < 0) continue;
    if (!v.found || sumLexLess(mu, v.mu)) v = Violation{mu, first, true};
  }
  return v;
}

}  // namespace

SphericalElement straighten(const System& sys, const PolyElement& f,
                            Coords coords, Strategy strategy) {
  const RootContext& ctx = sys.ctx();
  int n = ctx.n;
  std::map<Coweight, Coefficient> work;
  for (const auto& [mu, c] : f) peAddTerm(&work, mu, c);

  for (long long steps = 0;; ++steps) {
    if (steps > 1000000)
      throw weyl::NonTermination("straighten: rewrite step cap exceeded");
    Violation v = pickViolation(ctx, work, strategy);
    if (!v.found) break;
    int i = v.root;
    Coefficient c = work.at(v.mu);
    work.erase(v.mu);
    long long m = ctx.nSimple[i];
    long long p = rootdata::pairings(ctx, v.mu)[i] + 1;
    Coweight dot = sys.dotApply(v.mu, sys.generator(i));
    if (p == 0) continue;  // wall term, drops out
    if (p % m == 0) {
      peAddTerm(&work, dot, -c);
      continue;
    }
    long long j = (((-p) % m) + m) % m;
    Coefficient cc = coords == Coords::V
                         ? cTau(n, -1)
                         : gaussInverse(n, j * ctx.qSimple[i]);
    peAddTerm(&work, dot, c * cc);
    if (p > -m) continue;
    Coweight la1 = dot;
    la1[i] -= j;
    peAddTerm(&work, la1, -c);
    peAddTerm(&work, sys.dotApply(la1, sys.generator(i)), c * cc);
  }
  return SphericalElement{std::move(work), coords};
}

BlockDescriptor blockOf(const System& sys, const Coweight& la) {
  const RootContext& ctx = sys.ctx();
  if (!rootdata::isDominant(ctx, la))
    throw rootdata::NotDominant("blockOf: dominant coweight required");
  weyl::AlcovePoint ap = sys.alcoveRep(la);
  BlockDescriptor b;
  b.eta = ap.eta;
  b.stabilizer = ap.stabilizer;
  b.longestLengthJ = sys.parabolicData(ap.stabilizer).longestLength;
  for (const Coweight& w : sys.dominantBlockElements(ap.eta, la))
    if (rootdata::dominanceLeq(w, la)) b.elements.push_back(w);
  return b;
}

// ---------------------------------------------------------------------------
// Rendering, mostly for diagnostics and the CLI table format.

std::string renderPoly(const PolyElement& f) {
  if (f.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [mu, c] : f) {
    if (!first) os << " + ";
    first = false;
    os << "(" << ring::render(c) << ")*Y[" << rootdata::renderCoweight(mu)
       << "]";
  }
  return os.str();
}

std::string renderSpherical(const SphericalElement& x) {
  if (x.terms.empty()) return "0";
  const char* sym = x.coords == Coords::Y ? "Y" : "v";
  std::ostringstream os;
  bool first = true;
  for (const auto& [mu, c] : x.terms) {
    if (!first) os << " + ";
    first = false;
    os << "(" << ring::render(c) << ")*[" << sym << "_"
       << rootdata::renderCoweight(mu) << "]";
  }
  return os.str();
}

}  // namespace metaplectic
