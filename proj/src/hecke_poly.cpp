#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <map>
#include <vector>

#include "hecke.hpp"

namespace hecke {

namespace {

TauLaurent tauPow(int k, long long c = 1) { return TauLaurent::monomial(k, c); }

long long coordSum(const Coweight& v) {
  long long s = 0;
  for (long long x : v) s += x;
  return s;
}

Coweight addVec(const Coweight& a, const Coweight& b) {
  Coweight out = a;
  for (size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

Coweight subVec(const Coweight& a, const Coweight& b) {
  Coweight out = a;
  for (size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

Coweight negVec(const Coweight& a) {
  Coweight out = a;
  for (auto& x : out) x = -x;
  return out;
}

Coweight scaleVec(long long c, const Coweight& a) {
  Coweight out = a;
  for (auto& x : out) x *= c;
  return out;
}

// (mu) s_i on coweight rows.
Coweight reflectSimple(const RootContext& ctx, const Coweight& mu, int i) {
  std::vector<long long> p = rootdata::pairings(ctx, mu);
  Coweight out = mu;
  out[i] -= p[i];
  return out;
}

// n_a acheck_a for the positive root with the given index.
Coweight rescaledCoroot(const RootContext& ctx, int rootIdx) {
  return scaleVec(ctx.positiveRoots[rootIdx].nCoroot,
                  ctx.positiveRoots[rootIdx].corootCoords);
}

// Leading term under (coordinate sum, lex), the order used for division.
GroupAlgebra::const_iterator leadingTerm(const GroupAlgebra& a) {
  auto best = a.begin();
  long long bestCs = coordSum(best->first);
  for (auto it = std::next(a.begin()); it != a.end(); ++it) {
    const long long cs = coordSum(it->first);
    if (cs > bestCs || (cs == bestCs && best->first < it->first)) {
      best = it;
      bestCs = cs;
    }
  }
  return best;
}

}  // namespace

GroupAlgebra gaOne(int rank) {
  GroupAlgebra out;
  out.emplace(Coweight(rank, 0), tauPow(0));
  return out;
}

GroupAlgebra gaMonomial(const Coweight& mu, const TauLaurent& c) {
  GroupAlgebra out;
  if (!c.isZero()) out.emplace(mu, c);
  return out;
}

void gaAddTerm(GroupAlgebra* a, const Coweight& mu, const TauLaurent& c) {
  if (c.isZero()) return;
  auto it = a->find(mu);
  if (it == a->end()) {
    a->emplace(mu, c);
    return;
  }
  it->second += c;
  if (it->second.isZero()) a->erase(it);
}

GroupAlgebra gaAdd(const GroupAlgebra& a, const GroupAlgebra& b) {
  GroupAlgebra out = a;
  for (const auto& [mu, c] : b) gaAddTerm(&out, mu, c);
  return out;
}

GroupAlgebra gaSub(const GroupAlgebra& a, const GroupAlgebra& b) {
  GroupAlgebra out = a;
  for (const auto& [mu, c] : b) gaAddTerm(&out, mu, -c);
  return out;
}

GroupAlgebra gaMul(const GroupAlgebra& a, const GroupAlgebra& b) {
  GroupAlgebra out;
  for (const auto& [mu, c] : a)
    for (const auto& [nu, d] : b) gaAddTerm(&out, addVec(mu, nu), c * d);
  return out;
}

GroupAlgebra gaScale(const TauLaurent& c, const GroupAlgebra& a) {
  GroupAlgebra out;
  if (c.isZero()) return out;
  for (const auto& [mu, d] : a) out.emplace(mu, c * d);
  return out;
}

GroupAlgebra gaApply(const GroupAlgebra& a, const Mat& m) {
  GroupAlgebra out;
  for (const auto& [mu, c] : a) gaAddTerm(&out, rootdata::vecMat(mu, m), c);
  return out;
}

long long gaEvalAtOne(const GroupAlgebra& a) {
  long long s = 0;
  for (const auto& [mu, c] : a) s += c.evalAtOne();
  return s;
}

GroupAlgebra gaDivideFactor(const GroupAlgebra& a, const Coweight& gamma) {
  if (a.empty()) return a;
  assert(coordSum(gamma) < 0);

  long long minCs = coordSum(a.begin()->first);
  for (const auto& [mu, c] : a) minCs = std::min(minCs, coordSum(mu));

  GroupAlgebra rem = a;
  GroupAlgebra quot;
  while (!rem.empty()) {
    auto lead = leadingTerm(rem);
    // An exact quotient never generates terms below the numerator's span.
    if (coordSum(lead->first) < minCs)
      throw DivisionNotExact("remainder escaped below the numerator support");
    const Coweight mu = lead->first;
    const TauLaurent c = lead->second;
    gaAddTerm(&quot, mu, c);
    rem.erase(mu);
    gaAddTerm(&rem, addVec(mu, gamma), c);
  }
  return quot;
}

GroupAlgebra polyRepGen(const RootContext& ctx, const GroupAlgebra& p, int i) {
  const Coweight gamma = scaleVec(ctx.nSimple[i], [&] {
    Coweight e(ctx.rank(), 0);
    e[i] = 1;
    return e;
  }());
  GroupAlgebra sp;
  for (const auto& [mu, c] : p)
    gaAddTerm(&sp, reflectSimple(ctx, mu, i), c);

  // (tau^-1 - tau Y_{-gamma}) p^s + (tau - tau^-1) p, then the exact quotient
  // by (1 - Y_{-gamma}).
  GroupAlgebra front = gaMonomial(Coweight(ctx.rank(), 0), tauPow(-1));
  gaAddTerm(&front, negVec(gamma), tauPow(1, -1));
  GroupAlgebra num = gaMul(front, sp);
  num = gaAdd(num, gaScale(tauPow(1) - tauPow(-1), p));
  return gaDivideFactor(num, negVec(gamma));
}

GroupAlgebra polyRepWord(const RootContext& ctx, const GroupAlgebra& p,
                         const std::vector<int>& word) {
  GroupAlgebra cur = p;
  for (int s : word) cur = polyRepGen(ctx, cur, s);
  return cur;
}

GroupAlgebra weylCharacter(const System& sys, const Coweight& la) {
  const RootContext& ctx = sys.ctx();
  if (!rootdata::isDominant(ctx, la))
    throw rootdata::NotDominant("character weight is not dominant");
  if (!rootdata::inTildeLattice(ctx, la))
    throw std::invalid_argument("character weight is not in the rescaled lattice");

  std::vector<int> finite(ctx.rank());
  for (int i = 0; i < ctx.rank(); ++i) finite[i] = i;
  weyl::ParabolicData pd = sys.parabolicData(finite);

  const Coweight r2 = ctx.twoRhoTilde;
  GroupAlgebra num;
  for (const AffineElement& w : pd.elements) {
    Coweight key2 = subVec(rootdata::vecMat(addVec(scaleVec(2, la), r2), w.m), r2);
    Coweight key(key2.size());
    for (size_t j = 0; j < key2.size(); ++j) {
      assert(key2[j] % 2 == 0);
      key[j] = key2[j] / 2;
    }
    gaAddTerm(&num, key, tauPow(0, sys.length(w) % 2 == 0 ? 1 : -1));
  }

  GroupAlgebra out = num;
  for (int r = 0; r < sys.rootCount(); ++r)
    out = gaDivideFactor(out, negVec(rescaledCoroot(ctx, r)));
  return out;
}

std::map<Coweight, long long> lrCoeffs(const System& sys, const Coweight& mu,
                                       const Coweight& la) {
  const RootContext& ctx = sys.ctx();
  GroupAlgebra chiMu = weylCharacter(sys, mu);
  GroupAlgebra chiLa = weylCharacter(sys, la);
  const long long dimProduct = gaEvalAtOne(chiMu) * gaEvalAtOne(chiLa);

  GroupAlgebra rem = gaMul(chiMu, chiLa);
  std::map<Coweight, long long> out;
  long long dimSum = 0;
  int guard = 0;
  while (!rem.empty()) {
    if (++guard > 20000)
      throw PeelingFailure("decomposition did not terminate");
    // Peel the lexicographically largest dominance-maximal dominant term.
    std::vector<Coweight> dominant;
    for (const auto& [k, c] : rem)
      if (rootdata::isDominant(ctx, k)) dominant.push_back(k);
    if (dominant.empty())
      throw PeelingFailure("product has no dominant term left");
    Coweight pick = dominant.front();
    bool found = false;
    for (const Coweight& k : dominant) {
      bool below = false;
      for (const Coweight& other : dominant)
        if (!(other == k) && rootdata::dominanceLeq(k, other)) below = true;
      if (below) continue;
      if (!found || pick < k) pick = k;
      found = true;
    }
    if (!found) throw PeelingFailure("no dominance-maximal term");

    const TauLaurent c = rem.at(pick);
    const auto& ct = c.terms();
    if (ct.size() != 1 || ct.count(0) == 0 || ct.at(0) <= 0)
      throw PeelingFailure("peeled coefficient is not a positive integer");
    const long long m = ct.at(0);
    GroupAlgebra chi = weylCharacter(sys, pick);
    rem = gaSub(rem, gaScale(tauPow(0, m), chi));
    out[pick] += m;
    dimSum += m * gaEvalAtOne(chi);
  }
  if (dimSum != dimProduct)
    throw PeelingFailure("dimension count does not match the product");
  return out;
}

GroupAlgebra hallLittlewood(const System& sys, const Coweight& mu) {
  const RootContext& ctx = sys.ctx();
  if (!rootdata::isDominant(ctx, mu))
    throw rootdata::NotDominant("Hall-Littlewood weight is not dominant");
  if (!rootdata::inTildeLattice(ctx, mu))
    throw std::invalid_argument(
        "Hall-Littlewood weight is not in the rescaled lattice");

  std::vector<int> finite(ctx.rank());
  for (int i = 0; i < ctx.rank(); ++i) finite[i] = i;
  weyl::ParabolicData pd = sys.parabolicData(finite);

  const TauLaurent t = tauPow(-2);
  GroupAlgebra total;
  for (const AffineElement& w : pd.elements) {
    std::vector<int> word = sys.canonicalWord(w);
    // The w-image of the full denominator differs from the denominator by
    // the sign (-1)^{l(w)} and the monomial over the inversion coroots; that
    // turns the sum of W-translates of a fraction into a single quotient.
    Coweight shift(ctx.rank(), 0);
    GroupAlgebra numFactor = gaOne(ctx.rank());
    for (int r = 0; r < sys.rootCount(); ++r) {
      const int img = sys.rootImage(r, word);
      if (img < 0) shift = addVec(shift, rescaledCoroot(ctx, ~img));
      GroupAlgebra f = gaOne(ctx.rank());
      gaAddTerm(&f, negVec(rootdata::vecMat(rescaledCoroot(ctx, r), w.m)),
                -t);
      numFactor = gaMul(numFactor, f);
    }
    Coweight key = subVec(rootdata::vecMat(mu, w.m), shift);
    GroupAlgebra term = gaMul(numFactor, gaMonomial(key, tauPow(0)));
    if (sys.length(w) % 2 != 0) term = gaScale(tauPow(0, -1), term);
    total = gaAdd(total, term);
  }
  for (int r = 0; r < sys.rootCount(); ++r)
    total = gaDivideFactor(total, negVec(rescaledCoroot(ctx, r)));

  // Stabilizer Poincare polynomial in t = tau^-2.
  std::vector<long long> p = rootdata::pairings(ctx, mu);
  std::vector<int> stab;
  for (int i = 0; i < ctx.rank(); ++i)
    if (p[i] == 0) stab.push_back(i);
  weyl::ParabolicData stabData = sys.parabolicData(stab);
  TauLaurent poincare;
  for (size_t k = 0; k < stabData.poincare.size(); ++k)
    poincare += tauPow(-2 * static_cast<int>(k), stabData.poincare[k]);

  int shiftExp = 0;
  for (int r = 0; r < sys.rootCount(); ++r) {
    const long long pr = rootdata::rootPairing(ctx, mu, r);
    const int nr = ctx.positiveRoots[r].nCoroot;
    assert(pr % nr == 0);
    shiftExp += static_cast<int>(pr / nr);
  }

  GroupAlgebra out;
  for (const auto& [key, c] : total) {
    TauLaurent q;
    if (!ring::tryDivideExact(c, poincare, &q))
      throw DivisionNotExact(
          "stabilizer Poincare polynomial does not divide the sum");
    gaAddTerm(&out, key, q * tauPow(shiftExp));
  }
  return out;
}

std::map<Coweight, TauLaurent> satakeTransition(const System& sys,
                                                const Coweight& la) {
  const RootContext& ctx = sys.ctx();
  GroupAlgebra rem = weylCharacter(sys, la);
  std::map<Coweight, TauLaurent> out;
  int guard = 0;
  while (!rem.empty()) {
    if (++guard > 20000)
      throw PeelingFailure("transition solve did not terminate");
    std::vector<Coweight> dominant;
    for (const auto& [k, c] : rem)
      if (rootdata::isDominant(ctx, k)) dominant.push_back(k);
    if (dominant.empty())
      throw PeelingFailure("remainder has no dominant term");
    Coweight pick = dominant.front();
    bool found = false;
    for (const Coweight& k : dominant) {
      bool below = false;
      for (const Coweight& other : dominant)
        if (!(other == k) && rootdata::dominanceLeq(k, other)) below = true;
      if (below) continue;
      if (!found || pick < k) pick = k;
      found = true;
    }
    if (!found) throw PeelingFailure("no dominance-maximal term");

    GroupAlgebra sh = hallLittlewood(sys, pick);
    auto diagIt = sh.find(pick);
    if (diagIt == sh.end())
      throw PeelingFailure("spherical element is missing its own weight");
    const auto& dt = diagIt->second.terms();
    if (dt.size() != 1 || std::llabs(dt.begin()->second) != 1)
      throw PeelingFailure("diagonal entry is not a signed tau power");
    // Invert the signed tau power by hand.
    TauLaurent inv = tauPow(-dt.begin()->first, dt.begin()->second);
    TauLaurent p = rem.at(pick) * inv;
    out[pick] = p;
    rem = gaSub(rem, gaScale(p, sh));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bernstein presentation.

namespace {

// E * H_s for E in the mixed basis {H_w p(Y)}, finite s.
BernsteinElement bernsteinMulGenRight(const System& sys,
                                      const BernsteinElement& e, int s) {
  const RootContext& ctx = sys.ctx();
  const Mat sm = sys.generator(s).m;
  Coweight gamma(ctx.rank(), 0);
  gamma[s] = ctx.nSimple[s];

  BernsteinElement out;
  auto add = [&out](const Mat& w, const GroupAlgebra& p) {
    if (p.empty()) return;
    auto it = out.find(w);
    if (it == out.end())
      out.emplace(w, p);
    else {
      it->second = gaAdd(it->second, p);
      if (it->second.empty()) out.erase(it);
    }
  };

  const TauLaurent defect = tauPow(1) - tauPow(-1);
  for (const auto& [w, p] : e) {
    // p H_s = H_s p^s + (tau - tau^-1)(p - p^s)/(1 - Y_{-gamma}).
    GroupAlgebra ps = gaApply(p, sm);
    GroupAlgebra corr =
        gaScale(defect, gaDivideFactor(gaSub(p, ps), negVec(gamma)));

    const AffineElement wa{w, Coweight(ctx.rank(), 0)};
    const Mat ws = rootdata::matMul(w, sm);
    add(ws, ps);
    if (sys.isRightDescent(wa, s)) add(w, gaScale(defect, ps));
    add(w, corr);
  }
  return out;
}

}  // namespace

BernsteinElement bernsteinY(const System& sys, const Coweight& beta) {
  if (!rootdata::inTildeLattice(sys.ctx(), beta))
    throw std::invalid_argument("Y exponent is not in the rescaled lattice");
  BernsteinElement out;
  out.emplace(sys.identity().m, gaMonomial(beta, tauPow(0)));
  return out;
}

BernsteinElement bernsteinH(const System& sys, const Mat& w) {
  BernsteinElement out;
  out.emplace(w, gaOne(sys.rank()));
  return out;
}

BernsteinElement bernsteinAdd(const BernsteinElement& a,
                              const BernsteinElement& b) {
  BernsteinElement out = a;
  for (const auto& [w, p] : b) {
    auto it = out.find(w);
    if (it == out.end())
      out.emplace(w, p);
    else {
      it->second = gaAdd(it->second, p);
      if (it->second.empty()) out.erase(it);
    }
  }
  return out;
}

BernsteinElement bernsteinSub(const BernsteinElement& a,
                              const BernsteinElement& b) {
  BernsteinElement flipped;
  for (const auto& [w, p] : b)
    flipped.emplace(w, gaScale(TauLaurent::monomial(0, -1), p));
  return bernsteinAdd(a, flipped);
}

BernsteinElement bernsteinMul(const System& sys, const BernsteinElement& a,
                              const BernsteinElement& b) {
  BernsteinElement out;
  for (const auto& [x, p] : a) {
    for (const auto& [y, q] : b) {
      BernsteinElement cur;
      cur.emplace(x, p);
      const AffineElement ya{y, Coweight(sys.rank(), 0)};
      for (int s : sys.canonicalWord(ya))
        cur = bernsteinMulGenRight(sys, cur, s);
      for (auto& [w, r] : cur) {
        GroupAlgebra scaled = gaMul(r, q);
        auto it = out.find(w);
        if (it == out.end())
          out.emplace(w, std::move(scaled));
        else {
          it->second = gaAdd(it->second, scaled);
          if (it->second.empty()) out.erase(it);
        }
      }
    }
  }
  return out;
}

}  // namespace hecke
