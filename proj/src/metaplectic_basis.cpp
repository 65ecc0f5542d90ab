#include <algorithm>
#include <numeric>
#include <set>

#include "metaplectic.hpp"

namespace metaplectic {

namespace {

Coefficient cInt(int n, long long v) { return Coefficient::integer(n, v); }
Coefficient cTau(int n, int e, long long c = 1) {
  return Coefficient::tauPower(n, e, c);
}

long long coordSum(const Coweight& v) {
  return std::accumulate(v.begin(), v.end(), 0LL);
}

bool sumLexLess(const Coweight& a, const Coweight& b) {
  long long sa = coordSum(a), sb = coordSum(b);
  if (sa != sb) return sa < sb;
  return a < b;
}

// A coefficient that is an honest Laurent polynomial in tau alone; the bar
// machinery of one block never leaves that subring, so a g-symbol here
// means a convention error upstream.
TauLaurent tauOnly(const Coefficient& c, const char* who) {
  for (const auto& [mono, coeff] : c.terms())
    if (!mono.isTauPure())
      throw NormalizationFailure(std::string(who) +
                                 ": coefficient carries g-symbols");
  return c.quantumSpecialize();
}

std::map<Coweight, Coefficient> scaled(const Coefficient& c,
                                       const std::map<Coweight, Coefficient>& x,
                                       std::map<Coweight, Coefficient> acc) {
  for (const auto& [mu, v] : x) {
    auto it = acc.find(mu);
    if (it == acc.end()) {
      Coefficient t = c * v;
      if (!t.isZero()) acc.emplace(mu, std::move(t));
      continue;
    }
    it->second += c * v;
    if (it->second.isZero()) acc.erase(it);
  }
  return acc;
}

}  // namespace

// ---------------------------------------------------------------------------
// The normalized block involution.

Involution::Involution(const System& sys, const Coweight& eta)
    : sys_(sys), constant_(sys.ctx().n) {
  const RootContext& ctx = sys.ctx();
  weyl::AlcovePoint ap = sys.alcoveRep(eta);
  eta_ = ap.eta;
  stabilizer_ = ap.stabilizer;
  lw0J_ = sys.parabolicData(stabilizer_).longestLength;

  // The anchor is the (coordinate sum, lex) least dominant block element.
  // Elements outside a ceiling of s have a coordinate above s and hence a
  // larger sum, so once the listed front has sum at most s it is global.
  Coweight anchor;
  bool haveAnchor = false;
  for (long long s = 1; s <= 2048 && !haveAnchor; s *= 2) {
    std::vector<Coweight> els =
        sys.dominantBlockElements(eta_, Coweight(ctx.rank(), s));
    if (!els.empty() && coordSum(els.front()) <= s) {
      anchor = els.front();
      haveAnchor = true;
    }
  }
  if (!haveAnchor)
    throw NormalizationFailure(
        "involution: block has no small dominant element");

  SphericalElement raw = rawImage(anchor);
  if (raw.terms.size() != 1 || raw.terms.begin()->first != anchor)
    throw NormalizationFailure(
        "involution: anchor image is not a multiple of the anchor");
  const Coefficient& diag = raw.terms.begin()->second;
  TauLaurent t = tauOnly(diag, "involution");
  if (t.terms().size() != 1 || t.terms().begin()->first % 2 != 0 ||
      (t.terms().begin()->second != 1 && t.terms().begin()->second != -1))
    throw NormalizationFailure(
        "involution: anchor constant is not a signed even tau power");
  constant_ = diag.invertUnit();
}

SphericalElement Involution::rawImage(const Coweight& la) const {
  const RootContext& ctx = sys_.ctx();
  Coweight low = sys_.dotApply(la, sys_.longestElement());
  SphericalElement img =
      straighten(sys_, peMonomial(low, cInt(ctx.n, 1)), Coords::V);
  long long lw0 = static_cast<long long>(sys_.longestWord().size());
  Coefficient scalar =
      cTau(ctx.n, static_cast<int>(-lw0 - lw0J_), lw0J_ % 2 == 0 ? 1 : -1);
  SphericalElement out;
  out.coords = Coords::V;
  out.terms = scaled(scalar, img.terms, {});
  return out;
}

SphericalElement Involution::apply(const SphericalElement& x) const {
  if (x.coords != Coords::V)
    throw std::invalid_argument("involution: v-coordinates required");
  SphericalElement out;
  out.coords = Coords::V;
  for (const auto& [la, c] : x.terms) {
    auto it = imageMemo_.find(la);
    if (it == imageMemo_.end()) {
      SphericalElement raw = rawImage(la);
      SphericalElement norm;
      norm.coords = Coords::V;
      norm.terms = scaled(constant_, raw.terms, {});
      auto diag = norm.terms.find(la);
      if (diag == norm.terms.end() || !diag->second.isOne())
        throw NormalizationFailure(
            "involution: normalized image is not unitriangular at " +
            rootdata::renderCoweight(la));
      for (const auto& [nu, d] : norm.terms)
        if (!rootdata::dominanceLeq(nu, la))
          throw NormalizationFailure(
              "involution: image escapes the dominance cone below " +
              rootdata::renderCoweight(la));
      it = imageMemo_.emplace(la, std::move(norm)).first;
    }
    out.terms = scaled(c.bar(), it->second.terms, std::move(out.terms));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical bases by defect correction.

std::vector<CanonicalBasisRecord> canonicalBasisBelow(const System& sys,
                                                      const Coweight& la,
                                                      bool plus) {
  const RootContext& ctx = sys.ctx();
  int n = ctx.n;
  BlockDescriptor block = blockOf(sys, la);
  Involution D(sys, block.eta);

  std::map<Coweight, std::map<Coweight, Coefficient>> basis;
  std::vector<CanonicalBasisRecord> records;
  records.reserve(block.elements.size());

  for (const Coweight& mu : block.elements) {
    std::map<Coweight, Coefficient> expansion{{mu, cInt(n, 1)}};
    for (int round = 0;; ++round) {
      if (round > 4096)
        throw weyl::NonTermination("canonical basis correction did not close");
      SphericalElement cur{expansion, Coords::V};
      std::map<Coweight, Coefficient> defect =
          scaled(cInt(n, -1), expansion, D.apply(cur).terms);
      if (defect.empty()) break;
      auto topIt = defect.begin();
      for (auto it = std::next(defect.begin()); it != defect.end(); ++it)
        if (sumLexLess(topIt->first, it->first)) topIt = it;
      const Coweight& nu = topIt->first;
      if (!sumLexLess(nu, mu) || !basis.count(nu))
        throw NormalizationFailure(
            "canonical basis: defect at an unexpected weight " +
            rootdata::renderCoweight(nu));
      TauLaurent d = tauOnly(topIt->second, "canonical basis");
      if (d.bar() != -d)
        throw NormalizationFailure(
            "canonical basis: defect is not bar-antisymmetric");
      TauLaurent correction = plus ? d.positivePart() : d.negativePart();
      expansion = scaled(ring::fromTauLaurent(n, correction), basis.at(nu),
                         std::move(expansion));
    }

    for (const auto& [nu, c] : expansion) {
      if (nu == mu) continue;
      if (!(plus ? c.inPlusClass() : c.inMinusClass()))
        throw NormalizationFailure(
            "canonical basis: lower coefficient escapes its sign class at " +
            rootdata::renderCoweight(nu));
    }

    CanonicalBasisRecord rec;
    rec.weight = mu;
    rec.plusFamily = plus;
    rec.expansion = SphericalElement{expansion, Coords::V};
    Coefficient kInvTop = kappaInverse(sys, mu);
    for (const auto& [nu, c] : expansion)
      rec.gTwistedKL.emplace(nu, c * kappa(sys, nu) * kInvTop);
    if (!rec.gTwistedKL.at(mu).isOne())
      throw NormalizationFailure(
          "canonical basis: leading Y-coefficient is not 1");
    basis.emplace(mu, std::move(expansion));
    records.push_back(std::move(rec));
  }
  return records;
}

CanonicalBasisRecord canonicalBasis(const System& sys, const Coweight& la,
                                    bool plus) {
  std::vector<CanonicalBasisRecord> all = canonicalBasisBelow(sys, la, plus);
  if (all.empty() || all.back().weight != la)
    throw NormalizationFailure("canonical basis: block does not end at " +
                               rootdata::renderCoweight(la));
  return std::move(all.back());
}

// ---------------------------------------------------------------------------
// Twisted Littlewood-Richardson polynomials.

namespace {

void requireTildeDominant(const RootContext& ctx, const Coweight& la,
                          const char* who) {
  if (!rootdata::isDominant(ctx, la))
    throw rootdata::NotDominant(std::string(who) +
                                ": dominant coweight required");
  if (!rootdata::inTildeLattice(ctx, la))
    throw NotInTildeLattice(std::string(who) +
                            ": coweight outside the twisted lattice");
}

}  // namespace

SphericalElement gLR(const System& sys, const Coweight& mu,
                     const Coweight& la) {
  const RootContext& ctx = sys.ctx();
  if (!rootdata::isDominant(ctx, mu))
    throw rootdata::NotDominant("gLR: dominant coweight required");
  requireTildeDominant(ctx, la, "gLR");
  PolyElement prod = peMul(peMonomial(mu, cInt(ctx.n, 1)),
                           fromGroupAlgebra(ctx.n, hecke::weylCharacter(sys, la)));
  return straighten(sys, prod, Coords::Y);
}

SphericalElement hAction(const System& sys, const Coweight& mu,
                         const Coweight& la) {
  const RootContext& ctx = sys.ctx();
  if (!rootdata::isDominant(ctx, mu))
    throw rootdata::NotDominant("hAction: dominant coweight required");
  requireTildeDominant(ctx, la, "hAction");
  PolyElement prod = peMul(peMonomial(mu, cInt(ctx.n, 1)),
                           fromGroupAlgebra(ctx.n, hecke::hallLittlewood(sys, la)));
  return straighten(sys, prod, Coords::Y);
}

// ---------------------------------------------------------------------------
// Tensor product identities.

TensorCheck tensorProductCheck(const System& sys, const Coweight& la0,
                               const Coweight& zeta, TensorVariant variant) {
  const RootContext& ctx = sys.ctx();
  if (!ctx.simplyConnected)
    throw rootdata::TwistNotSimplyConnected(
        "tensor identities need the box decomposition");
  if (std::find(ctx.box.begin(), ctx.box.end(), la0) == ctx.box.end())
    throw NotInBox("tensor check: base weight outside the box");
  requireTildeDominant(ctx, zeta, "tensor check");

  Coweight base = la0;
  if (variant == TensorVariant::PlusDagger) {
    base = rootdata::vecMat(la0, sys.longestElement().m);
    for (int i = 0; i < ctx.rank(); ++i)
      base[i] += ctx.twoRhoTilde[i] - ctx.twoRho[i];
  }
  bool plus = variant == TensorVariant::PlusDagger;

  CanonicalBasisRecord bottom = canonicalBasis(sys, base, plus);
  TensorCheck out;
  out.top = base;
  for (int i = 0; i < ctx.rank(); ++i) out.top[i] += zeta[i];

  std::map<Coweight, Coefficient> lhs;
  for (const auto& [nu, c] : bottom.gTwistedKL)
    lhs = scaled(c, gLR(sys, nu, zeta).terms, std::move(lhs));
  out.lhs = SphericalElement{std::move(lhs), Coords::Y};

  CanonicalBasisRecord top = canonicalBasis(sys, out.top, plus);
  out.rhs = SphericalElement{top.gTwistedKL, Coords::Y};
  out.holds = out.lhs == out.rhs;
  return out;
}

// ---------------------------------------------------------------------------
// Strong linkage.

bool stronglyLinked(const System& sys, const Coweight& mu, const Coweight& la) {
  const RootContext& ctx = sys.ctx();
  if (!rootdata::isDominant(ctx, mu) || !rootdata::isDominant(ctx, la))
    throw rootdata::NotDominant("stronglyLinked: dominant coweights required");
  if (!rootdata::dominanceLeq(mu, la)) return false;
  if (mu == la) return true;

  // Chains step weakly down in dominance, so every intermediate sits in the
  // finite window mu <= nu <= la. Intermediates need not be dominant: on A2
  // with n = 2 the only chains from (1,2) down to (0,0) pass through (1,0)
  // or similar non-dominant coweights, and the basis coefficient there is
  // genuinely non-zero.
  std::set<Coweight> seen{la};
  std::vector<Coweight> frontier{la};
  while (!frontier.empty()) {
    Coweight nu = frontier.back();
    frontier.pop_back();
    for (int r = 0; r < sys.rootCount(); ++r) {
      const rootdata::Root& root = ctx.positiveRoots[r];
      long long p = rootdata::rootPairing(ctx, nu, r) + root.height;
      long long nr = root.nCoroot;
      for (long long m = p >= 0 ? p / nr : -((-p + nr - 1) / nr);; --m) {
        long long coeff = m * nr - p;
        if (coeff == 0) continue;  // the trivial reflection image
        Coweight next = nu;
        bool belowWindow = false;
        for (int i = 0; i < ctx.rank(); ++i) {
          next[i] += coeff * root.corootCoords[i];
          if (next[i] < mu[i]) belowWindow = true;
        }
        if (belowWindow) break;  // coordinates only fall from here on
        if (seen.insert(next).second) {
          if (next == mu) return true;
          frontier.push_back(next);
        }
      }
    }
  }
  return false;
}

}  // namespace metaplectic
