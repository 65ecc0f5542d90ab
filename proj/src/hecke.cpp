#include "hecke.hpp"

#include <algorithm>
#include <cassert>

namespace hecke {

namespace {

TauLaurent tauPow(int k, long long c = 1) { return TauLaurent::monomial(k, c); }

// tau - tau^-1, the defect in the quadratic relation.
TauLaurent quadDefect() {
  return TauLaurent::monomial(1) - TauLaurent::monomial(-1);
}

}  // namespace

HeckeElement heckeBasis(const AffineElement& x) {
  HeckeElement e;
  e.emplace(x, tauPow(0));
  return e;
}

void heckeAddTerm(HeckeElement* a, const AffineElement& x, const TauLaurent& c) {
  if (c.isZero()) return;
  auto it = a->find(x);
  if (it == a->end()) {
    a->emplace(x, c);
    return;
  }
  it->second += c;
  if (it->second.isZero()) a->erase(it);
}

HeckeElement heckeAdd(const HeckeElement& a, const HeckeElement& b) {
  HeckeElement out = a;
  for (const auto& [x, c] : b) heckeAddTerm(&out, x, c);
  return out;
}

HeckeElement heckeScale(const TauLaurent& c, const HeckeElement& a) {
  HeckeElement out;
  if (c.isZero()) return out;
  for (const auto& [x, cx] : a) out.emplace(x, c * cx);
  return out;
}

HeckeElement heckeMulGenRight(const System& sys, const HeckeElement& a, int k) {
  HeckeElement out;
  const AffineElement s = sys.generator(k);
  for (const auto& [x, c] : a) {
    AffineElement xs = sys.mul(x, s);
    heckeAddTerm(&out, xs, c);
    if (sys.isRightDescent(x, k)) heckeAddTerm(&out, x, quadDefect() * c);
  }
  return out;
}

HeckeElement heckeMulGenLeft(const System& sys, int k, const HeckeElement& a) {
  HeckeElement out;
  for (const auto& [x, c] : a) {
    AffineElement sx = sys.mulGen(k, x);
    heckeAddTerm(&out, sx, c);
    if (sys.isLeftDescent(k, x)) heckeAddTerm(&out, x, quadDefect() * c);
  }
  return out;
}

HeckeElement heckeMul(const System& sys, const HeckeElement& a,
                      const HeckeElement& b) {
  HeckeElement out;
  for (const auto& [x, cx] : a) {
    HeckeElement cur = heckeScale(cx, b);
    std::vector<int> word = sys.canonicalWord(x);
    for (auto it = word.rbegin(); it != word.rend(); ++it)
      cur = heckeMulGenLeft(sys, *it, cur);
    for (const auto& [y, cy] : cur) heckeAddTerm(&out, y, cy);
  }
  return out;
}

HeckeElement heckeBasisInverse(const System& sys, const AffineElement& x) {
  // H_x^-1 = H_{s_k}^-1 ... H_{s_1}^-1 for x = s_1 ... s_k.
  HeckeElement el = heckeBasis(sys.identity());
  std::vector<int> word = sys.canonicalWord(x);
  const TauLaurent low = tauPow(-1) - tauPow(1);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    HeckeElement next = heckeMulGenRight(sys, el, *it);
    next = heckeAdd(next, heckeScale(low, el));
    el = std::move(next);
  }
  return el;
}

HeckeElement heckeBar(const System& sys, const HeckeElement& a) {
  HeckeElement out;
  const TauLaurent low = tauPow(-1) - tauPow(1);
  for (const auto& [x, c] : a) {
    // bar(H_x) = (H_{x^-1})^-1 = prod over the word of x of (H_s + tau^-1 - tau).
    HeckeElement cur = heckeBasis(sys.identity());
    for (int s : sys.canonicalWord(x)) {
      HeckeElement next = heckeMulGenRight(sys, cur, s);
      next = heckeAdd(next, heckeScale(low, cur));
      cur = std::move(next);
    }
    for (const auto& [y, cy] : cur) heckeAddTerm(&out, y, c.bar() * cy);
  }
  return out;
}

HeckeElement translationElement(const System& sys, const Coweight& beta) {
  const RootContext& ctx = sys.ctx();
  Coweight pos = beta;
  Coweight neg(beta.size(), 0);
  while (!rootdata::isDominant(ctx, pos)) {
    for (size_t i = 0; i < pos.size(); ++i) {
      pos[i] += ctx.twoRhoTilde[i];
      neg[i] += ctx.twoRhoTilde[i];
    }
  }
  HeckeElement out = heckeBasis(sys.translation(pos));
  bool negZero = true;
  for (long long v : neg) negZero = negZero && v == 0;
  if (!negZero)
    out = heckeMul(sys, out, heckeBasisInverse(sys, sys.translation(neg)));
  return out;
}

HeckeElement symmetrizer(const System& sys, const std::vector<int>& J,
                         bool plus) {
  weyl::ParabolicData pd = sys.parabolicData(J);
  const int L = static_cast<int>(pd.longestLength);
  HeckeElement out;
  for (const AffineElement& w : pd.elements) {
    const int l = static_cast<int>(sys.length(w));
    if (plus) {
      heckeAddTerm(&out, w, tauPow(l - L));
    } else {
      heckeAddTerm(&out, w, tauPow(L - l, (L + l) % 2 == 0 ? 1 : -1));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Kazhdan-Lusztig bases.

const HeckeElement& KLTable::basis(const AffineElement& w, bool plus) {
  auto key = std::make_pair(plus, w);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;

  HeckeElement out;
  if (w.isIdentity()) {
    out = heckeBasis(w);
  } else {
    std::vector<int> word = sys_.canonicalWord(w);
    const int s = word.back();
    AffineElement ws = sys_.mul(w, sys_.generator(s));
    HeckeElement base = basis(ws, plus);
    HeckeElement prod = heckeMulGenRight(sys_, base, s);
    // (H_s + tau^-1) keeps us in the minus class, (H_s - tau) in the plus
    // class; both factors are bar-fixed so the product is too.
    prod = heckeAdd(prod, heckeScale(plus ? tauPow(1, -1) : tauPow(-1), base));

    std::vector<std::pair<long long, AffineElement>> lower;
    for (const auto& [y, cy] : prod)
      if (!(y == w)) lower.emplace_back(sys_.length(y), y);
    std::sort(lower.begin(), lower.end(),
              [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second < b.second;
              });
    for (const auto& [len, y] : lower) {
      auto ty = prod.find(y);
      if (ty == prod.end()) continue;
      const long long c0 = ty->second.coeff(0);
      if (c0 == 0) continue;
      prod = heckeAdd(prod, heckeScale(tauPow(0, -c0), basis(y, plus)));
    }
    out = std::move(prod);
  }
  auto [pos, inserted] = memo_.emplace(std::move(key), std::move(out));
  assert(inserted);
  return pos->second;
}

TauLaurent KLTable::coeff(const AffineElement& y, const AffineElement& w,
                          bool plus) {
  const HeckeElement& b = basis(w, plus);
  auto it = b.find(y);
  return it == b.end() ? TauLaurent() : it->second;
}

// ---------------------------------------------------------------------------
// Parabolic modules.

ParabolicModule::ParabolicModule(const System& sys, std::vector<int> J,
                                 Kind kind)
    : sys_(sys), J_(std::move(J)), kind_(kind) {
  std::sort(J_.begin(), J_.end());
}

bool ParabolicModule::legal(const AffineElement& x) const {
  for (int j : J_) {
    if (kind_ == Kind::Right ? sys_.isLeftDescent(j, x)
                             : sys_.isRightDescent(x, j))
      return false;
  }
  return true;
}

HeckeElement ParabolicModule::basisElement(const AffineElement& x) const {
  if (!legal(x))
    throw IllegalRepresentative(
        "coset representative has a descent inside the parabolic");
  return heckeBasis(x);
}

HeckeElement ParabolicModule::actGen(const HeckeElement& el, int k) const {
  HeckeElement out;
  const AffineElement s = sys_.generator(k);
  for (const auto& [x, c] : el) {
    AffineElement xs =
        kind_ == Kind::Right ? sys_.mul(x, s) : sys_.mulGen(k, x);
    if (legal(xs)) {
      heckeAddTerm(&out, xs, c);
      const bool shorter = kind_ == Kind::Right ? sys_.isRightDescent(x, k)
                                                : sys_.isLeftDescent(k, x);
      if (shorter) heckeAddTerm(&out, x, quadDefect() * c);
    } else {
      // Crossing into the parabolic: the symmetrizer absorbs the letter.
      heckeAddTerm(&out, x,
                   (kind_ == Kind::Right ? tauPow(-1, -1) : tauPow(1)) * c);
    }
  }
  return out;
}

HeckeElement ParabolicModule::act(const HeckeElement& el,
                                  const AffineElement& w) const {
  HeckeElement cur = el;
  std::vector<int> word = sys_.canonicalWord(w);
  if (kind_ == Kind::Right) {
    for (int s : word) cur = actGen(cur, s);
  } else {
    for (auto it = word.rbegin(); it != word.rend(); ++it)
      cur = actGen(cur, *it);
  }
  return cur;
}

HeckeElement ParabolicModule::bar(const HeckeElement& el) const {
  HeckeElement out;
  const TauLaurent low = tauPow(-1) - tauPow(1);
  for (const auto& [x, c] : el) {
    // bar(N_x) = N_e bar(H_x), and the mirrored statement on the left.
    HeckeElement cur = heckeBasis(sys_.identity());
    std::vector<int> word = sys_.canonicalWord(x);
    if (kind_ == Kind::Left) std::reverse(word.begin(), word.end());
    for (int s : word) {
      HeckeElement next = actGen(cur, s);
      next = heckeAdd(next, heckeScale(low, cur));
      cur = std::move(next);
    }
    for (const auto& [y, cy] : cur) heckeAddTerm(&out, y, c.bar() * cy);
  }
  return out;
}

const HeckeElement& ParabolicModule::kl(const AffineElement& rep, bool plus) {
  auto key = std::make_pair(plus, rep);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;

  if (!legal(rep))
    throw IllegalRepresentative(
        "coset representative has a descent inside the parabolic");

  HeckeElement out;
  if (rep.isIdentity()) {
    out = heckeBasis(rep);
  } else {
    std::vector<int> word = sys_.canonicalWord(rep);
    const int s = kind_ == Kind::Right ? word.back() : word.front();
    AffineElement sub = kind_ == Kind::Right
                            ? sys_.mul(rep, sys_.generator(s))
                            : sys_.mulGen(s, rep);
    HeckeElement base = kl(sub, plus);
    HeckeElement prod = actGen(base, s);
    prod = heckeAdd(prod, heckeScale(plus ? tauPow(1, -1) : tauPow(-1), base));

    std::vector<std::pair<long long, AffineElement>> lower;
    for (const auto& [y, cy] : prod)
      if (!(y == rep)) lower.emplace_back(sys_.length(y), y);
    std::sort(lower.begin(), lower.end(),
              [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second < b.second;
              });
    for (const auto& [len, y] : lower) {
      auto ty = prod.find(y);
      if (ty == prod.end()) continue;
      const long long c0 = ty->second.coeff(0);
      if (c0 == 0) continue;
      prod = heckeAdd(prod, heckeScale(tauPow(0, -c0), kl(y, plus)));
    }
    out = std::move(prod);
  }
  auto [pos, inserted] = memo_.emplace(std::move(key), std::move(out));
  assert(inserted);
  return pos->second;
}

TauLaurent ParabolicModule::klCoeff(const AffineElement& y,
                                    const AffineElement& rep, bool plus) {
  const HeckeElement& b = kl(rep, plus);
  auto it = b.find(y);
  return it == b.end() ? TauLaurent() : it->second;
}

// ---------------------------------------------------------------------------
// Double cosets.

AffineElement minimalDoubleCosetRep(const System& sys, const AffineElement& x,
                                    const std::vector<int>& J,
                                    const std::vector<int>& K) {
  AffineElement cur = x;
  bool moved = true;
  while (moved) {
    moved = false;
    for (int j : J) {
      if (sys.isLeftDescent(j, cur)) {
        cur = sys.mulGen(j, cur);
        moved = true;
      }
    }
    for (int k : K) {
      if (sys.isRightDescent(cur, k)) {
        cur = sys.mul(cur, sys.generator(k));
        moved = true;
      }
    }
  }
  return cur;
}

DoubleCosetTable::DoubleCosetTable(const System& sys, std::vector<int> J,
                                   std::vector<int> K)
    : sys_(sys),
      J_(std::move(J)),
      K_(std::move(K)),
      right_(sys, J_, ParabolicModule::Kind::Right),
      left_(sys, K_, ParabolicModule::Kind::Left),
      full_(sys) {
  weyl::ParabolicData pdJ = sys_.parabolicData(J_);
  weyl::ParabolicData pdK = sys_.parabolicData(K_);
  w0J_ = pdJ.longest;
  w0K_ = pdK.longest;
  wJElements_ = pdJ.elements;
  wKElements_ = pdK.elements;
}

void DoubleCosetTable::requireRegular(const AffineElement& x) const {
  if (!(minimalDoubleCosetRep(sys_, x, J_, K_) == x))
    throw IllegalRepresentative(
        "double coset representative is not of minimal length");
  if (!sys_.regularDoubleCoset(x, J_, K_))
    throw IllegalRepresentative("double coset is not regular");
}

TauLaurent DoubleCosetTable::coeff(const AffineElement& t,
                                   const AffineElement& u, bool plus) {
  requireRegular(t);
  requireRegular(u);

  TauLaurent out;
  TauLaurent check;
  if (!plus) {
    AffineElement st = sys_.mul(t, w0K_);
    AffineElement su = sys_.mul(u, w0K_);
    out = right_.klCoeff(st, su, false);
    for (const AffineElement& z : wJElements_) {
      const int l = static_cast<int>(sys_.length(z));
      check += tauPow(-l, l % 2 == 0 ? 1 : -1) *
               full_.coeff(sys_.mul(z, st), su, false);
    }
  } else {
    AffineElement st = sys_.mul(w0J_, t);
    AffineElement su = sys_.mul(w0J_, u);
    out = left_.klCoeff(st, su, true);
    for (const AffineElement& z : wKElements_) {
      check += tauPow(static_cast<int>(sys_.length(z))) *
               full_.coeff(sys_.mul(st, z), su, true);
    }
  }
  if (!(out == check))
    throw std::logic_error(
        "double coset coefficient disagrees with its full-basis cross-check");
  return out;
}

}  // namespace hecke
