// Implementation of the coefficient ring.  The only subtle parts are the
// normal form for Gauss sum monomials and the numeric Gauss sums themselves;
// everything else is map bookkeeping.

#include "coeff_ring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace ring {

// ---------------------------------------------------------------------------
// TauLaurent

TauLaurent TauLaurent::monomial(int exp, long long coeff) {
  TauLaurent f;
  if (coeff != 0) f.terms_[exp] = coeff;
  return f;
}

long long TauLaurent::coeff(int exp) const {
  auto it = terms_.find(exp);
  return it == terms_.end() ? 0 : it->second;
}

int TauLaurent::lowestExp() const { return terms_.begin()->first; }
int TauLaurent::highestExp() const { return terms_.rbegin()->first; }

void TauLaurent::setTerm(int exp, long long c) {
  if (c == 0)
    terms_.erase(exp);
  else
    terms_[exp] = c;
}

TauLaurent& TauLaurent::operator+=(const TauLaurent& o) {
  for (const auto& [e, c] : o.terms_) {
    long long s = coeff(e) + c;
    setTerm(e, s);
  }
  return *this;
}

TauLaurent& TauLaurent::operator-=(const TauLaurent& o) {
  for (const auto& [e, c] : o.terms_) setTerm(e, coeff(e) - c);
  return *this;
}

TauLaurent TauLaurent::operator+(const TauLaurent& o) const {
  TauLaurent r = *this;
  r += o;
  return r;
}

TauLaurent TauLaurent::operator-(const TauLaurent& o) const {
  TauLaurent r = *this;
  r -= o;
  return r;
}

TauLaurent TauLaurent::operator-() const {
  TauLaurent r;
  for (const auto& [e, c] : terms_) r.terms_[e] = -c;
  return r;
}

TauLaurent TauLaurent::operator*(const TauLaurent& o) const {
  TauLaurent r;
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) r.setTerm(e1 + e2, r.coeff(e1 + e2) + c1 * c2);
  return r;
}

TauLaurent TauLaurent::bar() const {
  TauLaurent r;
  for (const auto& [e, c] : terms_) r.terms_[-e] = c;
  return r;
}

bool TauLaurent::allExpPositive() const {
  return terms_.empty() || lowestExp() >= 1;
}

bool TauLaurent::allExpNegative() const {
  return terms_.empty() || highestExp() <= -1;
}

TauLaurent TauLaurent::positivePart() const {
  TauLaurent r;
  for (const auto& [e, c] : terms_)
    if (e > 0) r.terms_[e] = c;
  return r;
}

TauLaurent TauLaurent::negativePart() const {
  TauLaurent r;
  for (const auto& [e, c] : terms_)
    if (e < 0) r.terms_[e] = c;
  return r;
}

long long TauLaurent::evalAtOne() const {
  long long s = 0;
  for (const auto& [e, c] : terms_) s += c;
  return s;
}

std::complex<double> TauLaurent::evalTau(std::complex<double> tau) const {
  std::complex<double> s = 0.0;
  for (const auto& [e, c] : terms_) s += double(c) * std::pow(tau, e);
  return s;
}

bool tryDivideExact(const TauLaurent& num, const TauLaurent& den,
                    TauLaurent* quot) {
  if (den.isZero()) return false;
  TauLaurent rem = num, q;
  if (rem.isZero()) {
    *quot = q;
    return true;
  }
  // Eliminate from the bottom.  The quotient's exponents are confined to
  // [lo, hi]; stepping outside means the division is not exact.
  const int hi = num.highestExp() - den.highestExp();
  const long long dlow = den.terms().begin()->second;
  const int dexp = den.lowestExp();
  while (!rem.isZero()) {
    int e = rem.lowestExp() - dexp;
    if (e > hi) return false;
    long long c = rem.terms().begin()->second;
    if (c % dlow != 0) return false;
    TauLaurent t = TauLaurent::monomial(e, c / dlow);
    q += t;
    rem -= t * den;
  }
  *quot = q;
  return true;
}

// ---------------------------------------------------------------------------
// Monomial and Coefficient

bool Monomial::isTauPure() const {
  return std::all_of(g.begin(), g.end(), [](int e) { return e == 0; });
}

int Monomial::gExpSum() const {
  int s = 0;
  for (int e : g) s += e;
  return s;
}

namespace {

// Reduce raw exponent data to the canonical monomial, returning the sign
// picked up from g_0 = -1 and from nothing else.
int normalizeMonomial(int period, int tauExp,
                      const std::map<long long, long long>& raw, Monomial* out) {
  int sign = 1;
  long long tau = tauExp;
  std::vector<long long> e(period > 1 ? period - 1 : 0, 0);
  for (const auto& [k, ex] : raw) {
    long long km = ((k % period) + period) % period;
    if (km == 0) {
      if (ex % 2 != 0) sign = -sign;
      continue;
    }
    e[km - 1] += ex;
  }
  // Fold the upper half down: g_k = tau^2 g_{n-k}^{-1} for n/2 < k < n.
  for (int k = period - 1; 2 * k > period; --k) {
    long long x = e[k - 1];
    if (x == 0) continue;
    tau += 2 * x;
    e[period - k - 1] -= x;
    e[k - 1] = 0;
  }
  // For even n the middle symbol squares to tau^2.
  if (period % 2 == 0 && period > 1) {
    long long x = e[period / 2 - 1];
    long long r = ((x % 2) + 2) % 2;
    tau += x - r;  // x = 2m + r contributes tau^{2m}
    e[period / 2 - 1] = r;
  }
  out->tauExp = static_cast<int>(tau);
  out->g.assign(e.begin(), e.end());
  return sign;
}

}  // namespace

Coefficient::Coefficient(int period) : period_(period) {
  if (period < 1) throw std::invalid_argument("period must be positive");
}

Coefficient Coefficient::integer(int period, long long c) {
  Coefficient r(period);
  if (c != 0) r.terms_[Monomial{0, std::vector<int>(period - 1, 0)}] = c;
  return r;
}

Coefficient Coefficient::tauPower(int period, int exp, long long c) {
  Coefficient r(period);
  if (c != 0) r.terms_[Monomial{exp, std::vector<int>(period - 1, 0)}] = c;
  return r;
}

Coefficient Coefficient::gauss(int period, long long k) {
  return term(period, 1, 0, {{k, 1}});
}

Coefficient Coefficient::term(int period, long long c, int tauExp,
                              const std::map<long long, long long>& gExps) {
  Coefficient r(period);
  if (c == 0) return r;
  Monomial m;
  int sign = normalizeMonomial(period, tauExp, gExps, &m);
  r.terms_[m] = sign * c;
  return r;
}

bool Coefficient::isOne() const {
  return terms_.size() == 1 && terms_.begin()->second == 1 &&
         terms_.begin()->first.tauExp == 0 && terms_.begin()->first.isTauPure();
}

void Coefficient::addTerm(const Monomial& m, long long c) {
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_[m] = c;
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Coefficient& Coefficient::operator+=(const Coefficient& o) {
  if (period_ != o.period_)
    throw std::invalid_argument("mixed Gauss symbol periods");
  for (const auto& [m, c] : o.terms_) addTerm(m, c);
  return *this;
}

Coefficient& Coefficient::operator-=(const Coefficient& o) {
  if (period_ != o.period_)
    throw std::invalid_argument("mixed Gauss symbol periods");
  for (const auto& [m, c] : o.terms_) addTerm(m, -c);
  return *this;
}

Coefficient Coefficient::operator+(const Coefficient& o) const {
  Coefficient r = *this;
  r += o;
  return r;
}

Coefficient Coefficient::operator-(const Coefficient& o) const {
  Coefficient r = *this;
  r -= o;
  return r;
}

Coefficient Coefficient::operator-() const {
  Coefficient r(period_);
  for (const auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

Coefficient Coefficient::operator*(const Coefficient& o) const {
  if (period_ != o.period_)
    throw std::invalid_argument("mixed Gauss symbol periods");
  Coefficient r(period_);
  for (const auto& [m1, c1] : terms_) {
    for (const auto& [m2, c2] : o.terms_) {
      std::map<long long, long long> raw;
      for (int k = 1; k < period_; ++k) {
        long long s = m1.g[k - 1] + m2.g[k - 1];
        if (s != 0) raw[k] = s;
      }
      Monomial m;
      int sign = normalizeMonomial(period_, m1.tauExp + m2.tauExp, raw, &m);
      r.addTerm(m, sign * c1 * c2);
    }
  }
  return r;
}

bool Coefficient::operator==(const Coefficient& o) const {
  return period_ == o.period_ && terms_ == o.terms_;
}

Coefficient Coefficient::bar() const {
  Coefficient r(period_);
  for (const auto& [m, c] : terms_) {
    std::map<long long, long long> raw;
    for (int k = 1; k < period_; ++k)
      if (m.g[k - 1] != 0) raw[k] = -m.g[k - 1];
    Monomial nm;
    int sign = normalizeMonomial(period_, -m.tauExp, raw, &nm);
    r.addTerm(nm, sign * c);
  }
  return r;
}

Coefficient Coefficient::invertUnit() const {
  if (terms_.size() != 1)
    throw NotAUnit("only one-term elements are invertible, got " + render(*this));
  const auto& [m, c] = *terms_.begin();
  if (c != 1 && c != -1)
    throw NotAUnit("integer coefficient " + std::to_string(c) +
                   " is not invertible");
  std::map<long long, long long> raw;
  for (int k = 1; k < period_; ++k)
    if (m.g[k - 1] != 0) raw[k] = -m.g[k - 1];
  return term(period_, c, -m.tauExp, raw);
}

bool Coefficient::inPlusClass() const {
  for (const auto& [m, c] : terms_) {
    if (!m.isTauPure())
      throw NotTauPure("sign class undefined for " + render(*this));
    if (m.tauExp < 1) return false;
  }
  return true;
}

bool Coefficient::inMinusClass() const {
  for (const auto& [m, c] : terms_) {
    if (!m.isTauPure())
      throw NotTauPure("sign class undefined for " + render(*this));
    if (m.tauExp > -1) return false;
  }
  return true;
}

TauLaurent Coefficient::quantumSpecialize() const {
  TauLaurent f;
  for (const auto& [m, c] : terms_) {
    int e = m.tauExp + m.gExpSum();
    f.setTerm(e, f.coeff(e) + c);
  }
  return f;
}

Coefficient fromTauLaurent(int period, const TauLaurent& f) {
  Coefficient r(period);
  for (const auto& [e, c] : f.terms()) r += Coefficient::tauPower(period, e, c);
  return r;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

void appendFactor(std::string* s, const std::string& base, int exp) {
  if (exp == 0) return;
  if (!s->empty()) *s += '*';
  *s += base;
  if (exp != 1) {
    *s += '^';
    *s += std::to_string(exp);
  }
}

std::string renderTerm(long long c, const std::string& factors) {
  if (factors.empty()) return std::to_string(c);
  if (c == 1) return factors;
  if (c == -1) return "-" + factors;
  return std::to_string(c) + "*" + factors;
}

std::string joinTerms(const std::vector<std::string>& parts) {
  if (parts.empty()) return "0";
  std::string out = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) {
    if (parts[i][0] != '-') out += '+';
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string render(const TauLaurent& f) {
  std::vector<std::string> parts;
  for (const auto& [e, c] : f.terms()) {
    std::string factors;
    appendFactor(&factors, "tau", e);
    parts.push_back(renderTerm(c, factors));
  }
  return joinTerms(parts);
}

std::string render(const Coefficient& c) {
  std::vector<std::string> parts;
  for (const auto& [m, cf] : c.terms()) {
    std::string factors;
    appendFactor(&factors, "tau", m.tauExp);
    for (size_t k = 0; k < m.g.size(); ++k)
      appendFactor(&factors, "g" + std::to_string(k + 1), m.g[k]);
    parts.push_back(renderTerm(cf, factors));
  }
  return joinTerms(parts);
}

// ---------------------------------------------------------------------------
// Parsing (inverse of render)

namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("coefficient syntax error at offset " +
                                std::to_string(i) + ": " + why);
  }
  bool done() const { return i >= s.size(); }
  char peek() const { return done() ? '\0' : s[i]; }

  long long integer() {
    size_t start = i;
    if (peek() == '-' || peek() == '+') ++i;
    if (done() || !std::isdigit(static_cast<unsigned char>(s[i])))
      fail("expected integer");
    while (!done() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    return std::stoll(s.substr(start, i - start));
  }
};

// One multiplicand: integer, tau[^e] or gK[^e].  Updates the raw term data.
void parseFactor(Cursor* c, long long* coeff, int* tauExp,
                 std::map<long long, long long>* gExps) {
  if (c->peek() == 't') {
    if (c->s.compare(c->i, 3, "tau") != 0) c->fail("expected 'tau'");
    c->i += 3;
    long long e = 1;
    if (c->peek() == '^') {
      ++c->i;
      e = c->integer();
    }
    *tauExp += static_cast<int>(e);
  } else if (c->peek() == 'g') {
    ++c->i;
    long long k = c->integer();
    long long e = 1;
    if (c->peek() == '^') {
      ++c->i;
      e = c->integer();
    }
    (*gExps)[k] += e;
  } else if (std::isdigit(static_cast<unsigned char>(c->peek()))) {
    *coeff *= c->integer();
  } else {
    c->fail("expected factor");
  }
}

}  // namespace

Coefficient parseCoefficient(int period, const std::string& text) {
  Coefficient result(period);
  Cursor c{text};
  if (c.done()) c.fail("empty input");
  bool first = true;
  while (!c.done()) {
    long long sign = 1;
    if (c.peek() == '+') {
      ++c.i;
    } else if (c.peek() == '-') {
      sign = -1;
      ++c.i;
    } else if (!first) {
      c.fail("expected '+' or '-' between terms");
    }
    first = false;
    long long coeff = sign;
    int tauExp = 0;
    std::map<long long, long long> gExps;
    parseFactor(&c, &coeff, &tauExp, &gExps);
    while (c.peek() == '*') {
      ++c.i;
      parseFactor(&c, &coeff, &tauExp, &gExps);
    }
    result += Coefficient::term(period, coeff, tauExp, gExps);
  }
  return result;
}

TauLaurent parseTauLaurent(const std::string& text) {
  Coefficient c = parseCoefficient(1, text);
  TauLaurent f;
  for (const auto& [m, cf] : c.terms()) f.setTerm(m.tauExp, cf);
  return f;
}

// ---------------------------------------------------------------------------
// Gauss sums

namespace {

bool isPrime(long long q) {
  if (q < 2) return false;
  for (long long d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

long long powMod(long long b, long long e, long long m) {
  long long r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = (__int128)r * b % m;
    b = (__int128)b * b % m;
    e >>= 1;
  }
  return r;
}

std::vector<long long> primeFactors(long long x) {
  std::vector<long long> ps;
  for (long long d = 2; d * d <= x; ++d) {
    if (x % d == 0) {
      ps.push_back(d);
      while (x % d == 0) x /= d;
    }
  }
  if (x > 1) ps.push_back(x);
  return ps;
}

long long primitiveRoot(long long q) {
  std::vector<long long> ps = primeFactors(q - 1);
  for (long long r = 2; r < q; ++r) {
    bool ok = true;
    for (long long p : ps)
      if (powMod(r, (q - 1) / p, q) == 1) {
        ok = false;
        break;
      }
    if (ok) return r;
  }
  throw std::logic_error("no primitive root found");
}

}  // namespace

PadicContext computeGaussSums(long long q, int n) {
  if (!isPrime(q))
    throw NotPrimePower("q = " + std::to_string(q) +
                        " must be prime for the residue field");
  if ((q - 1) % (2LL * n) != 0)
    throw BadCongruence("need q = 1 (mod 2n): q = " + std::to_string(q) +
                        ", n = " + std::to_string(n));
  const long long r = primitiveRoot(q);
  const double twoPi = 2.0 * std::numbers::pi;
  PadicContext ctx;
  ctx.q = q;
  ctx.period = n;
  ctx.gaussValues.assign(n, {0.0, 0.0});
  // gaussValues[k] = sum over m of exp(2 pi i m k / n) * psi(-r^m), with
  // psi the standard additive character of F_q.
  long long rm = 1;  // r^m mod q
  for (long long m = 0; m < q - 1; ++m) {
    const double psiArg = -twoPi * double(rm) / double(q);
    const std::complex<double> psi(std::cos(psiArg), std::sin(psiArg));
    for (int k = 0; k < n; ++k) {
      const double a = twoPi * double((m * k) % n) / double(n);
      ctx.gaussValues[k] += std::complex<double>(std::cos(a), std::sin(a)) * psi;
    }
    rm = (__int128)rm * r % q;
  }
  if (std::abs(ctx.gaussValues[0] - std::complex<double>(-1.0, 0.0)) > 1e-9)
    throw std::logic_error("Gauss sum sanity check failed at k = 0");
  ctx.gaussValues[0] = {-1.0, 0.0};
  return ctx;
}

std::complex<double> padicSpecialize(const Coefficient& c,
                                     const PadicContext& ctx) {
  if (ctx.period != c.period())
    throw std::invalid_argument("specialization period mismatch");
  const double sq = std::sqrt(double(ctx.q));
  std::complex<double> total = 0.0;
  for (const auto& [m, cf] : c.terms()) {
    std::complex<double> v = double(cf) * std::pow(sq, m.tauExp);
    for (size_t k = 0; k < m.g.size(); ++k) {
      int e = m.g[k];
      if (e == 0) continue;
      std::complex<double> base = ctx.gaussValues[k + 1];
      if (e > 0)
        for (int j = 0; j < e; ++j) v *= base;
      else
        for (int j = 0; j < -e; ++j) v /= base;
    }
    total += v;
  }
  return total;
}

}  // namespace ring
