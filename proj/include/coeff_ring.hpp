// coeff_ring.hpp
//
// Exact arithmetic in the generic coefficient ring used throughout this
// project: integer Laurent polynomials in a formal parameter tau, extended
// by formal Gauss sum symbols g_k.  The symbols repeat with period n and
// satisfy
//
//    g_k = g_l  when k = l (mod n),     g_0 = -1,
//    g_k * g_{-k} = tau^2               (k not divisible by n).
//
// Elements are kept in a canonical normal form so that equality, ordering
// and rendering are all literal comparisons:
//
//    * the exponent of g_k is free for 1 <= k < n/2;
//    * for n even the exponent of g_{n/2} is 0 or 1 (g_{n/2}^2 = tau^2);
//    * g_k with n/2 < k < n is rewritten through g_k = tau^2 g_{n-k}^{-1};
//    * g_0 contributes only a sign.
//
// Two specializations are provided: the "quantum" one sending every g_k
// (k != 0) to tau, which lands in plain Laurent polynomials, and the p-adic
// one sending tau to sqrt(q) and g_k to an honest Gauss sum over F_q.

#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ring {

// Errors named for what went wrong.  All carry a human-readable message.
struct NotAUnit : std::runtime_error {
  explicit NotAUnit(const std::string& m) : std::runtime_error(m) {}
};
struct NotTauPure : std::runtime_error {
  explicit NotTauPure(const std::string& m) : std::runtime_error(m) {}
};
struct BadCongruence : std::runtime_error {
  explicit BadCongruence(const std::string& m) : std::runtime_error(m) {}
};
struct NotPrimePower : std::runtime_error {
  explicit NotPrimePower(const std::string& m) : std::runtime_error(m) {}
};

// ---------------------------------------------------------------------------
// Laurent polynomials in tau alone.

class TauLaurent {
 public:
  TauLaurent() = default;

  static TauLaurent monomial(int exp, long long coeff = 1);

  bool isZero() const { return terms_.empty(); }
  long long coeff(int exp) const;
  int lowestExp() const;   // requires nonzero
  int highestExp() const;  // requires nonzero

  TauLaurent& operator+=(const TauLaurent& o);
  TauLaurent& operator-=(const TauLaurent& o);
  TauLaurent operator+(const TauLaurent& o) const;
  TauLaurent operator-(const TauLaurent& o) const;
  TauLaurent operator-() const;
  TauLaurent operator*(const TauLaurent& o) const;
  bool operator==(const TauLaurent& o) const { return terms_ == o.terms_; }
  bool operator!=(const TauLaurent& o) const { return !(*this == o); }
  bool operator<(const TauLaurent& o) const { return terms_ < o.terms_; }

  // tau -> tau^-1.
  TauLaurent bar() const;

  // True when every exponent is >= 1 (resp. <= -1).  Zero qualifies as both.
  bool allExpPositive() const;
  bool allExpNegative() const;

  // Truncations by exponent sign, used when peeling self-dual defects.
  TauLaurent positivePart() const;  // exponents > 0
  TauLaurent negativePart() const;  // exponents < 0

  long long evalAtOne() const;
  std::complex<double> evalTau(std::complex<double> tau) const;

  const std::map<int, long long>& terms() const { return terms_; }
  void setTerm(int exp, long long c);

 private:
  std::map<int, long long> terms_;  // exponent -> nonzero coefficient
};

// Exact division in Z[tau, tau^-1].  Returns false when num is not a
// multiple of den (callers translate that into their own error).
bool tryDivideExact(const TauLaurent& num, const TauLaurent& den,
                    TauLaurent* quot);

std::string render(const TauLaurent& f);

// ---------------------------------------------------------------------------
// The full ring with Gauss sum symbols.

// A canonical monomial tau^tauExp * g_1^{e_1} ... g_{n-1}^{e_{n-1}}.
// The vector g always has length n-1 and already satisfies the normal form
// constraints; the containing Coefficient is responsible for that.
struct Monomial {
  int tauExp = 0;
  std::vector<int> g;

  bool operator==(const Monomial& o) const {
    return tauExp == o.tauExp && g == o.g;
  }
  bool operator<(const Monomial& o) const {
    if (tauExp != o.tauExp) return tauExp < o.tauExp;
    return g < o.g;
  }
  bool isTauPure() const;
  int gExpSum() const;
};

class Coefficient {
 public:
  // The zero element of the ring with period n.
  explicit Coefficient(int period = 1);

  static Coefficient integer(int period, long long c);
  static Coefficient tauPower(int period, int exp, long long c = 1);
  // The symbol g_k (any integer k, reduced mod period).
  static Coefficient gauss(int period, long long k);
  // c * tau^tauExp * prod g_k^{e_k} with arbitrary raw exponents.
  static Coefficient term(int period, long long c, int tauExp,
                          const std::map<long long, long long>& gExps);

  int period() const { return period_; }
  bool isZero() const { return terms_.empty(); }
  bool isOne() const;

  Coefficient& operator+=(const Coefficient& o);
  Coefficient& operator-=(const Coefficient& o);
  Coefficient operator+(const Coefficient& o) const;
  Coefficient operator-(const Coefficient& o) const;
  Coefficient operator-() const;
  Coefficient operator*(const Coefficient& o) const;
  bool operator==(const Coefficient& o) const;
  bool operator!=(const Coefficient& o) const { return !(*this == o); }
  bool operator<(const Coefficient& o) const { return terms_ < o.terms_; }

  // The involution tau -> tau^-1, g_k -> g_k^-1.
  Coefficient bar() const;

  // Multiplicative inverse of a one-term element with coefficient +-1.
  // Anything else raises NotAUnit.
  Coefficient invertUnit() const;

  // Membership in tau Z[tau] (plus) or tau^-1 Z[tau^-1] (minus).  The
  // element must be free of g symbols, otherwise NotTauPure is raised.
  // Zero belongs to both classes.
  bool inPlusClass() const;
  bool inMinusClass() const;

  // g_k -> tau (k != 0), yielding a Laurent polynomial in tau.
  TauLaurent quantumSpecialize() const;

  const std::map<Monomial, long long>& terms() const { return terms_; }

 private:
  void addTerm(const Monomial& m, long long c);
  friend Coefficient mulImpl(const Coefficient&, const Coefficient&);

  int period_;
  std::map<Monomial, long long> terms_;
};

Coefficient fromTauLaurent(int period, const TauLaurent& f);

std::string render(const Coefficient& c);

// Inverse of render.  Accepts sums of terms like "-3*tau^-2*g1^2*g2".
// Malformed input raises std::invalid_argument with a character offset in
// the message; the command line layer turns that into its own error type.
Coefficient parseCoefficient(int period, const std::string& text);
TauLaurent parseTauLaurent(const std::string& text);

// ---------------------------------------------------------------------------
// p-adic specialization.

struct PadicContext {
  long long q = 0;
  int period = 0;
  // gaussValues[k] for 0 <= k < period; index 0 is exactly -1.
  std::vector<std::complex<double>> gaussValues;
};

// Gauss sums for the field F_q, q prime, q = 1 (mod 2n).  The generator of
// F_q^* is the smallest primitive root.  Raises NotPrimePower when q is not
// prime and BadCongruence when the congruence fails.
PadicContext computeGaussSums(long long q, int n);

// tau -> sqrt(q), g_k -> gaussValues[k].
std::complex<double> padicSpecialize(const Coefficient& c,
                                     const PadicContext& ctx);

}  // namespace ring
