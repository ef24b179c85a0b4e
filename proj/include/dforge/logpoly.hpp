#pragma once

// Polynomials in the formal symbols log2, log3, log5, ... with Gaussian
// rational coefficients. The symbols stand for logarithms of primes, which
// are linearly independent over the rationals, so a value is zero exactly
// when its polynomial representation is zero. log n for composite n expands
// through log(ab) = log a + log b into a linear form in the symbols.

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dforge/error.hpp"
#include "dforge/factor.hpp"
#include "dforge/rational.hpp"

namespace dforge {

// Product of log-prime symbols: sorted (prime, exponent) pairs.
struct LogMonomial {
  std::vector<std::pair<uint32_t, uint32_t>> factors;

  uint32_t total_degree() const noexcept {
    uint32_t d = 0;
    for (const auto& [p, e] : factors) d += e;
    return d;
  }
  bool empty() const noexcept { return factors.empty(); }

  friend LogMonomial operator*(const LogMonomial& a, const LogMonomial& b) {
    LogMonomial r;
    size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
      if (j == b.factors.size() || (i < a.factors.size() && a.factors[i].first < b.factors[j].first)) {
        r.factors.push_back(a.factors[i++]);
      } else if (i == a.factors.size() || b.factors[j].first < a.factors[i].first) {
        r.factors.push_back(b.factors[j++]);
      } else {
        r.factors.emplace_back(a.factors[i].first, a.factors[i].second + b.factors[j].second);
        ++i;
        ++j;
      }
    }
    return r;
  }

  // true if b divides a; quotient written to q
  static bool try_divide(const LogMonomial& a, const LogMonomial& b, LogMonomial& q) {
    q.factors.clear();
    size_t i = 0;
    for (const auto& [p, e] : b.factors) {
      while (i < a.factors.size() && a.factors[i].first < p) q.factors.push_back(a.factors[i++]);
      if (i == a.factors.size() || a.factors[i].first != p || a.factors[i].second < e) return false;
      if (a.factors[i].second > e) q.factors.emplace_back(p, a.factors[i].second - e);
      ++i;
    }
    while (i < a.factors.size()) q.factors.push_back(a.factors[i++]);
    return true;
  }

  friend bool operator==(const LogMonomial& a, const LogMonomial& b) noexcept {
    return a.factors == b.factors;
  }

  // graded lexicographic: higher total degree first, then lex on primes
  static int grlex_compare(const LogMonomial& a, const LogMonomial& b) noexcept {
    uint32_t da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db ? -1 : 1;
    size_t n = std::min(a.factors.size(), b.factors.size());
    for (size_t i = 0; i < n; ++i) {
      if (a.factors[i].first != b.factors[i].first)
        return a.factors[i].first < b.factors[i].first ? 1 : -1;
      if (a.factors[i].second != b.factors[i].second)
        return a.factors[i].second < b.factors[i].second ? -1 : 1;
    }
    if (a.factors.size() != b.factors.size()) return a.factors.size() < b.factors.size() ? -1 : 1;
    return 0;
  }

  std::string to_string() const {
    std::string s;
    for (const auto& [p, e] : factors) {
      if (!s.empty()) s += "*";
      s += "log" + std::to_string(p);
      if (e > 1) s += "^" + std::to_string(e);
    }
    return s;
  }
};

class LogPoly {
 public:
  LogPoly() = default;
  LogPoly(GaussRational c) {  // NOLINT: implicit by design
    if (!c.is_zero()) terms_.emplace_back(LogMonomial{}, std::move(c));
  }
  LogPoly(Rational c) : LogPoly(GaussRational(std::move(c))) {}
  LogPoly(long long c) : LogPoly(GaussRational(c)) {}
  LogPoly(int c) : LogPoly(GaussRational(c)) {}

  static LogPoly monomial(LogMonomial m, GaussRational c) {
    LogPoly r;
    if (!c.is_zero()) r.terms_.emplace_back(std::move(m), std::move(c));
    return r;
  }

  // the linear form log n = sum of e_p * log p over the factorization of n
  static LogPoly log_of(uint64_t n) {
    LogPoly r;
    for (const auto& [p, e] : factorize(n).factors) {
      LogMonomial m;
      m.factors.emplace_back(static_cast<uint32_t>(p), 1u);
      r.terms_.emplace_back(std::move(m), GaussRational(Rational(static_cast<long long>(e))));
    }
    r.sort_terms();
    return r;
  }

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_scalar() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].first.empty());
  }
  const GaussRational& leading_coeff() const { return terms_.front().second; }
  const LogMonomial& leading_monomial() const { return terms_.front().first; }

  GaussRational scalar() const {
    if (terms_.empty()) return GaussRational();
    if (!is_scalar()) fail(Errc::unsupported_coefficients, "value carries log symbols");
    return terms_[0].second;
  }

  uint32_t total_degree() const noexcept {
    uint32_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
    return d;
  }

  size_t term_count() const noexcept { return terms_.size(); }
  const std::vector<std::pair<LogMonomial, GaussRational>>& terms() const noexcept { return terms_; }

  friend LogPoly operator+(const LogPoly& a, const LogPoly& b) {
    LogPoly r;
    size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      int c;
      if (i == a.terms_.size()) {
        c = -1;
      } else if (j == b.terms_.size()) {
        c = 1;
      } else {
        c = LogMonomial::grlex_compare(a.terms_[i].first, b.terms_[j].first);
      }
      if (c > 0) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (c < 0) {
        r.terms_.push_back(b.terms_[j++]);
      } else {
        GaussRational s = a.terms_[i].second + b.terms_[j].second;
        if (!s.is_zero()) r.terms_.emplace_back(a.terms_[i].first, std::move(s));
        ++i;
        ++j;
      }
    }
    return r;
  }

  LogPoly operator-() const {
    LogPoly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }
  friend LogPoly operator-(const LogPoly& a, const LogPoly& b) { return a + (-b); }

  friend LogPoly operator*(const LogPoly& a, const LogPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::map<LogMonomial, GaussRational, MonomialLess> acc;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        LogMonomial m = ma * mb;
        auto it = acc.find(m);
        if (it == acc.end()) {
          acc.emplace(std::move(m), ca * cb);
        } else {
          it->second += ca * cb;
        }
      }
    }
    LogPoly r;
    for (auto& [m, c] : acc) {
      if (!c.is_zero()) r.terms_.emplace_back(m, std::move(c));
    }
    std::reverse(r.terms_.begin(), r.terms_.end());  // map is ascending, we keep leading first
    return r;
  }

  LogPoly& operator+=(const LogPoly& o) { return *this = *this + o; }
  LogPoly& operator-=(const LogPoly& o) { return *this = *this - o; }
  LogPoly& operator*=(const LogPoly& o) { return *this = *this * o; }

  friend bool operator==(const LogPoly& a, const LogPoly& b) noexcept {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const LogPoly& a, const LogPoly& b) noexcept { return !(a == b); }

  LogPoly pow(uint32_t e) const {
    LogPoly acc(GaussRational(Rational(1)));
    LogPoly base = *this;
    while (e != 0) {
      if (e & 1u) acc *= base;
      e >>= 1;
      if (e != 0) base *= base;
    }
    return acc;
  }

  // Exact quotient; the divisor is known to divide (as in fraction-free
  // elimination). Throws if the division leaves a remainder.
  static LogPoly exact_div(LogPoly num, const LogPoly& den) {
    if (den.is_zero()) fail(Errc::internal, "exact_div by zero");
    if (den.is_scalar()) {
      GaussRational inv = den.scalar().inverse();
      for (auto& [m, c] : num.terms_) c *= inv;
      return num;
    }
    LogPoly q;
    const LogMonomial& lm = den.leading_monomial();
    GaussRational lc_inv = den.leading_coeff().inverse();
    while (!num.is_zero()) {
      LogMonomial qm;
      if (!LogMonomial::try_divide(num.leading_monomial(), lm, qm))
        fail(Errc::internal, "exact_div: non-exact division");
      LogPoly t = LogPoly::monomial(std::move(qm), num.leading_coeff() * lc_inv);
      q += t;
      num -= t * den;
    }
    return q;
  }

  std::complex<double> eval() const noexcept {
    std::complex<double> acc(0.0, 0.0);
    for (const auto& [m, c] : terms_) {
      double w = 1.0;
      for (const auto& [p, e] : m.factors) {
        double lp = std::log(static_cast<double>(p));
        for (uint32_t k = 0; k < e; ++k) w *= lp;
      }
      acc += c.to_complex() * w;
    }
    return acc;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms_) {
      std::string cs = c.to_string();
      if (!s.empty() && cs[0] != '-') s += "+";
      if (m.empty()) {
        s += cs;
      } else if (c.is_one()) {
        s += m.to_string();
      } else if (c == GaussRational(Rational(-1))) {
        s += "-" + m.to_string();
      } else {
        bool needs_parens = !c.is_real();
        s += needs_parens ? "(" + cs + ")" : cs;
        s += "*" + m.to_string();
      }
    }
    return s;
  }

 private:
  struct MonomialLess {
    bool operator()(const LogMonomial& a, const LogMonomial& b) const noexcept {
      return LogMonomial::grlex_compare(a, b) < 0;
    }
  };

  // descending grlex, leading term first, no zero coefficients
  std::vector<std::pair<LogMonomial, GaussRational>> terms_;

  void sort_terms() {
    std::sort(terms_.begin(), terms_.end(), [](const auto& a, const auto& b) {
      return LogMonomial::grlex_compare(a.first, b.first) > 0;
    });
  }
};

}  // namespace dforge
