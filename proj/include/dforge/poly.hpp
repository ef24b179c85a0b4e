#pragma once

// Polynomials in the series variable z. Coefficients are LogPoly values, so a
// single type covers plain Gaussian rationals, z-polynomials, and values that
// carry formal log-prime factors (as produced by the arithmetic derivative).
// Evaluation is exact-in, float-out: the complex result is the only place
// doubles appear.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "dforge/logpoly.hpp"

namespace dforge {

class PolyCoeff {
 public:
  PolyCoeff() = default;
  PolyCoeff(LogPoly c) {  // NOLINT: implicit by design
    if (!c.is_zero()) coeffs_.push_back(std::move(c));
  }
  PolyCoeff(GaussRational c) : PolyCoeff(LogPoly(std::move(c))) {}
  PolyCoeff(Rational c) : PolyCoeff(LogPoly(std::move(c))) {}
  PolyCoeff(long long c) : PolyCoeff(LogPoly(c)) {}
  PolyCoeff(int c) : PolyCoeff(LogPoly(c)) {}

  static PolyCoeff variable() {  // the polynomial z
    PolyCoeff p;
    p.coeffs_ = {LogPoly(0), LogPoly(1)};
    return p;
  }

  static PolyCoeff from_coeffs(std::vector<LogPoly> coeffs) {
    PolyCoeff p;
    p.coeffs_ = std::move(coeffs);
    p.trim();
    return p;
  }

  bool is_zero() const noexcept { return coeffs_.empty(); }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_constant() const noexcept { return coeffs_.size() <= 1; }
  bool is_scalar() const noexcept { return coeffs_.empty() || (coeffs_.size() == 1 && coeffs_[0].is_scalar()); }

  // constant term as a Gaussian rational; rejects z-polynomials and log-carrying values
  GaussRational scalar() const {
    if (coeffs_.empty()) return GaussRational();
    if (coeffs_.size() > 1) fail(Errc::unsupported_coefficients, "value is a polynomial in z");
    return coeffs_[0].scalar();
  }

  const LogPoly& constant_part() const {
    static const LogPoly zero;
    return coeffs_.empty() ? zero : coeffs_[0];
  }

  const std::vector<LogPoly>& coeffs() const noexcept { return coeffs_; }

  uint32_t log_degree() const noexcept {
    uint32_t d = 0;
    for (const auto& c : coeffs_) d = std::max(d, c.total_degree());
    return d;
  }

  friend PolyCoeff operator+(const PolyCoeff& a, const PolyCoeff& b) {
    PolyCoeff r;
    r.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (size_t i = 0; i < r.coeffs_.size(); ++i) {
      if (i < a.coeffs_.size()) r.coeffs_[i] += a.coeffs_[i];
      if (i < b.coeffs_.size()) r.coeffs_[i] += b.coeffs_[i];
    }
    r.trim();
    return r;
  }
  PolyCoeff operator-() const {
    PolyCoeff r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }
  friend PolyCoeff operator-(const PolyCoeff& a, const PolyCoeff& b) { return a + (-b); }

  friend PolyCoeff operator*(const PolyCoeff& a, const PolyCoeff& b) {
    if (a.is_zero() || b.is_zero()) return {};
    PolyCoeff r;
    r.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, LogPoly());
    for (size_t i = 0; i < a.coeffs_.size(); ++i) {
      for (size_t j = 0; j < b.coeffs_.size(); ++j) {
        r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
      }
    }
    r.trim();
    return r;
  }

  PolyCoeff& operator+=(const PolyCoeff& o) { return *this = *this + o; }
  PolyCoeff& operator-=(const PolyCoeff& o) { return *this = *this - o; }
  PolyCoeff& operator*=(const PolyCoeff& o) { return *this = *this * o; }

  friend bool operator==(const PolyCoeff& a, const PolyCoeff& b) noexcept {
    return a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const PolyCoeff& a, const PolyCoeff& b) noexcept { return !(a == b); }

  std::complex<double> eval(std::complex<double> z) const noexcept {
    std::complex<double> acc(0.0, 0.0);
    for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * z + coeffs_[i].eval();
    return acc;
  }

  // exact evaluation at a Gaussian rational point
  LogPoly eval_exact(const GaussRational& z) const {
    LogPoly acc;
    LogPoly zc(z);
    for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * zc + coeffs_[i];
    return acc;
  }

  std::string to_string() const {
    if (coeffs_.empty()) return "0";
    std::string s;
    for (size_t i = 0; i < coeffs_.size(); ++i) {
      if (coeffs_[i].is_zero()) continue;
      if (!s.empty()) s += " + ";
      std::string cs = coeffs_[i].to_string();
      if (i == 0) {
        s += cs;
      } else {
        s += "(" + cs + ")*z";
        if (i > 1) s += "^" + std::to_string(i);
      }
    }
    return s.empty() ? "0" : s;
  }

 private:
  std::vector<LogPoly> coeffs_;  // coeffs_[m] multiplies z^m; leading entry nonzero

  void trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }
};

}  // namespace dforge
