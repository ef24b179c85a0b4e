#pragma once

// Exact rationals and Gaussian rationals. Values are always normalized:
// gcd(num, den) = 1, den > 0, zero is 0/1. All arithmetic in this layer is
// exact; conversion to double happens only where callers cross into the
// floating-point series engine.

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "dforge/bigint.hpp"
#include "dforge/error.hpp"

namespace dforge {

class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long v) : num_(v), den_(1) {}  // NOLINT: implicit by design
  Rational(int v) : num_(v), den_(1) {}
  Rational(BigInt v) : num_(std::move(v)), den_(1) {}
  Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }
  Rational(long long num, long long den) : num_(num), den_(den) { normalize(); }

  // Accepts "p", "p/q", and decimal forms like "0.5" or "1.25e-3".
  static Rational from_string(std::string_view s) {
    if (s.empty()) fail(Errc::bad_rational, "empty rational literal");
    size_t slash = s.find('/');
    if (slash != std::string_view::npos) {
      BigInt n = BigInt::from_string(s.substr(0, slash));
      BigInt d = BigInt::from_string(s.substr(slash + 1));
      if (d.is_zero()) fail(Errc::bad_rational, "zero denominator in '" + std::string(s) + "'");
      return Rational(std::move(n), std::move(d));
    }
    size_t epos = s.find_first_of("eE");
    long long exp10 = 0;
    std::string_view body = s;
    if (epos != std::string_view::npos) {
      BigInt e = BigInt::from_string(s.substr(epos + 1));
      if (!e.fits_int64()) fail(Errc::bad_rational, "exponent out of range");
      exp10 = e.to_int64();
      if (exp10 > 4096 || exp10 < -4096) fail(Errc::bad_rational, "exponent out of range");
      body = s.substr(0, epos);
    }
    size_t dot = body.find('.');
    std::string digits;
    if (dot == std::string_view::npos) {
      digits = std::string(body);
    } else {
      digits = std::string(body.substr(0, dot)) + std::string(body.substr(dot + 1));
      exp10 -= static_cast<long long>(body.size() - dot - 1);
      if (digits.empty() || digits == "+" || digits == "-")
        fail(Errc::bad_rational, "invalid rational '" + std::string(s) + "'");
    }
    BigInt n = BigInt::from_string(digits);
    BigInt d(1);
    if (exp10 > 0) {
      n *= BigInt::pow(BigInt(10), static_cast<unsigned long long>(exp10));
    } else if (exp10 < 0) {
      d = BigInt::pow(BigInt(10), static_cast<unsigned long long>(-exp10));
    }
    return Rational(std::move(n), std::move(d));
  }

  const BigInt& num() const noexcept { return num_; }
  const BigInt& den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_integer() const noexcept { return den_.is_one(); }
  int sign() const noexcept { return num_.sign(); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) fail(Errc::internal, "rational division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }
  Rational operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) noexcept { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return compare(a.num_ * b.den_, b.num_ * a.den_) < 0;
  }

  Rational inverse() const {
    if (is_zero()) fail(Errc::internal, "inverse of zero rational");
    return Rational(den_, num_);
  }

  Rational abs() const { return sign() < 0 ? -*this : *this; }

  double to_double() const noexcept {
    if (num_.is_zero()) return 0.0;
    long long en = 0, ed = 0;
    double mn = num_.mantissa2(en);
    double md = den_.mantissa2(ed);
    long long e = en - ed;
    if (e > 2000) return mn < 0 ? -HUGE_VAL : HUGE_VAL;
    if (e < -2000) return 0.0;
    return std::ldexp(mn / md, static_cast<int>(e));
  }

  std::string to_string() const {
    if (den_.is_one()) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
  }

 private:
  BigInt num_;
  BigInt den_;

  void normalize() {
    if (den_.is_zero()) fail(Errc::internal, "rational with zero denominator");
    if (num_.is_zero()) {
      den_ = BigInt(1);
      return;
    }
    if (den_.sign() < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (!g.is_one()) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
  }
};

class GaussRational {
 public:
  GaussRational() = default;
  GaussRational(Rational re) : re_(std::move(re)) {}  // NOLINT: implicit by design
  GaussRational(long long re) : re_(re) {}
  GaussRational(int re) : re_(re) {}
  GaussRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  const Rational& re() const noexcept { return re_; }
  const Rational& im() const noexcept { return im_; }
  bool is_zero() const noexcept { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const noexcept { return im_.is_zero(); }
  bool is_one() const noexcept { return im_.is_zero() && re_ == Rational(1); }

  static GaussRational i() { return GaussRational(Rational(0), Rational(1)); }

  friend GaussRational operator+(const GaussRational& a, const GaussRational& b) {
    return GaussRational(a.re_ + b.re_, a.im_ + b.im_);
  }
  friend GaussRational operator-(const GaussRational& a, const GaussRational& b) {
    return GaussRational(a.re_ - b.re_, a.im_ - b.im_);
  }
  friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
    return GaussRational(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
  }
  GaussRational operator-() const { return GaussRational(-re_, -im_); }

  GaussRational inverse() const {
    if (is_zero()) fail(Errc::internal, "inverse of zero");
    Rational n = re_ * re_ + im_ * im_;
    return GaussRational(re_ / n, -(im_ / n));
  }
  friend GaussRational operator/(const GaussRational& a, const GaussRational& b) {
    return a * b.inverse();
  }

  GaussRational& operator+=(const GaussRational& o) { return *this = *this + o; }
  GaussRational& operator-=(const GaussRational& o) { return *this = *this - o; }
  GaussRational& operator*=(const GaussRational& o) { return *this = *this * o; }

  friend bool operator==(const GaussRational& a, const GaussRational& b) noexcept {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussRational& a, const GaussRational& b) noexcept {
    return !(a == b);
  }

  std::complex<double> to_complex() const noexcept {
    return {re_.to_double(), im_.to_double()};
  }

  std::string to_string() const {
    if (im_.is_zero()) return re_.to_string();
    std::string s = re_.is_zero() ? "" : re_.to_string();
    if (im_.sign() > 0 && !s.empty()) s += "+";
    s += im_.to_string() + "*i";
    return s;
  }

 private:
  Rational re_;
  Rational im_;
};

}  // namespace dforge
