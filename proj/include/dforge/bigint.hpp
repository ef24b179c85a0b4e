#pragma once

// Arbitrary-precision signed integers, sign-magnitude over 32-bit limbs.
// Sized for this library's workloads (exact ring arithmetic, fraction-free
// elimination, integer-exponent kernel powers up to a few tens of kilobits),
// not for cryptographic or sieve-scale use.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dforge/error.hpp"

namespace dforge {

class BigInt {
 public:
  BigInt() = default;

  BigInt(long long v) {  // NOLINT: implicit by design, mirrors built-in ints
    if (v == 0) return;
    sign_ = v < 0 ? -1 : 1;
    unsigned long long m = v < 0 ? ~static_cast<unsigned long long>(v) + 1ULL
                                 : static_cast<unsigned long long>(v);
    while (m != 0) {
      mag_.push_back(static_cast<uint32_t>(m & 0xffffffffULL));
      m >>= 32;
    }
  }
  BigInt(int v) : BigInt(static_cast<long long>(v)) {}
  BigInt(unsigned long long v) {
    if (v == 0) return;
    sign_ = 1;
    while (v != 0) {
      mag_.push_back(static_cast<uint32_t>(v & 0xffffffffULL));
      v >>= 32;
    }
  }

  static BigInt from_string(std::string_view s) {
    BigInt out;
    if (s.empty()) fail(Errc::bad_rational, "empty integer literal");
    int sign = 1;
    size_t i = 0;
    if (s[0] == '+' || s[0] == '-') {
      sign = s[0] == '-' ? -1 : 1;
      i = 1;
    }
    if (i == s.size()) fail(Errc::bad_rational, "sign without digits");
    for (; i < s.size(); ++i) {
      char c = s[i];
      if (c < '0' || c > '9') fail(Errc::bad_rational, "invalid digit in integer literal");
      out.mul_small_add(10, static_cast<uint32_t>(c - '0'));
    }
    if (!out.mag_.empty()) out.sign_ = sign;
    return out;
  }

  bool is_zero() const noexcept { return sign_ == 0; }
  int sign() const noexcept { return sign_; }
  bool is_one() const noexcept { return sign_ == 1 && mag_.size() == 1 && mag_[0] == 1; }
  bool odd() const noexcept { return !mag_.empty() && (mag_[0] & 1u); }

  size_t bit_length() const noexcept {
    if (mag_.empty()) return 0;
    uint32_t top = mag_.back();
    size_t b = (mag_.size() - 1) * 32;
    while (top != 0) {
      ++b;
      top >>= 1;
    }
    return b;
  }

  bool fits_int64() const noexcept {
    if (mag_.size() > 2) return false;
    unsigned long long v = to_u64_trunc();
    if (sign_ >= 0) return v <= 0x7fffffffffffffffULL;
    return v <= 0x8000000000000000ULL;
  }

  long long to_int64() const {
    if (!fits_int64()) fail(Errc::internal, "BigInt does not fit int64");
    unsigned long long v = to_u64_trunc();
    if (sign_ < 0) return -static_cast<long long>(v - 1) - 1;
    return static_cast<long long>(v);
  }

  // Signed mantissa in [0.5, 1) and exponent with |this| = mantissa * 2^exp2.
  double mantissa2(long long& exp2) const noexcept {
    if (sign_ == 0) {
      exp2 = 0;
      return 0.0;
    }
    size_t bl = bit_length();
    exp2 = static_cast<long long>(bl);
    if (mag_.size() <= 2) {
      return sign_ * std::ldexp(static_cast<double>(to_u64_trunc()), -static_cast<int>(bl));
    }
    size_t shift = bl - 64;
    unsigned long long top = 0;
    for (size_t i = 0; i < 64; ++i) {
      size_t bit = shift + 63 - i;
      top = (top << 1) | ((mag_[bit / 32] >> (bit % 32)) & 1u);
    }
    return sign_ * std::ldexp(static_cast<double>(top), -64);
  }

  double to_double() const noexcept {
    long long e = 0;
    double m = mantissa2(e);
    if (e > 2000) return m < 0 ? -HUGE_VAL : (m > 0 ? HUGE_VAL : 0.0);
    return std::ldexp(m, static_cast<int>(e));
  }

  friend int compare(const BigInt& a, const BigInt& b) noexcept {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
    int c = compare_mag(a.mag_, b.mag_);
    return a.sign_ >= 0 ? c : -c;
  }
  friend bool operator==(const BigInt& a, const BigInt& b) noexcept { return compare(a, b) == 0; }
  friend bool operator!=(const BigInt& a, const BigInt& b) noexcept { return compare(a, b) != 0; }
  friend bool operator<(const BigInt& a, const BigInt& b) noexcept { return compare(a, b) < 0; }
  friend bool operator<=(const BigInt& a, const BigInt& b) noexcept { return compare(a, b) <= 0; }
  friend bool operator>(const BigInt& a, const BigInt& b) noexcept { return compare(a, b) > 0; }
  friend bool operator>=(const BigInt& a, const BigInt& b) noexcept { return compare(a, b) >= 0; }

  BigInt operator-() const {
    BigInt r = *this;
    r.sign_ = -r.sign_;
    return r;
  }

  friend BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    BigInt r;
    if (a.sign_ == b.sign_) {
      r.mag_ = add_mag(a.mag_, b.mag_);
      r.sign_ = a.sign_;
      return r;
    }
    int c = compare_mag(a.mag_, b.mag_);
    if (c == 0) return BigInt();
    if (c > 0) {
      r.mag_ = sub_mag(a.mag_, b.mag_);
      r.sign_ = a.sign_;
    } else {
      r.mag_ = sub_mag(b.mag_, a.mag_);
      r.sign_ = b.sign_;
    }
    return r;
  }
  friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

  friend BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return BigInt();
    BigInt r;
    r.mag_.assign(a.mag_.size() + b.mag_.size(), 0);
    for (size_t i = 0; i < a.mag_.size(); ++i) {
      uint64_t carry = 0;
      uint64_t ai = a.mag_[i];
      for (size_t j = 0; j < b.mag_.size(); ++j) {
        uint64_t cur = static_cast<uint64_t>(r.mag_[i + j]) + ai * b.mag_[j] + carry;
        r.mag_[i + j] = static_cast<uint32_t>(cur);
        carry = cur >> 32;
      }
      size_t k = i + b.mag_.size();
      while (carry != 0) {
        uint64_t cur = static_cast<uint64_t>(r.mag_[k]) + carry;
        r.mag_[k] = static_cast<uint32_t>(cur);
        carry = cur >> 32;
        ++k;
      }
    }
    r.trim();
    r.sign_ = a.sign_ * b.sign_;
    if (r.mag_.empty()) r.sign_ = 0;
    return r;
  }

  BigInt& operator+=(const BigInt& o) { return *this = *this + o; }
  BigInt& operator-=(const BigInt& o) { return *this = *this - o; }
  BigInt& operator*=(const BigInt& o) { return *this = *this * o; }

  // Truncated division: quotient rounds toward zero, remainder carries the
  // sign of the dividend, |r| < |b|.
  static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.sign_ == 0) fail(Errc::internal, "division by zero");
    int c = compare_mag(a.mag_, b.mag_);
    if (c < 0) {
      q = BigInt();
      r = a;
      return;
    }
    std::vector<uint32_t> qm, rm;
    divmod_mag(a.mag_, b.mag_, qm, rm);
    q.mag_ = std::move(qm);
    r.mag_ = std::move(rm);
    q.trim();
    r.trim();
    q.sign_ = q.mag_.empty() ? 0 : a.sign_ * b.sign_;
    r.sign_ = r.mag_.empty() ? 0 : a.sign_;
  }

  friend BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod(a, b, q, r);
    return q;
  }
  friend BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod(a, b, q, r);
    return r;
  }

  static BigInt gcd(BigInt a, BigInt b) {
    a.sign_ = a.mag_.empty() ? 0 : 1;
    b.sign_ = b.mag_.empty() ? 0 : 1;
    while (!b.is_zero()) {
      BigInt q, r;
      divmod(a, b, q, r);
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }

  static BigInt pow(BigInt base, unsigned long long e) {
    BigInt acc(1);
    while (e != 0) {
      if (e & 1ULL) acc *= base;
      e >>= 1;
      if (e != 0) base *= base;
    }
    return acc;
  }

  std::string to_string() const {
    if (sign_ == 0) return "0";
    std::vector<uint32_t> m = mag_;
    std::string digits;
    while (!m.empty()) {
      uint64_t rem = 0;
      for (size_t i = m.size(); i-- > 0;) {
        uint64_t cur = (rem << 32) | m[i];
        m[i] = static_cast<uint32_t>(cur / 1000000000ULL);
        rem = cur % 1000000000ULL;
      }
      while (!m.empty() && m.back() == 0) m.pop_back();
      for (int d = 0; d < 9; ++d) {
        digits.push_back(static_cast<char>('0' + rem % 10));
        rem /= 10;
      }
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    std::string out;
    if (sign_ < 0) out.push_back('-');
    out.append(digits.rbegin(), digits.rend());
    return out;
  }

 private:
  int sign_ = 0;                // -1, 0, +1
  std::vector<uint32_t> mag_;   // little-endian limbs, no leading zeros

  unsigned long long to_u64_trunc() const noexcept {
    unsigned long long v = 0;
    if (mag_.size() > 1) v = static_cast<unsigned long long>(mag_[1]) << 32;
    if (!mag_.empty()) v |= mag_[0];
    return v;
  }

  void trim() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
  }

  void mul_small_add(uint32_t mul, uint32_t add) {
    uint64_t carry = add;
    for (auto& limb : mag_) {
      uint64_t cur = static_cast<uint64_t>(limb) * mul + carry;
      limb = static_cast<uint32_t>(cur);
      carry = cur >> 32;
    }
    while (carry != 0) {
      mag_.push_back(static_cast<uint32_t>(carry));
      carry >>= 32;
    }
    if (!mag_.empty() && sign_ == 0) sign_ = 1;
  }

  static int compare_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) noexcept {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;) {
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
  }

  static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b) {
    const std::vector<uint32_t>& big = a.size() >= b.size() ? a : b;
    const std::vector<uint32_t>& small = a.size() >= b.size() ? b : a;
    std::vector<uint32_t> r = big;
    uint64_t carry = 0;
    for (size_t i = 0; i < small.size(); ++i) {
      uint64_t cur = static_cast<uint64_t>(r[i]) + small[i] + carry;
      r[i] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
    }
    for (size_t i = small.size(); carry != 0 && i < r.size(); ++i) {
      uint64_t cur = static_cast<uint64_t>(r[i]) + carry;
      r[i] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
    }
    if (carry != 0) r.push_back(static_cast<uint32_t>(carry));
    return r;
  }

  // requires |a| >= |b|
  static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b) {
    std::vector<uint32_t> r = a;
    int64_t borrow = 0;
    for (size_t i = 0; i < b.size() || borrow != 0; ++i) {
      int64_t cur = static_cast<int64_t>(r[i]) - borrow - (i < b.size() ? b[i] : 0);
      if (cur < 0) {
        cur += (1LL << 32);
        borrow = 1;
      } else {
        borrow = 0;
      }
      r[i] = static_cast<uint32_t>(cur);
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }

  // Knuth algorithm D on magnitudes; requires |a| >= |b|, b nonzero.
  static void divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                         std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
    if (b.size() == 1) {
      uint32_t d = b[0];
      q.assign(a.size(), 0);
      uint64_t rem = 0;
      for (size_t i = a.size(); i-- > 0;) {
        uint64_t cur = (rem << 32) | a[i];
        q[i] = static_cast<uint32_t>(cur / d);
        rem = cur % d;
      }
      r.clear();
      if (rem != 0) r.push_back(static_cast<uint32_t>(rem));
      return;
    }
    // normalize so the top divisor limb has its high bit set
    int shift = 0;
    for (uint32_t top = b.back(); (top & 0x80000000u) == 0; top <<= 1) ++shift;
    std::vector<uint32_t> u = shl_bits(a, shift);
    std::vector<uint32_t> v = shl_bits(b, shift);
    u.push_back(0);  // u has m+n+1 limbs
    size_t n = v.size();
    size_t m = u.size() - n - 1;
    q.assign(m + 1, 0);
    uint64_t vtop = v[n - 1];
    uint64_t vnext = v[n - 2];
    for (size_t j = m + 1; j-- > 0;) {
      uint64_t num = (static_cast<uint64_t>(u[j + n]) << 32) | u[j + n - 1];
      uint64_t qhat = num / vtop;
      uint64_t rhat = num % vtop;
      if (qhat > 0xffffffffULL) {
        qhat = 0xffffffffULL;
        rhat = num - qhat * vtop;
      }
      while (rhat <= 0xffffffffULL && qhat * vnext > ((rhat << 32) | u[j + n - 2])) {
        --qhat;
        rhat += vtop;
      }
      // u[j .. j+n] -= qhat * v
      int64_t borrow = 0;
      uint64_t carry = 0;
      for (size_t i = 0; i < n; ++i) {
        uint64_t p = qhat * v[i] + carry;
        carry = p >> 32;
        int64_t t = static_cast<int64_t>(u[i + j]) - static_cast<int64_t>(p & 0xffffffffULL) - borrow;
        if (t < 0) {
          t += (1LL << 32);
          borrow = 1;
        } else {
          borrow = 0;
        }
        u[i + j] = static_cast<uint32_t>(t);
      }
      int64_t t = static_cast<int64_t>(u[j + n]) - static_cast<int64_t>(carry) - borrow;
      if (t < 0) {
        // qhat was one too large: add v back
        t += (1LL << 32);
        u[j + n] = static_cast<uint32_t>(t);
        --qhat;
        uint64_t c2 = 0;
        for (size_t i = 0; i < n; ++i) {
          uint64_t cur = static_cast<uint64_t>(u[i + j]) + v[i] + c2;
          u[i + j] = static_cast<uint32_t>(cur);
          c2 = cur >> 32;
        }
        u[j + n] = static_cast<uint32_t>(u[j + n] + c2);
      } else {
        u[j + n] = static_cast<uint32_t>(t);
      }
      q[j] = static_cast<uint32_t>(qhat);
    }
    u.resize(n);
    r = shr_bits(u, shift);
  }

  static std::vector<uint32_t> shl_bits(const std::vector<uint32_t>& a, int s) {
    if (s == 0) return a;
    std::vector<uint32_t> r(a.size() + 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
      r[i] |= a[i] << s;
      r[i + 1] = a[i] >> (32 - s);
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }

  static std::vector<uint32_t> shr_bits(const std::vector<uint32_t>& a, int s) {
    std::vector<uint32_t> r = a;
    if (s != 0) {
      for (size_t i = 0; i < r.size(); ++i) {
        r[i] >>= s;
        if (i + 1 < r.size()) r[i] |= r[i + 1] << (32 - s);
      }
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }
};

}  // namespace dforge
