#include <doctest.h>

#include <cstdint>

#include "dforge/bigint.hpp"
#include "test_util.hpp"

using dforge::BigInt;

TEST_CASE("small arithmetic matches int64") {
  dftest::Rng rng(1);
  for (int iter = 0; iter < 2000; ++iter) {
    long long a = rng.range(-1000000, 1000000);
    long long b = rng.range(-1000000, 1000000);
    CHECK(BigInt(a) + BigInt(b) == BigInt(a + b));
    CHECK(BigInt(a) - BigInt(b) == BigInt(a - b));
    CHECK(BigInt(a) * BigInt(b) == BigInt(a * b));
    if (b != 0) {
      BigInt q, r;
      BigInt::divmod(BigInt(a), BigInt(b), q, r);
      CHECK(q == BigInt(a / b));
      CHECK(r == BigInt(a % b));
    }
  }
}

TEST_CASE("divmod invariant on large random operands") {
  dftest::Rng rng(2);
  for (int iter = 0; iter < 500; ++iter) {
    BigInt a(1), b(1);
    int la = static_cast<int>(rng.range(1, 6));
    int lb = static_cast<int>(rng.range(1, 4));
    for (int i = 0; i < la; ++i) a = a * BigInt(static_cast<unsigned long long>(rng.next() | 1));
    for (int i = 0; i < lb; ++i) b = b * BigInt(static_cast<unsigned long long>(rng.next() | 1));
    if (rng.next() & 1) a = -a;
    if (rng.next() & 1) b = -b;
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    CHECK(q * b + r == a);
    // |r| < |b|, sign of r follows the dividend
    BigInt abs_r = r.sign() < 0 ? -r : r;
    BigInt abs_b = b.sign() < 0 ? -b : b;
    CHECK(compare(abs_r, abs_b) < 0);
    if (!r.is_zero()) CHECK(r.sign() == a.sign());
  }
}

TEST_CASE("string round trips") {
  const char* cases[] = {"0", "1", "-1", "4294967295", "4294967296", "-123456789012345678901234567890",
                         "340282366920938463463374607431768211457"};
  for (const char* s : cases) {
    CHECK(BigInt::from_string(s).to_string() == s);
  }
  CHECK(BigInt::from_string("+7").to_string() == "7");
  CHECK_THROWS_AS(BigInt::from_string("12x"), dforge::Error);
  CHECK_THROWS_AS(BigInt::from_string(""), dforge::Error);
}

TEST_CASE("pow and gcd") {
  CHECK(BigInt::pow(BigInt(2), 64).to_string() == "18446744073709551616");
  CHECK(BigInt::pow(BigInt(10), 30).to_string() == std::string("1") + std::string(30, '0'));
  CHECK(BigInt::pow(BigInt(7), 0) == BigInt(1));
  CHECK(BigInt::gcd(BigInt(360), BigInt(84)) == BigInt(12));
  CHECK(BigInt::gcd(BigInt(0), BigInt(-5)) == BigInt(5));
  CHECK(BigInt::gcd(BigInt::pow(BigInt(2), 100), BigInt::pow(BigInt(6), 60)) ==
        BigInt::pow(BigInt(2), 60));
}

TEST_CASE("to_double accuracy") {
  CHECK(BigInt(1000000007).to_double() == doctest::Approx(1000000007.0));
  BigInt big = BigInt::pow(BigInt(3), 100);
  double expect = std::pow(3.0, 100.0);
  CHECK(big.to_double() == doctest::Approx(expect).epsilon(1e-12));
  CHECK((-big).to_double() == doctest::Approx(-expect).epsilon(1e-12));
  // beyond double range saturates
  CHECK(std::isinf(BigInt::pow(BigInt(2), 9000).to_double()));
}

TEST_CASE("bit length and int64 bounds") {
  CHECK(BigInt(0).bit_length() == 0);
  CHECK(BigInt(1).bit_length() == 1);
  CHECK(BigInt(255).bit_length() == 8);
  CHECK(BigInt(256).bit_length() == 9);
  CHECK(BigInt::from_string("9223372036854775807").fits_int64());
  CHECK(BigInt::from_string("-9223372036854775808").fits_int64());
  CHECK_FALSE(BigInt::from_string("9223372036854775808").fits_int64());
  CHECK(BigInt::from_string("-9223372036854775808").to_int64() == INT64_MIN);
}
