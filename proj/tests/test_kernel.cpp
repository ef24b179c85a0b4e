#include <doctest.h>

#include <cmath>

#include "dforge/kernel.hpp"
#include "test_util.hpp"

using namespace dforge;

TEST_CASE("classical kernel") {
  Kernel k = classical_kernel();
  for (double x : {0.5, 1.0, 3.0, 17.0}) {
    CHECK(std::abs(k.eval(1, {x, 0.5}) - std::complex<double>(1.0, 0.0)) < 1e-15);
  }
  CHECK(k.eval(2, {2.0, 0.0}).real() == doctest::Approx(0.25));
  CHECK(k.eval(10, {1.0, 0.0}).real() == doctest::Approx(0.1));
  CHECK(k.eval(4, {0.5, 0.0}).real() == doctest::Approx(0.5));
  CHECK(k.ratio_C(1) == doctest::Approx(1.0));
  CHECK(k.ratio_C(2) == doctest::Approx(1.0 - std::log(2.0) / std::log(3.0)));
  CHECK(k.is_monoid_morphism());
  CHECK_THROWS_AS(k.eval(3, {0.0, 1.0}), Error);  // outside Re z > 0
}

TEST_CASE("ratio certificate is sound for the classical kernel") {
  Kernel k = classical_kernel();
  for (uint64_t n0 : {1ull, 2ull, 5ull, 8ull}) {
    double C = k.ratio_C(n0);
    for (uint64_t n = n0 + 1; n <= 1000; n += 7) {
      for (double x : {0.5, 2.0, 8.0}) {
        double lhs = std::abs(k.eval(n, {x, 0.0})) / std::abs(k.eval(n0, {x, 0.0}));
        double rhs = std::pow(static_cast<double>(n), -C * x);
        CHECK(lhs <= rhs * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("general kernel accepts and rejects lambda sequences") {
  // lambda(n) = log n reproduces the classical kernel
  LambdaSeq logseq{[](uint64_t n) { return std::log(static_cast<double>(n)); }, 1.0, 0,
                   std::nullopt, "log"};
  Kernel g = general_kernel(logseq, 1000000);
  Kernel c = classical_kernel();
  for (uint64_t n : {1ull, 2ull, 97ull, 4096ull}) {
    for (double x : {0.7, 2.0, 11.0}) {
      auto a = g.eval(n, {x, 0.3});
      auto b = c.eval(n, {x, 0.3});
      CHECK(std::abs(a - b) <= 1e-14 * (std::abs(b) + 1e-300));
    }
  }
  CHECK(g.is_monoid_morphism());

  // lambda(n) = n is fine with c = 1
  LambdaSeq lin{[](uint64_t n) { return static_cast<double>(n); }, 1.0, 0, std::nullopt, "lin"};
  CHECK_NOTHROW(general_kernel(lin, 10000));

  // lambda(n) = sqrt(log n) eventually violates lambda >= c log n
  LambdaSeq slow{[](uint64_t n) { return std::sqrt(std::log(static_cast<double>(n) + 1e-12)); },
                 0.5, 0, std::nullopt, "slow"};
  CHECK_THROWS_AS(general_kernel(slow, 10000), Error);
}

TEST_CASE("linear kernel") {
  Kernel k = linear_kernel();
  CHECK(k.eval(3, {1.0, 0.0}).real() == doctest::Approx(std::exp(-3.0)));
  CHECK_FALSE(k.is_monoid_morphism());
  auto rep = is_monoid_morphism(k, 100);
  CHECK_FALSE(rep.ok);
  CHECK(rep.witness == std::make_pair<uint64_t, uint64_t>(2, 3));
  CHECK(k.min_spacing().has_value());
  CHECK(*k.min_spacing() == doctest::Approx(1.0));
}

TEST_CASE("morphism checks on closed forms") {
  CHECK(is_monoid_morphism(classical_kernel(), 1000).ok);
  CHECK(is_monoid_morphism(power_kernel(2.0), 1000).ok);
  // power kernel is n^{-2z}
  Kernel p2 = power_kernel(2.0);
  CHECK(p2.eval(3, {1.0, 0.0}).real() == doctest::Approx(1.0 / 9.0));
  CHECK(p2.decay_c() == doctest::Approx(2.0));
}

TEST_CASE("decay certificate sampled soundness") {
  for (const Kernel& k : {classical_kernel(), power_kernel(2.0), linear_kernel()}) {
    double c = k.decay_c();
    for (double x = 0.25; x <= 10.0; x += 0.75) {
      for (uint64_t n = 1; n <= 1000; n += 13) {
        double val = std::abs(k.eval(n, {x, 0.0}));
        CHECK(val <= std::pow(static_cast<double>(n), -c * x) * (1.0 + 1e-12));
        // non-vanishing wherever e^{-lambda x} is representable in double
        if (k.lambda_at(n) * x < 700.0) CHECK(val > 0.0);
      }
    }
  }
}

TEST_CASE("table kernel") {
  Kernel k = table_kernel({0.0, 0.8, 1.7, 2.9, 4.0}, 0.5);
  CHECK(k.eval(4, {1.0, 0.0}).real() == doctest::Approx(std::exp(-2.9)));
  CHECK(k.min_spacing().has_value());
  CHECK(*k.min_spacing() == doctest::Approx(0.8));
  CHECK_THROWS_AS(k.eval(6, {1.0, 0.0}), Error);  // beyond the audited table
  CHECK_THROWS_AS(table_kernel({0.0, 0.1, 0.05}, 0.1), Error);  // not increasing
}
