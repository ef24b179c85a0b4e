#include <doctest.h>

#include "dforge/builtins.hpp"
#include "test_util.hpp"

using namespace dforge;

TEST_CASE("builtin registry") {
  CHECK(lookup_builtin("one").value(17) == PolyCoeff(1));
  CHECK(lookup_builtin("mu").value(30) == PolyCoeff(-1));
  CHECK(lookup_builtin("d").value(60) == PolyCoeff(12));
  CHECK(lookup_builtin("N").value(9) == PolyCoeff(9));
  CHECK(lookup_builtin("chi_5_1").value(2) == PolyCoeff(GaussRational::i()));
  CHECK_THROWS_AS(lookup_builtin("nope"), Error);
  CHECK_THROWS_AS(lookup_builtin("chi_7"), Error);
}

TEST_CASE("liouville and von mangoldt") {
  ArithFunc lam = make_liouville();
  // lambda(n) = (-1)^Omega(n)
  CHECK(lam.value(1) == PolyCoeff(1));
  CHECK(lam.value(2) == PolyCoeff(-1));
  CHECK(lam.value(4) == PolyCoeff(1));
  CHECK(lam.value(12) == PolyCoeff(-1));  // 2^2*3
  ArithFunc vm = make_von_mangoldt();
  CHECK(vm.value(1) == PolyCoeff());
  CHECK(vm.value(6) == PolyCoeff());
  LogMonomial m2, m3;
  m2.factors = {{2, 1}};
  m3.factors = {{3, 1}};
  CHECK(vm.value(8) == PolyCoeff(LogPoly::monomial(m2, GaussRational(1))));
  CHECK(vm.value(9) == PolyCoeff(LogPoly::monomial(m3, GaussRational(1))));
  // check against the classical identity sum_{d|n} Lambda(d) = log n
  for (uint64_t n : {12u, 30u, 64u}) {
    LogPoly acc;
    for (uint64_t d = 1; d <= n; ++d) {
      if (n % d == 0) acc += vm.value(d).constant_part();
    }
    CHECK(acc == LogPoly::log_of(n));
  }
}

TEST_CASE("dirichlet characters mod 5") {
  // (Z/5)* is cyclic of order 4 generated by 2; chi_5_1 sends 2 to i
  ArithFunc chi = make_dirichlet_character(5, 1);
  CHECK(chi.value(1) == PolyCoeff(1));
  CHECK(chi.value(2) == PolyCoeff(GaussRational::i()));
  CHECK(chi.value(4) == PolyCoeff(-1));
  CHECK(chi.value(3) == PolyCoeff(GaussRational(Rational(0), Rational(-1))));
  CHECK(chi.value(5) == PolyCoeff());
  CHECK(chi.value(7) == PolyCoeff(GaussRational::i()));  // 7 = 2 mod 5
  CHECK(is_multiplicative(chi, 200).ok);
  // total multiplicativity: chi(ab) = chi(a) chi(b) without the gcd condition
  for (uint64_t a = 1; a <= 20; ++a) {
    for (uint64_t b = 1; b <= 20; ++b) {
      CHECK(chi.value(a * b) == chi.value(a) * chi.value(b));
    }
  }
}

TEST_CASE("character group bookkeeping") {
  CHECK(dirichlet_character_count(5) == 4);
  CHECK(dirichlet_character_count(8) == 4);
  CHECK(dirichlet_character_count(7) == 6);
  CHECK(dirichlet_character_count(1) == 1);
  // mod 7 only the principal and the quadratic character have order dividing 4
  auto reps = representable_characters(7);
  CHECK(reps.size() == 2);
  // a sixth-order character is rejected with guidance
  bool threw = false;
  try {
    make_dirichlet_character(7, 1);
  } catch (const Error& e) {
    threw = true;
    CHECK(e.code() == Errc::unsupported_character);
  }
  CHECK(threw);
  // the surviving mod-7 characters work and are multiplicative
  for (uint64_t t : reps) {
    ArithFunc chi = make_dirichlet_character(7, t);
    CHECK(is_multiplicative(chi, 100).ok);
  }
  CHECK_THROWS_AS(make_dirichlet_character(101, 0), Error);
}

TEST_CASE("quadratic character matches legendre symbol mod 7") {
  // the quadratic residues mod 7 are {1, 2, 4}
  ArithFunc chi;
  for (uint64_t t : representable_characters(7)) {
    ArithFunc cand = make_dirichlet_character(7, t);
    if (cand.value(3) == PolyCoeff(-1)) chi = cand;
  }
  REQUIRE(chi.valid());
  for (uint64_t n : {1u, 2u, 4u}) CHECK(chi.value(n) == PolyCoeff(1));
  for (uint64_t n : {3u, 5u, 6u}) CHECK(chi.value(n) == PolyCoeff(-1));
  CHECK(chi.value(7) == PolyCoeff());
}

TEST_CASE("character equivalence demo") {
  // distinct characters mod 5 differ at almost every prime
  ArithFunc c1 = make_dirichlet_character(5, 1);
  ArithFunc c2 = make_dirichlet_character(5, 2);
  auto v = equivalent(c1, c2, 50, 3);
  CHECK(v.exceptional_primes.size() > 5);
}

TEST_CASE("table functions") {
  ArithFunc t = make_table_func("t", {GaussRational(1), GaussRational(Rational(1, 2))}, 0.0);
  CHECK(t.value(1) == PolyCoeff(1));
  CHECK(t.value(2) == PolyCoeff(Rational(1, 2)));
  CHECK(t.value(3) == PolyCoeff());
}
