#include <doctest.h>

#include "dforge/builtins.hpp"
#include "dforge/independence.hpp"
#include "test_util.hpp"

using namespace dforge;

namespace {

// Independent rank oracle: naive Gaussian elimination over fractions of
// log-symbol polynomials, no fraction-free tricks, first-nonzero pivoting.
// Usable for small matrices only (denominators grow fast).
struct Frac {
  LogPoly num;
  LogPoly den{GaussRational(1)};
  bool is_zero() const { return num.is_zero(); }
};

Frac sub(const Frac& a, const Frac& b) {
  return {a.num * b.den - b.num * a.den, a.den * b.den};
}
Frac mul(const Frac& a, const Frac& b) { return {a.num * b.num, a.den * b.den}; }
Frac div(const Frac& a, const Frac& b) { return {a.num * b.den, a.den * b.num}; }

int rank_fraction_oracle(const CoeffMatrix& M) {
  std::vector<std::vector<Frac>> a(M.rows.size());
  for (size_t i = 0; i < M.rows.size(); ++i) {
    for (const auto& e : M.rows[i]) a[i].push_back({e, LogPoly(GaussRational(1))});
  }
  size_t rows = a.size();
  size_t cols = rows == 0 ? 0 : a[0].size();
  size_t r = 0;
  for (size_t col = 0; col < cols && r < rows; ++col) {
    size_t pivot = rows;
    for (size_t i = r; i < rows; ++i) {
      if (!a[i][col].is_zero()) {
        pivot = i;
        break;
      }
    }
    if (pivot == rows) continue;
    std::swap(a[r], a[pivot]);
    for (size_t i = r + 1; i < rows; ++i) {
      if (a[i][col].is_zero()) continue;
      Frac factor = div(a[i][col], a[r][col]);
      for (size_t j = col; j < cols; ++j) a[i][j] = sub(a[i][j], mul(factor, a[r][j]));
    }
    ++r;
  }
  return static_cast<int>(r);
}

CoeffMatrix matrix_of(const std::vector<ArithFunc>& funcs, uint32_t m, uint64_t N) {
  return coefficient_matrix(funcs, m, N);
}

// checks exact rank, the fraction oracle (small matrices), and the float rank agree
void check_rank_all_routes(const CoeffMatrix& M, int expect) {
  IndependenceReport rep = rank_exact(M);
  CHECK(rep.rank == expect);
  CHECK(rank_numeric(M) == expect);
  if (M.rows.size() <= 4 && M.horizon_N <= 16) CHECK(rank_fraction_oracle(M) == expect);
}

}  // namespace

TEST_CASE("coefficient matrix layout") {
  ArithFunc e = make_e(), one = make_one();
  CoeffMatrix m1 = matrix_of({e}, 0, 4);
  REQUIRE(m1.rows.size() == 1);
  CHECK(m1.rows[0][0] == LogPoly(1));
  for (int j = 1; j < 4; ++j) CHECK(m1.rows[0][j].is_zero());

  CoeffMatrix m2 = matrix_of({one}, 1, 3);
  REQUIRE(m2.rows.size() == 2);
  CHECK(m2.labels[0].derivative_order == 0);
  CHECK(m2.labels[1].derivative_order == 1);
  for (int j = 0; j < 3; ++j) CHECK(m2.rows[0][j] == LogPoly(1));
  CHECK(m2.rows[1][0].is_zero());
  CHECK(m2.rows[1][1] == -LogPoly::log_of(2));
  CHECK(m2.rows[1][2] == -LogPoly::log_of(3));
  // log-degree of order-j rows is exactly j (or the entry vanishes)
  CoeffMatrix m3 = matrix_of({one}, 2, 8);
  for (size_t i = 0; i < m3.rows.size(); ++i) {
    for (const auto& entry : m3.rows[i]) {
      if (!entry.is_zero()) CHECK(entry.total_degree() == m3.labels[i].derivative_order);
    }
  }

  CoeffMatrix m4 = matrix_of({make_one(), make_mobius()}, 0, 4);
  CHECK(m4.rows[0] == std::vector<LogPoly>{LogPoly(1), LogPoly(1), LogPoly(1), LogPoly(1)});
  CHECK(m4.rows[1] == std::vector<LogPoly>{LogPoly(1), LogPoly(-1), LogPoly(-1), LogPoly(0)});
}

TEST_CASE("coefficient matrix rejects non-constant coefficients") {
  ArithFunc polyf("polyf", 0.0, [](uint64_t) { return PolyCoeff::variable(); });
  CHECK_THROWS_AS(matrix_of({polyf}, 0, 4), Error);
  CHECK_THROWS_AS(matrix_of({make_von_mangoldt()}, 0, 4), Error);
  CHECK_THROWS_AS(matrix_of({make_one()}, 1, 1), Error);  // N < r(m+1)
}

TEST_CASE("rank of basic matrices") {
  ArithFunc e = make_e(), one = make_one();
  check_rank_all_routes(matrix_of({e}, 0, 4), 1);
  check_rank_all_routes(matrix_of({one, scale(PolyCoeff(2), one)}, 0, 8), 1);
  check_rank_all_routes(matrix_of({e, one}, 0, 4), 2);
  IndependenceReport rep = rank_exact(matrix_of({one, scale(PolyCoeff(2), one)}, 0, 8), 2);
  CHECK_FALSE(rep.certified);
  CHECK(std::string(rep.verdict()) == "not_certified");
}

TEST_CASE("rank with derivative rows against the fraction oracle") {
  ArithFunc one = make_one(), mu = make_mobius();
  CoeffMatrix M = matrix_of({one, mu}, 0, 16);
  // append the first derivative row of one by building a 3-function matrix:
  // {one, mu} at order 0 plus {one} at orders 0..1 shares rows, so instead use
  // a direct mixed construction
  CoeffMatrix mixed;
  mixed.horizon_N = 16;
  CoeffMatrix m01 = matrix_of({one}, 1, 16);
  mixed.rows = {M.rows[0], M.rows[1], m01.rows[1]};
  mixed.labels = {M.labels[0], M.labels[1], m01.labels[1]};
  check_rank_all_routes(mixed, 3);
}

TEST_CASE("numeric rank basics") {
  std::vector<std::vector<std::complex<double>>> id3 = {
      {{1, 0}, {0, 0}, {0, 0}}, {{0, 0}, {1, 0}, {0, 0}}, {{0, 0}, {0, 0}, {1, 0}}};
  CHECK(rank_numeric(id3) == 3);
  // rank-1 outer product
  std::vector<std::vector<std::complex<double>>> outer(4, std::vector<std::complex<double>>(4));
  double u[4] = {1, 2, -1, 3}, v[4] = {2, 0.5, 1, -1};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) outer[i][j] = u[i] * v[j];
  }
  CHECK(rank_numeric(outer) == 1);
  // dependence through a complex phase: i * (1, i) = (i, -1)
  std::vector<std::vector<std::complex<double>>> ph = {{{1, 0}, {0, 1}}, {{0, 1}, {-1, 0}}};
  CHECK(rank_numeric(ph) == 1);
  std::vector<std::vector<std::complex<double>>> ph2 = {{{1, 0}, {0, 1}}, {{0, 1}, {1, 0}}};
  CHECK(rank_numeric(ph2) == 2);
}

TEST_CASE("rank invariance under row scaling and permutation") {
  dftest::Rng rng(31);
  ArithFunc one = make_one(), mu = make_mobius(), liou = make_liouville();
  CoeffMatrix M = matrix_of({one, mu, liou}, 1, 24);
  IndependenceReport base = rank_exact(M);
  CoeffMatrix scrambled = M;
  // random nonzero gaussian-rational row scalings
  for (auto& row : scrambled.rows) {
    GaussRational s(Rational(rng.range(1, 9)), Rational(rng.range(-4, 4)));
    for (auto& entry : row) entry *= LogPoly(s);
  }
  std::swap(scrambled.rows[0], scrambled.rows[3]);
  std::swap(scrambled.rows[1], scrambled.rows[5]);
  CHECK(rank_exact(scrambled).rank == base.rank);
}

TEST_CASE("rank is monotone in the horizon") {
  ArithFunc one = make_one(), mu = make_mobius();
  int prev = 0;
  for (uint64_t N : {4ull, 8ull, 16ull, 32ull, 64ull}) {
    int r = rank_exact(matrix_of({one, mu}, 1, N)).rank;
    CHECK(r >= prev);
    prev = r;
  }
  CHECK(prev == 4);
}

TEST_CASE("pairwise derivative families reach full rank") {
  // any two of {one, mu, liouville} with derivative orders up to 2
  std::vector<ArithFunc> pool = {make_one(), make_mobius(), make_liouville()};
  for (size_t i = 0; i < pool.size(); ++i) {
    for (size_t j = i + 1; j < pool.size(); ++j) {
      for (uint32_t m = 0; m <= 2; ++m) {
        IndependenceReport rep = certify_linear_independence({pool[i], pool[j]}, m, 64);
        CHECK(rep.certified);
        CHECK(rep.rank == static_cast<int>(2 * (m + 1)));
        CHECK(rank_numeric(matrix_of({pool[i], pool[j]}, m, 64)) == rep.rank);
      }
    }
  }
}

TEST_CASE("block structure: distinct log degrees stack rank") {
  ArithFunc one = make_one();
  for (uint32_t m = 0; m <= 3; ++m) {
    IndependenceReport rep = certify_linear_independence({one}, m, 16);
    CHECK(rep.rank == static_cast<int>(m + 1));
  }
}

TEST_CASE("monomial family") {
  ArithFunc one = make_one(), e = make_e();
  std::vector<ArithFunc> fam = monomial_family({one}, 3);
  REQUIRE(fam.size() == 3);
  // one, d = one^2, d3 = one^3
  CHECK(fam[0].value(6) == PolyCoeff(1));
  CHECK(fam[1].value(6) == PolyCoeff(4));
  CHECK(fam[2].value(4) == PolyCoeff(6));
  for (uint64_t n = 1; n <= 30; ++n) {
    CHECK(fam[1].value(n) == PolyCoeff(Rational(static_cast<long long>(dftest::divisor_count_brute(n)))));
    CHECK(fam[2].value(n) == PolyCoeff(Rational(static_cast<long long>(dftest::triple_divisor_brute(n)))));
  }
  std::vector<ArithFunc> fam_e = monomial_family({e}, 5);
  CHECK(fam_e.size() == 5);
  for (const auto& f : fam_e) CHECK(f.value(1) == PolyCoeff(1));
  // two functions, total degree 2: a, b, a^2, a*b, b^2
  std::vector<ArithFunc> fam2 = monomial_family({make_one(), make_mobius()}, 2);
  REQUIRE(fam2.size() == 5);
  CHECK(fam2[0].name() == "one");
  CHECK(fam2[1].name() == "mu");
  CHECK(fam2[2].name() == "one^2");
  CHECK(fam2[3].name() == "one*mu");
  CHECK(fam2[4].name() == "mu^2");
}

TEST_CASE("linear independence certificates") {
  IndependenceReport r1 = certify_linear_independence({make_one(), make_mobius()}, 1, 64);
  CHECK(r1.certified);
  CHECK(r1.rank == 4);
  IndependenceReport r2 = certify_linear_independence({make_one(), scale(PolyCoeff(2), make_one())}, 0, 8);
  CHECK_FALSE(r2.certified);
  CHECK(r2.rank == 1);
  IndependenceReport r3 = certify_linear_independence({make_e(), make_one()}, 0, 4);
  CHECK(r3.certified);
  CHECK(r3.rank == 2);
}

TEST_CASE("algebraic independence certificates") {
  IndependenceReport r1 = certify_algebraic_independence({make_one()}, 3, 64);
  CHECK(r1.certified);
  CHECK(r1.rank == 3);
  IndependenceReport r2 = certify_algebraic_independence({make_e()}, 2, 8);
  CHECK_FALSE(r2.certified);
  CHECK(r2.rank == 1);
  IndependenceReport r3 = certify_algebraic_independence({make_mobius(), make_one()}, 1, 16);
  CHECK(r3.certified);
  CHECK(r3.rank == 2);
  CHECK_THROWS_AS(certify_algebraic_independence({make_one()}, 3, 2), Error);
}

TEST_CASE("planted-rank matrices: exact and numeric ranks agree") {
  dftest::Rng rng(41);
  auto random_entry = [&rng]() {
    LogPoly p(GaussRational(Rational(rng.range(-4, 4)), Rational(rng.range(-2, 2))));
    if (rng.next() % 3 == 0) {
      LogMonomial m;
      m.factors = {{static_cast<uint32_t>(rng.next() % 2 ? 2 : 3), 1}};
      p += LogPoly::monomial(m, GaussRational(Rational(rng.range(-3, 3))));
    }
    return p;
  };
  for (int iter = 0; iter < 10; ++iter) {
    const size_t cols = 8;
    std::vector<std::vector<LogPoly>> gens(3, std::vector<LogPoly>(cols));
    for (auto& row : gens) {
      for (auto& e : row) e = random_entry();
    }
    CoeffMatrix M;
    M.horizon_N = cols;
    M.rows = gens;
    // two extra rows inside the span of the generators
    for (int extra = 0; extra < 2; ++extra) {
      std::vector<LogPoly> combo(cols);
      for (const auto& g : gens) {
        LogPoly w = random_entry();
        for (size_t j = 0; j < cols; ++j) combo[j] += w * g[j];
      }
      M.rows.push_back(std::move(combo));
    }
    M.labels.assign(M.rows.size(), {"gen", 0});
    IndependenceReport rep = rank_exact(M);
    CHECK(rep.rank <= 3);
    CHECK(rank_numeric(M) == rep.rank);
    CHECK(rank_fraction_oracle(M) == rep.rank);
  }
}

TEST_CASE("character rows are independent from real rows") {
  ArithFunc chi = make_dirichlet_character(5, 1);  // genuinely complex values
  IndependenceReport rep = certify_linear_independence({make_one(), chi}, 0, 16);
  CHECK(rep.certified);
  CHECK(rank_numeric(matrix_of({make_one(), chi}, 0, 16)) == 2);
}
