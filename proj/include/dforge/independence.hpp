#pragma once

// Linear and algebraic independence certification via exact ranks of
// coefficient matrices. Entries live in the polynomial ring over the formal
// symbols log p with Gaussian rational coefficients, so derivative rows
// (-1)^j alpha(n) log^j n are represented exactly and the rank over the
// field Q(i)(log 2, log 3, ...) is computed by fraction-free elimination.
// A full-rank finite horizon certifies independence; a rank deficit at a
// horizon is evidence only and the verdict says so.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "dforge/arith.hpp"
#include "dforge/error.hpp"
#include "dforge/logpoly.hpp"

namespace dforge {

struct RowLabel {
  std::string func_name;
  uint32_t derivative_order = 0;
};

struct CoeffMatrix {
  std::vector<RowLabel> labels;
  uint64_t horizon_N = 0;
  std::vector<std::vector<LogPoly>> rows;  // rows[r][n-1]
};

struct IndependenceReport {
  int rank = 0;
  int expected = 0;
  uint64_t horizon_N = 0;
  bool certified = false;  // rank == expected
  std::vector<uint64_t> pivot_columns;
  std::vector<RowLabel> row_labels;

  const char* verdict() const noexcept {
    return certified ? "certified_independent" : "not_certified";
  }
};

// Rows (-1)^i alpha_j(n) log^i n for 0 <= i <= m, over columns n = 1..N.
// Functions must take constant Gaussian-rational values; z-polynomial or
// log-carrying coefficients are rejected (the certificate field would change).
inline CoeffMatrix coefficient_matrix(const std::vector<ArithFunc>& funcs, uint32_t m, uint64_t N) {
  if (funcs.empty()) fail(Errc::precondition, "no functions given");
  if (N < funcs.size() * (m + 1))
    fail(Errc::precondition, "horizon N must be at least r(m+1)");
  CoeffMatrix M;
  M.horizon_N = N;
  // log n expansions, shared across rows
  std::vector<LogPoly> logs(N);
  for (uint64_t n = 1; n <= N; ++n) logs[n - 1] = LogPoly::log_of(n);
  for (const ArithFunc& f : funcs) {
    std::vector<GaussRational> vals(N);
    for (uint64_t n = 1; n <= N; ++n) {
      PolyCoeff v = f.value(n);
      if (!v.is_scalar())
        fail(Errc::unsupported_coefficients,
             "'" + f.name() + "' has non-constant coefficients at n=" + std::to_string(n) + ": " +
                 v.to_string());
      vals[n - 1] = v.scalar();
    }
    for (uint32_t i = 0; i <= m; ++i) {
      std::vector<LogPoly> row(N);
      for (uint64_t n = 1; n <= N; ++n) {
        if (vals[n - 1].is_zero()) continue;
        LogPoly entry = logs[n - 1].pow(i) * LogPoly(vals[n - 1]);
        if (i % 2 == 1) entry = -entry;
        row[n - 1] = std::move(entry);
      }
      M.labels.push_back({f.name(), i});
      M.rows.push_back(std::move(row));
    }
  }
  return M;
}

// Exact rank by fraction-free (Bareiss) elimination over the log-symbol
// polynomial ring; divisions by the previous pivot are exact. Pivot choice:
// columns left to right, within a column the nonzero candidate of minimal
// total log-degree (lowest row index on ties), for reproducible witnesses.
inline IndependenceReport rank_exact(const CoeffMatrix& M, int expected = -1) {
  IndependenceReport rep;
  rep.horizon_N = M.horizon_N;
  rep.row_labels = M.labels;
  std::vector<std::vector<LogPoly>> a = M.rows;
  const size_t rows = a.size();
  const size_t cols = rows == 0 ? 0 : a[0].size();
  size_t r = 0;
  LogPoly prev(GaussRational(1));
  for (size_t col = 0; col < cols && r < rows; ++col) {
    size_t pivot = rows;
    uint32_t best_deg = 0;
    for (size_t i = r; i < rows; ++i) {
      if (a[i][col].is_zero()) continue;
      uint32_t deg = a[i][col].total_degree();
      if (pivot == rows || deg < best_deg) {
        pivot = i;
        best_deg = deg;
      }
    }
    if (pivot == rows) continue;
    std::swap(a[r], a[pivot]);
    rep.pivot_columns.push_back(static_cast<uint64_t>(col + 1));
    for (size_t i = r + 1; i < rows; ++i) {
      for (size_t j = col + 1; j < cols; ++j) {
        a[i][j] = LogPoly::exact_div(a[i][j] * a[r][col] - a[i][col] * a[r][j], prev);
      }
      a[i][col] = LogPoly();
    }
    prev = a[r][col];
    ++r;
  }
  rep.rank = static_cast<int>(r);
  rep.expected = expected >= 0 ? expected : static_cast<int>(rows);
  rep.certified = rep.rank == rep.expected;
  return rep;
}

// Float image of the matrix with log p evaluated numerically.
inline std::vector<std::vector<std::complex<double>>> to_numeric(const CoeffMatrix& M) {
  std::vector<std::vector<std::complex<double>>> out(M.rows.size());
  for (size_t i = 0; i < M.rows.size(); ++i) {
    out[i].resize(M.rows[i].size());
    for (size_t j = 0; j < M.rows[i].size(); ++j) out[i][j] = M.rows[i][j].eval();
  }
  return out;
}

// Numerical rank: singular values via one-sided Jacobi on the rows, count of
// those above eps * max(rows, cols) * sigma_max.
inline int rank_numeric(std::vector<std::vector<std::complex<double>>> a) {
  const size_t rows = a.size();
  if (rows == 0) return 0;
  const size_t cols = a[0].size();
  if (cols == 0) return 0;
  auto dot = [&](size_t p, size_t q) {  // <row p, conj(row q)>
    std::complex<double> s(0.0, 0.0);
    for (size_t j = 0; j < cols; ++j) s += a[p][j] * std::conj(a[q][j]);
    return s;
  };
  for (int sweep = 0; sweep < 64; ++sweep) {
    bool converged = true;
    for (size_t p = 0; p + 1 < rows; ++p) {
      for (size_t q = p + 1; q < rows; ++q) {
        double app = dot(p, p).real();
        double aqq = dot(q, q).real();
        std::complex<double> apq = dot(p, q);
        double mag = std::abs(apq);
        if (mag <= 1e-30 || mag * mag <= 1e-60 * app * aqq) continue;
        converged = false;
        std::complex<double> phase = apq / mag;
        double tau = (aqq - app) / (2.0 * mag);
        double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        double cs = 1.0 / std::sqrt(1.0 + t * t);
        double sn = t * cs;
        for (size_t j = 0; j < cols; ++j) {
          std::complex<double> u = a[p][j];
          std::complex<double> v = a[q][j];
          a[p][j] = cs * u - sn * phase * v;
          a[q][j] = sn * std::conj(phase) * u + cs * v;
        }
      }
    }
    if (converged) break;
  }
  std::vector<double> sigma(rows);
  double smax = 0.0;
  for (size_t i = 0; i < rows; ++i) {
    sigma[i] = std::sqrt(dot(i, i).real());
    smax = std::max(smax, sigma[i]);
  }
  double tol = std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(rows, cols)) * smax;
  int rank = 0;
  for (double s : sigma) {
    if (s > tol) ++rank;
  }
  return rank;
}

inline int rank_numeric(const CoeffMatrix& M) { return rank_numeric(to_numeric(M)); }

// All Dirichlet-convolution monomials alpha_1^{i_1} ... alpha_r^{i_r} with
// 1 <= i_1+...+i_r <= D, in graded lexicographic order.
inline std::vector<ArithFunc> monomial_family(const std::vector<ArithFunc>& funcs, uint32_t D) {
  if (D < 1) fail(Errc::precondition, "degree bound D must be >= 1");
  const size_t r = funcs.size();
  std::vector<ArithFunc> out;
  std::vector<uint32_t> exps(r, 0);
  // enumerate exponent tuples of total degree d, lexicographically descending
  std::function<void(size_t, uint32_t)> rec = [&](size_t idx, uint32_t remaining) {
    if (idx + 1 == r) {
      exps[idx] = remaining;
      ArithFunc acc;
      std::string name;
      for (size_t i = 0; i < r; ++i) {
        for (uint32_t t = 0; t < exps[i]; ++t) acc = acc.valid() ? convolve(acc, funcs[i]) : funcs[i];
        if (exps[i] > 0) {
          if (!name.empty()) name += "*";
          name += funcs[i].name();
          if (exps[i] > 1) name += "^" + std::to_string(exps[i]);
        }
      }
      acc.set_name(std::move(name));
      out.push_back(acc);
      return;
    }
    for (uint32_t e = remaining + 1; e-- > 0;) {
      exps[idx] = e;
      rec(idx + 1, remaining - e);
    }
  };
  for (uint32_t d = 1; d <= D; ++d) rec(0, d);
  return out;
}

// Full rank of the derivative coefficient matrix certifies that the series
// F^{(i)}(alpha_j) admit no nonzero linear relation over the quotient field;
// a deficit at this horizon is inconclusive.
inline IndependenceReport certify_linear_independence(const std::vector<ArithFunc>& funcs,
                                                      uint32_t m, uint64_t N) {
  CoeffMatrix M = coefficient_matrix(funcs, m, N);
  return rank_exact(M, static_cast<int>(funcs.size() * (m + 1)));
}

// Degree-bounded algebraic certificate: full rank of the monomial family's
// coefficient matrix rules out polynomial relations of total degree <= D.
inline IndependenceReport certify_algebraic_independence(const std::vector<ArithFunc>& funcs,
                                                         uint32_t D, uint64_t N) {
  std::vector<ArithFunc> family = monomial_family(funcs, D);
  if (N < family.size())
    fail(Errc::precondition, "horizon N must be at least the monomial family size " +
                                 std::to_string(family.size()));
  CoeffMatrix M = coefficient_matrix(family, 0, N);
  return rank_exact(M, static_cast<int>(family.size()));
}

}  // namespace dforge
