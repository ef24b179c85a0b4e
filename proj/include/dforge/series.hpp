#pragma once

// Certified evaluation of F_L(alpha)(z) = sum alpha(n)(z) L(n)(z).
//
// Every SeriesValue carries a tail bound that is valid under the declared
// certificates: the power-law bound C * N^{1-s}/(s-1) with s = c Re z - k
// (integral comparison), and for kernels with a declared minimum lambda
// spacing a geometric bound. A floating-point summation slack (pairwise
// reduction error model) is folded into the reported bound so that the
// bound is honest in double precision, not only in exact arithmetic.
//
// Summation uses fixed-size blocks with a deterministic pairwise reduction,
// so results are bit-identical for any thread count.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <future>
#include <initializer_list>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dforge/arith.hpp"
#include "dforge/error.hpp"
#include "dforge/kernel.hpp"

namespace dforge {

struct SeriesValue {
  std::complex<double> value;
  double tail_bound = 0.0;
  uint64_t truncation_N = 0;
  double abscissa_kprime = 0.0;
};

// Convergence abscissa: absolute convergence holds on Re z > max{(k+1)/c, k}.
inline double abscissa(double k, double c) {
  if (!(c > 0.0)) fail(Errc::precondition, "decay constant c must be positive");
  return std::max((k + 1.0) / c, k);
}

// Closed-form tail majorant C * D * N^{1-s}/(s-1) with s = c x - k, valid by
// the integral comparison sum_{n>N} n^{-s} <= N^{1-s}/(s-1).
inline double tail_bound(double C_growth, double k, double decay_C_at_z, double c, double x,
                         uint64_t N) {
  double s = c * x - k;
  if (!(s > 1.0))
    fail(Errc::divergent, "s = c*Re z - k = " + std::to_string(s) +
                              " <= 1: outside the certified half-plane");
  return C_growth * decay_C_at_z * std::pow(static_cast<double>(N), 1.0 - s) / (s - 1.0);
}

struct EvalOptions {
  int threads = 1;
  uint64_t budget_cap = 100000000;  // evaluate_to_tolerance refuses larger truncations
  uint64_t tolerance_N0 = 16;       // adaptive truncations are N0 * 2^j
};

namespace detail {

// geometric tail for kernels with a declared minimum spacing of lambda:
// sum_{n>N} C n^k e^{-lambda(n) x} with lambda(n) >= lambda(N+1) + (n-N-1) delta
inline double spacing_tail(double C, double k, double x, uint64_t N, double delta,
                           double lambda_next) {
  if (!(x > 0.0) || !(delta > 0.0)) return HUGE_VAL;
  double q = std::exp(-delta * x);
  if (!(q < 1.0)) return HUGE_VAL;
  int K = k <= 0.0 ? 0 : static_cast<int>(std::ceil(k));
  double fact = 1.0;
  for (int i = 2; i <= K; ++i) fact *= i;
  double head = C * std::pow(static_cast<double>(N) + 1.0, k) * std::exp(-lambda_next * x);
  return head * fact / std::pow(1.0 - q, K + 1);
}

struct BlockSum {
  std::complex<double> sum{0.0, 0.0};
  double abs_sum = 0.0;
  double max_ratio = 0.0;  // max |alpha(n)(z)| / n^k within the block
};

}  // namespace detail

// Truncated evaluation with a certified tail. Requires an audited growth
// certificate on alpha; the constant used for the tail is the audited one,
// enlarged by any larger ratio observed while summing at this z.
inline SeriesValue evaluate(const ArithFunc& alpha, const Kernel& L, std::complex<double> z,
                            uint64_t N, const EvalOptions& opts = {}) {
  if (N < 1) fail(Errc::precondition, "truncation N must be >= 1");
  const double k = alpha.growth_k();
  const double c = L.decay_c();
  const double kprime = abscissa(k, c);
  const double x = z.real();
  const bool power_ok = x > kprime;
  const bool spacing_ok = L.min_spacing().has_value() && x > L.domain_k() && x > 0.0;
  if (!power_ok && !spacing_ok)
    fail(Errc::divergent, "Re z = " + std::to_string(x) +
                              " is not certified for this series (abscissa " +
                              std::to_string(kprime) + ")");
  const GrowthAudit& audit = alpha.growth_audit();  // throws CertificateMissing

  constexpr uint64_t kBlock = 8192;
  const uint64_t nblocks = (N + kBlock - 1) / kBlock;
  std::vector<detail::BlockSum> blocks(nblocks);
  alpha.prefetch(N);

  auto run_block = [&](uint64_t bi) {
    uint64_t lo = bi * kBlock + 1;
    uint64_t hi = std::min<uint64_t>(N, (bi + 1) * kBlock);
    detail::BlockSum bs;
    for (uint64_t n = lo; n <= hi; ++n) {
      std::complex<double> av = alpha.value_at(n, z);
      std::complex<double> lv = L.eval(n, z);
      std::complex<double> term = av * lv;
      bs.sum += term;
      bs.abs_sum += std::abs(term);
      double ratio = std::abs(av) * std::pow(static_cast<double>(n), -k);
      if (ratio > bs.max_ratio) bs.max_ratio = ratio;
    }
    return bs;
  };

  int threads = std::max(1, opts.threads);
  if (threads == 1 || nblocks == 1) {
    for (uint64_t bi = 0; bi < nblocks; ++bi) blocks[bi] = run_block(bi);
  } else {
    std::vector<std::future<void>> futs;
    std::atomic<uint64_t> next{0};
    for (int t = 0; t < threads; ++t) {
      futs.push_back(std::async(std::launch::async, [&] {
        for (uint64_t bi = next.fetch_add(1); bi < nblocks; bi = next.fetch_add(1))
          blocks[bi] = run_block(bi);
      }));
    }
    for (auto& f : futs) f.get();
  }

  // fixed pairwise tree over block sums: independent of thread count
  std::vector<std::complex<double>> sums(nblocks);
  double abs_sum = 0.0, max_ratio = 0.0;
  for (uint64_t i = 0; i < nblocks; ++i) {
    sums[i] = blocks[i].sum;
    abs_sum += blocks[i].abs_sum;
    max_ratio = std::max(max_ratio, blocks[i].max_ratio);
  }
  while (sums.size() > 1) {
    std::vector<std::complex<double>> next_level((sums.size() + 1) / 2);
    for (size_t i = 0; i < next_level.size(); ++i) {
      next_level[i] = 2 * i + 1 < sums.size() ? sums[2 * i] + sums[2 * i + 1] : sums[2 * i];
    }
    sums.swap(next_level);
  }

  const double C_used = std::max(audit.constant, max_ratio);
  double tail = HUGE_VAL;
  if (power_ok) tail = std::min(tail, tail_bound(C_used, k, L.decay_C(z), c, x, N));
  if (spacing_ok) {
    try {
      tail = std::min(tail, detail::spacing_tail(C_used, k, x, N, *L.min_spacing(),
                                                 L.lambda_at(N + 1)));
    } catch (const Error&) {
      // lambda not defined past N (table kernels): fall back to the power-law bound
    }
  }
  if (!(tail < HUGE_VAL)) fail(Errc::divergent, "no finite certified tail at this point");

  // floating-point slack: pairwise-summation error model plus per-term cost
  double log2N = std::ceil(std::log2(static_cast<double>(N) + 1.0));
  double fp_slack = (log2N + 32.0) * std::numeric_limits<double>::epsilon() * abs_sum * 1.05;

  SeriesValue out;
  out.value = sums.empty() ? std::complex<double>(0.0, 0.0) : sums[0];
  out.tail_bound = tail + fp_slack;
  out.truncation_N = N;
  out.abscissa_kprime = kprime;
  return out;
}

// Smallest truncation of the form N0 * 2^j whose certified bound meets tol.
inline SeriesValue evaluate_to_tolerance(const ArithFunc& alpha, const Kernel& L,
                                         std::complex<double> z, double tol,
                                         const EvalOptions& opts = {}) {
  if (!(tol > 0.0)) fail(Errc::precondition, "tolerance must be positive");
  const double k = alpha.growth_k();
  const double c = L.decay_c();
  const double x = z.real();
  const GrowthAudit& audit = alpha.growth_audit();
  const bool power_ok = x > abscissa(k, c);
  const bool spacing_ok = L.min_spacing().has_value() && x > L.domain_k() && x > 0.0;
  if (!power_ok && !spacing_ok)
    fail(Errc::divergent,
         "Re z = " + std::to_string(x) + " is not certified for this series");

  auto formula_tail = [&](uint64_t N) {
    double t = HUGE_VAL;
    if (power_ok) t = std::min(t, tail_bound(audit.constant, k, L.decay_C(z), c, x, N));
    if (spacing_ok) {
      try {
        t = std::min(t, detail::spacing_tail(audit.constant, k, x, N, *L.min_spacing(),
                                             L.lambda_at(N + 1)));
      } catch (const Error&) {
      }
    }
    return t;
  };

  uint64_t N = std::max<uint64_t>(1, opts.tolerance_N0);
  while (formula_tail(N) > tol) {
    if (N > opts.budget_cap / 2)
      fail(Errc::budget_exceeded, "tolerance " + std::to_string(tol) +
                                      " needs truncation beyond the cap " +
                                      std::to_string(opts.budget_cap));
    N *= 2;
  }
  for (;;) {
    SeriesValue v = evaluate(alpha, L, z, N, opts);
    if (v.tail_bound <= tol) return v;
    if (N > opts.budget_cap / 2)
      fail(Errc::budget_exceeded, "tolerance " + std::to_string(tol) +
                                      " needs truncation beyond the cap " +
                                      std::to_string(opts.budget_cap));
    N *= 2;
  }
}

// ---------------------------------------------------------------------------
// homomorphism residual
// ---------------------------------------------------------------------------

struct ResidualResult {
  double residual = 0.0;
  double bound = 0.0;
  SeriesValue f_product;  // F(alpha * beta)
  SeriesValue f_lhs;
  SeriesValue f_rhs;
};

// |F(alpha.beta)(z) - F(alpha)(z) F(beta)(z)| with all three series evaluated
// to tolerance tol. Functions missing a growth audit are audited here (the
// convolution is created here, so it cannot arrive pre-audited).
inline ResidualResult homomorphism_residual(const ArithFunc& alpha, const ArithFunc& beta,
                                            const Kernel& L, std::complex<double> z, double tol,
                                            const EvalOptions& opts = {},
                                            uint64_t audit_horizon = 10000) {
  if (!L.is_monoid_morphism())
    fail(Errc::not_morphism, "kernel '" + L.kind_name() + "' is not a monoid morphism");
  ArithFunc prod = convolve(alpha, beta);
  for (const ArithFunc* f : std::initializer_list<const ArithFunc*>{&alpha, &beta, &prod}) {
    if (!f->growth_audited()) audit_growth(*f, audit_horizon, {z});
  }
  ResidualResult r;
  r.f_product = evaluate_to_tolerance(prod, L, z, tol, opts);
  r.f_lhs = evaluate_to_tolerance(alpha, L, z, tol, opts);
  r.f_rhs = evaluate_to_tolerance(beta, L, z, tol, opts);
  r.residual = std::abs(r.f_product.value - r.f_lhs.value * r.f_rhs.value);
  r.bound = tol * (2.0 + std::abs(r.f_lhs.value) + std::abs(r.f_rhs.value));
  return r;
}

// ---------------------------------------------------------------------------
// growth-family probe
// ---------------------------------------------------------------------------

enum class DecayVerdict { in_I, in_B_not_I, outside_B, inconclusive };

inline const char* decay_verdict_name(DecayVerdict v) {
  switch (v) {
    case DecayVerdict::in_I: return "in_I";
    case DecayVerdict::in_B_not_I: return "in_B_not_I";
    case DecayVerdict::outside_B: return "outside_B";
    case DecayVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct DecayProbeReport {
  double slope_estimate = 0.0;                     // least-squares slope of log|f(x)| vs x
  std::vector<std::pair<double, double>> samples;  // finite (x, log|f(x)|) pairs
  DecayVerdict verdict = DecayVerdict::inconclusive;
  bool overflow_seen = false;
  double max_fit_residual = 0.0;
};

inline std::vector<double> default_probe_grid() {
  std::vector<double> g;
  for (int j = 0; j <= 12; ++j) g.push_back(25.0 * std::pow(2.0, j));
  return g;
}

// Heuristic classification of the growth of f along the real ray. Membership
// in the decay families is a limit statement; this samples it. Overflowing
// values count as evidence of exponential growth, underflow-to-zero values
// as evidence of exponential decay.
inline DecayProbeReport decay_probe(const std::function<std::complex<double>(double)>& f,
                                    std::vector<double> grid = {}) {
  if (grid.empty()) grid = default_probe_grid();
  if (grid.size() < 8) fail(Errc::precondition, "probe grid needs at least 8 points");
  if (!(grid.back() >= 2.0 * grid.front()))
    fail(Errc::precondition, "probe grid must span at least a factor of 2");
  DecayProbeReport rep;
  bool underflow_seen = false;
  for (double x : grid) {
    std::complex<double> v = f(x);
    double m = std::abs(v);
    if (std::isinf(m) || std::isnan(m)) {
      rep.overflow_seen = true;
      continue;
    }
    if (m == 0.0) {
      underflow_seen = true;
      continue;
    }
    rep.samples.emplace_back(x, std::log(m));
  }
  constexpr double kSlopeTol = 1e-3;
  size_t m = rep.samples.size();
  if (m >= 2) {
    size_t fit_count = (m + 1) / 2;  // top half of the finite samples
    size_t start = m - fit_count;
    double sx = 0, sy = 0;
    for (size_t i = start; i < m; ++i) {
      sx += rep.samples[i].first;
      sy += rep.samples[i].second;
    }
    double mx = sx / fit_count, my = sy / fit_count;
    double sxx = 0, sxy = 0;
    for (size_t i = start; i < m; ++i) {
      double dx = rep.samples[i].first - mx;
      sxx += dx * dx;
      sxy += dx * (rep.samples[i].second - my);
    }
    rep.slope_estimate = sxy / sxx;
    for (size_t i = start; i < m; ++i) {
      double pred = my + rep.slope_estimate * (rep.samples[i].first - mx);
      rep.max_fit_residual = std::max(rep.max_fit_residual, std::fabs(rep.samples[i].second - pred));
    }
    if (rep.overflow_seen) {
      rep.verdict = DecayVerdict::outside_B;
    } else if (rep.max_fit_residual > 3.0) {
      rep.verdict = DecayVerdict::inconclusive;
    } else if (rep.slope_estimate < -kSlopeTol) {
      rep.verdict = DecayVerdict::in_I;
    } else if (rep.slope_estimate > kSlopeTol) {
      rep.verdict = DecayVerdict::outside_B;
    } else {
      rep.verdict = DecayVerdict::in_B_not_I;
    }
  } else {
    // fewer than two finite samples: classify on the overflow/underflow evidence
    if (rep.overflow_seen && !underflow_seen) {
      rep.verdict = DecayVerdict::outside_B;
    } else if (underflow_seen && !rep.overflow_seen) {
      rep.verdict = DecayVerdict::in_I;
      rep.slope_estimate = -HUGE_VAL;
    } else {
      rep.verdict = DecayVerdict::inconclusive;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// coefficient peeling
// ---------------------------------------------------------------------------

struct GrowthCert {
  double C = 1.0;
  double k = 0.0;
};

struct PeelOptions {
  bool integer_mode = true;
  double tolerance = 0.5;  // majorant must fall below this before a value is accepted
};

struct PeelRow {
  uint64_t n = 0;
  std::complex<double> recovered;
  double majorant = 0.0;
  std::optional<std::pair<long long, long long>> rounded;  // (re, im) Gaussian integer
  double x_used = 0.0;
};

struct PeelReport {
  std::vector<PeelRow> rows;
};

namespace detail {

// a-priori truncation majorant C * sum_{n>n0} n^{k - ratio_C(n0) x}
inline double peel_truncation_majorant(const Kernel& L, const GrowthCert& cert, uint64_t n0,
                                       double x) {
  double r = L.ratio_C(n0);
  double s = r * x - cert.k;
  if (!(s > 1.0)) return HUGE_VAL;
  double sum = 0.0;
  uint64_t M = n0 + 64;
  for (uint64_t n = n0 + 1; n <= M; ++n) sum += std::pow(static_cast<double>(n), -s);
  sum += std::pow(static_cast<double>(M), 1.0 - s) / (s - 1.0);
  return cert.C * sum;
}

inline long long round_nearest(const Rational& r) {
  BigInt q, rem;
  BigInt::divmod(r.num(), r.den(), q, rem);
  BigInt twice = rem + rem;
  if (twice.sign() >= 0) {
    if (compare(twice, r.den()) >= 0) q += BigInt(1);
  } else {
    if (compare(-twice, r.den()) >= 0) q -= BigInt(1);
  }
  return q.to_int64();
}

}  // namespace detail

// Exact peel for the classical kernel at integer abscissas. The oracle
// returns the exact value of G(x) = sum alpha(n) n^{-x}; oracle_tail(x), when
// given, bounds |G_true(x) - G_oracle(x)| (for truncated forward sums) and is
// amplified into the majorant. All recovery arithmetic is exact, so the
// reported majorant is the whole error.
inline PeelReport peel(const std::function<GaussRational(uint64_t)>& oracle,
                       const Kernel& L, uint64_t n_max, std::vector<uint64_t> schedule,
                       const GrowthCert& cert, const PeelOptions& opts = {},
                       const std::function<double(uint64_t)>& oracle_tail = nullptr) {
  if (L.kind() != KernelKind::classical)
    fail(Errc::precondition, "exact peel requires the classical kernel");
  if (schedule.empty() || n_max < 1) fail(Errc::precondition, "empty peel schedule");
  std::sort(schedule.begin(), schedule.end());
  const uint64_t x = schedule.back();

  const GaussRational g = oracle(x);
  GaussRational partial;  // sum_{m<n0} a(m) m^{-x}, exact
  PeelReport rep;
  std::vector<double> prior_majorants;
  for (uint64_t n0 = 1; n0 <= n_max; ++n0) {
    double maj = detail::peel_truncation_majorant(L, cert, n0, static_cast<double>(x));
    if (oracle_tail) {
      double ot = oracle_tail(x);
      if (ot > 0.0)
        maj += std::exp(std::log(ot) + static_cast<double>(x) * std::log(static_cast<double>(n0)));
    }
    if (!opts.integer_mode) {
      // unrounded earlier estimates propagate their errors, amplified by
      // |L(m)/L(n0)| = (n0/m)^x; rounding in integer mode removes them
      for (uint64_t m = 1; m < n0; ++m) {
        double amp = static_cast<double>(x) *
                     (std::log(static_cast<double>(n0)) - std::log(static_cast<double>(m)));
        maj += prior_majorants[m - 1] * (amp > 700.0 ? HUGE_VAL : std::exp(amp));
      }
    }
    if (!(maj < opts.tolerance))
      fail(Errc::recovery_uncertain,
           "majorant " + std::to_string(maj) + " at n0=" + std::to_string(n0) +
               " does not reach tolerance " + std::to_string(opts.tolerance) +
               " on the given schedule");
    prior_majorants.push_back(maj);
    // a_hat = (G(x) - partial) * n0^x, exact
    Rational n0x(BigInt::pow(BigInt(static_cast<long long>(n0)), x));
    GaussRational ahat = (g - partial) * GaussRational(n0x);
    PeelRow row;
    row.n = n0;
    row.recovered = ahat.to_complex();
    row.majorant = maj;
    row.x_used = static_cast<double>(x);
    GaussRational accepted = ahat;
    if (opts.integer_mode) {
      long long rre = detail::round_nearest(ahat.re());
      long long rim = detail::round_nearest(ahat.im());
      row.rounded = std::make_pair(rre, rim);
      accepted = GaussRational(Rational(rre), Rational(rim));
    }
    rep.rows.push_back(std::move(row));
    partial += accepted * GaussRational(n0x.inverse());
  }
  return rep;
}

// Float peel for any certified kernel. For each coefficient the scheduled
// abscissa minimizing the total majorant (truncation plus a floating-point
// conditioning term, which grows with x) is used; when no scheduled point
// brings the majorant below tolerance the recovery is refused. Double
// precision cannot carry deep coefficients here; the exact overload exists
// for that.
inline PeelReport peel(const std::function<std::complex<double>(double)>& oracle, const Kernel& L,
                       uint64_t n_max, std::vector<double> schedule, const GrowthCert& cert,
                       const PeelOptions& opts = {}) {
  if (schedule.empty() || n_max < 1) fail(Errc::precondition, "empty peel schedule");
  std::sort(schedule.begin(), schedule.end());
  std::vector<std::complex<double>> g_cache(schedule.size());
  for (size_t i = 0; i < schedule.size(); ++i) g_cache[i] = oracle(schedule[i]);

  PeelReport rep;
  std::vector<std::complex<double>> accepted;  // recovered coefficients so far
  std::vector<double> prior_majorants;
  const double eps = std::numeric_limits<double>::epsilon();
  for (uint64_t n0 = 1; n0 <= n_max; ++n0) {
    double best_total = HUGE_VAL;
    size_t best_i = 0;
    for (size_t i = 0; i < schedule.size(); ++i) {
      double xx = schedule[i];
      double trunc = detail::peel_truncation_majorant(L, cert, n0, xx);
      double scale = std::abs(g_cache[i]) + 1.0;
      double cond = 8.0 * eps * scale * std::exp(L.lambda_at(n0) * xx);
      double total = trunc + cond;
      if (!opts.integer_mode) {
        // propagate errors of the unrounded earlier estimates
        for (uint64_t m = 1; m < n0; ++m) {
          double amp = (L.lambda_at(n0) - L.lambda_at(m)) * xx;
          total += prior_majorants[m - 1] * (amp > 700.0 ? HUGE_VAL : std::exp(amp));
        }
      }
      if (total < best_total) {
        best_total = total;
        best_i = i;
      }
    }
    if (!(best_total < opts.tolerance))
      fail(Errc::recovery_uncertain,
           "majorant " + std::to_string(best_total) + " at n0=" + std::to_string(n0) +
               " does not reach tolerance " + std::to_string(opts.tolerance) +
               " on the given schedule");
    double xx = schedule[best_i];
    std::complex<double> residual = g_cache[best_i];
    for (uint64_t m = 1; m < n0; ++m) residual -= accepted[m - 1] * L.eval(m, {xx, 0.0});
    std::complex<double> ahat = residual / L.eval(n0, {xx, 0.0});
    PeelRow row;
    row.n = n0;
    row.recovered = ahat;
    row.majorant = best_total;
    row.x_used = xx;
    std::complex<double> acc = ahat;
    if (opts.integer_mode) {
      long long rre = std::llround(ahat.real());
      long long rim = std::llround(ahat.imag());
      row.rounded = std::make_pair(rre, rim);
      acc = {static_cast<double>(rre), static_cast<double>(rim)};
    }
    accepted.push_back(acc);
    prior_majorants.push_back(best_total);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

inline std::vector<uint64_t> default_peel_schedule() {
  // geometric, ratio 1.5, rounded to integers so the exact path applies
  return {20, 30, 45, 68, 101, 152, 228, 342};
}

}  // namespace dforge
