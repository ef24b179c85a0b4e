#pragma once

// Certified kernel families L(n)(z) = e^{-lambda(n) z}. A kernel carries a
// decay certificate |L(n)(z)| <= n^{-c Re z}, a ratio certificate
// |L(n)(z)/L(n0)(z)| <= n^{-C(n0) Re z} for n > n0, and a monoid-morphism
// flag. Closed-form kinds (classical, power, linear) get exact certificates;
// table kernels are audited over a recorded horizon and the certificates are
// evidence on that horizon.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dforge/error.hpp"

namespace dforge {

struct LambdaSeq {
  std::function<double(uint64_t)> rule;
  double declared_c = 1.0;            // claim: lambda(n) >= declared_c * log n
  uint64_t monotone_checked_to = 0;   // audited horizon
  std::optional<double> min_spacing;  // declared lower bound on lambda(n+1)-lambda(n), if any
  std::string kind = "custom";
};

enum class KernelKind { classical, power, linear, table, custom };

struct MorphismReport {
  bool ok = false;
  std::optional<std::pair<uint64_t, uint64_t>> witness;  // first (a,b) with lambda(ab) != lambda(a)+lambda(b)
};

class Kernel {
 public:
  Kernel() = default;

  KernelKind kind() const noexcept { return state_->kind; }
  const std::string& kind_name() const noexcept { return state_->kind_name; }
  double decay_c() const noexcept { return state_->decay_c; }
  double decay_C(std::complex<double>) const noexcept { return 1.0; }  // exponential kernels
  double domain_k() const noexcept { return state_->domain_k; }
  bool is_monoid_morphism() const noexcept { return state_->morphism; }
  uint64_t audit_horizon() const noexcept { return state_->lambda.monotone_checked_to; }
  std::optional<double> min_spacing() const noexcept { return state_->lambda.min_spacing; }
  double beta() const noexcept { return state_->beta; }
  const LambdaSeq& lambda() const noexcept { return state_->lambda; }

  double lambda_at(uint64_t n) const { return state_->lambda.rule(n); }

  std::complex<double> eval(uint64_t n, std::complex<double> z) const {
    if (z.real() <= state_->domain_k)
      fail(Errc::domain_error, "Re z = " + std::to_string(z.real()) +
                                   " is outside the certified half-plane Re z > " +
                                   std::to_string(state_->domain_k));
    return std::exp(-state_->lambda.rule(n) * z);
  }

  // Ratio certificate C(n0): |L(n)/L(n0)| <= n^{-C(n0) Re z} for n >= n0+1.
  // Closed forms where available, otherwise the audited minimum of
  // (lambda(n)-lambda(n0))/log n over the horizon.
  double ratio_C(uint64_t n0) const {
    switch (state_->kind) {
      case KernelKind::classical:
        return n0 == 1 ? 1.0 : 1.0 - std::log(static_cast<double>(n0)) / std::log(static_cast<double>(n0 + 1));
      case KernelKind::power:
        return state_->beta *
               (n0 == 1 ? 1.0 : 1.0 - std::log(static_cast<double>(n0)) / std::log(static_cast<double>(n0 + 1)));
      default: {
        std::lock_guard<std::mutex> lock(state_->mu);
        auto it = state_->ratio_cache.find(n0);
        if (it != state_->ratio_cache.end()) return it->second;
        double l0 = state_->lambda.rule(n0);
        double best = HUGE_VAL;
        for (uint64_t n = n0 + 1; n <= state_->lambda.monotone_checked_to; ++n) {
          double r = (state_->lambda.rule(n) - l0) / std::log(static_cast<double>(n));
          if (r < best) best = r;
        }
        if (!(best > 0.0))
          fail(Errc::certificate_violation,
               "ratio certificate at n0=" + std::to_string(n0) + " is not positive");
        state_->ratio_cache.emplace(n0, best);
        return best;
      }
    }
  }

  friend Kernel classical_kernel();
  friend Kernel power_kernel(double beta);
  friend Kernel linear_kernel(uint64_t audit_horizon);
  friend Kernel general_kernel(LambdaSeq lambda, uint64_t audit_horizon);

 private:
  struct State {
    KernelKind kind = KernelKind::custom;
    std::string kind_name = "custom";
    double beta = 1.0;
    LambdaSeq lambda;
    double decay_c = 1.0;
    double domain_k = 0.0;
    bool morphism = false;
    mutable std::mutex mu;
    mutable std::map<uint64_t, double> ratio_cache;
  };
  std::shared_ptr<State> state_;
};

// classical Dirichlet kernel L(n)(z) = n^{-z}
inline Kernel classical_kernel() {
  Kernel k;
  k.state_ = std::make_shared<Kernel::State>();
  k.state_->kind = KernelKind::classical;
  k.state_->kind_name = "classical";
  k.state_->lambda = {[](uint64_t n) { return std::log(static_cast<double>(n)); }, 1.0, 1000000,
                      std::nullopt, "classical"};
  k.state_->decay_c = 1.0;
  k.state_->morphism = true;  // log(ab) = log a + log b
  return k;
}

// Audits a lambda sequence over the horizon: strictly increasing and
// lambda(n) >= c log n. The first failing index is reported.
inline Kernel general_kernel(LambdaSeq lambda, uint64_t audit_horizon) {
  if (audit_horizon < 2) fail(Errc::precondition, "audit horizon must be >= 2");
  double prev = lambda.rule(1);
  for (uint64_t n = 2; n <= audit_horizon; ++n) {
    double cur = lambda.rule(n);
    if (!(cur > prev))
      fail(Errc::certificate_violation,
           "lambda is not strictly increasing at n=" + std::to_string(n));
    if (cur < lambda.declared_c * std::log(static_cast<double>(n)))
      fail(Errc::certificate_violation, "lambda(n) >= c log n fails at n=" + std::to_string(n));
    prev = cur;
  }
  lambda.monotone_checked_to = audit_horizon;
  Kernel k;
  k.state_ = std::make_shared<Kernel::State>();
  k.state_->kind = KernelKind::custom;
  k.state_->kind_name = lambda.kind;
  k.state_->decay_c = lambda.declared_c;
  k.state_->lambda = std::move(lambda);
  // morphism check over audited pairs
  const auto& rule = k.state_->lambda.rule;
  k.state_->morphism = true;
  uint64_t pair_horizon = std::min<uint64_t>(audit_horizon, 4096);
  for (uint64_t a = 2; a * a <= pair_horizon && k.state_->morphism; ++a) {
    for (uint64_t b = a; a * b <= pair_horizon; ++b) {
      if (std::fabs(rule(a * b) - rule(a) - rule(b)) > 1e-12 * (1.0 + std::fabs(rule(a * b)))) {
        k.state_->morphism = false;
        break;
      }
    }
  }
  return k;
}

// L(n)(z) = n^{-beta z}
inline Kernel power_kernel(double beta) {
  if (!(beta > 0.0)) fail(Errc::precondition, "power kernel needs beta > 0");
  LambdaSeq lam{[beta](uint64_t n) { return beta * std::log(static_cast<double>(n)); }, beta,
                1000000, std::nullopt, "power"};
  Kernel k = general_kernel(std::move(lam), 10000);
  k.state_->kind = KernelKind::power;
  k.state_->kind_name = "power";
  k.state_->beta = beta;
  k.state_->morphism = true;
  return k;
}

// lambda(n) = n: geometric-type series with unit spacing
inline Kernel linear_kernel(uint64_t audit_horizon = 10000) {
  LambdaSeq lam{[](uint64_t n) { return static_cast<double>(n); }, 1.0, 0, 1.0, "linear"};
  Kernel k = general_kernel(std::move(lam), audit_horizon);
  k.state_->kind = KernelKind::linear;
  k.state_->kind_name = "linear";
  return k;
}

inline Kernel table_kernel(std::vector<double> values, double declared_c) {
  if (values.size() < 2) fail(Errc::precondition, "table kernel needs at least 2 values");
  double spacing = HUGE_VAL;
  for (size_t i = 1; i < values.size(); ++i) spacing = std::min(spacing, values[i] - values[i - 1]);
  auto shared = std::make_shared<std::vector<double>>(std::move(values));
  LambdaSeq lam{[shared](uint64_t n) {
                  if (n > shared->size())
                    fail(Errc::domain_error, "table kernel audited only up to n=" +
                                                 std::to_string(shared->size()));
                  return (*shared)[n - 1];
                },
                declared_c, 0, spacing > 0 ? std::optional<double>(spacing) : std::nullopt,
                "table"};
  return general_kernel(std::move(lam), shared->size());
}

inline std::complex<double> kernel_eval(const Kernel& k, uint64_t n, std::complex<double> z) {
  return k.eval(n, z);
}

// Checks lambda(ab) = lambda(a) + lambda(b) over all pairs with ab <= horizon
// (tolerance 1e-12 relative; closed-form kinds hold by the logarithm law).
inline MorphismReport is_monoid_morphism(const Kernel& k, uint64_t horizon) {
  if (horizon < 2) fail(Errc::precondition, "morphism horizon must be >= 2");
  if (k.kind() == KernelKind::classical || k.kind() == KernelKind::power)
    return {true, std::nullopt};
  for (uint64_t a = 2; a * a <= horizon; ++a) {
    for (uint64_t b = a; a * b <= horizon; ++b) {
      double lhs = k.lambda_at(a * b);
      double rhs = k.lambda_at(a) + k.lambda_at(b);
      if (std::fabs(lhs - rhs) > 1e-12 * (1.0 + std::fabs(lhs)))
        return {false, std::make_pair(a, b)};
    }
  }
  return {true, std::nullopt};
}

}  // namespace dforge
