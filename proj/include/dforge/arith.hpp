#pragma once

// Arithmetic functions n -> PolyCoeff with lazy memoized values, Dirichlet
// ring operations, multiplicative builders, the arithmetic derivative, and
// growth / equivalence certification.
//
// Values are immutable once computed. The memo is a chunked store filled
// strictly in order 1..n under a writer lock; readers below the published
// watermark need no lock, so concurrent evaluation is safe. Rules must be
// pure and may only reference the same function at smaller indices.

#include <atomic>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dforge/error.hpp"
#include "dforge/factor.hpp"
#include "dforge/poly.hpp"

namespace dforge {

namespace detail {

// Append-only store with stable addresses: a fixed directory of lazily
// allocated blocks. push_back never moves existing values, so readers may
// hold references while the writer extends.
class MemoStore {
 public:
  static constexpr size_t kBlockSize = 512;

  explicit MemoStore(size_t capacity)
      : capacity_(capacity), blocks_((capacity + kBlockSize - 1) / kBlockSize) {}

  size_t capacity() const noexcept { return capacity_; }
  size_t size() const noexcept { return size_.load(std::memory_order_acquire); }

  const PolyCoeff& operator[](size_t i) const noexcept {
    return (*blocks_[i / kBlockSize])[i % kBlockSize];
  }

  // caller must hold the writer lock
  void push_back(PolyCoeff v) {
    size_t i = size_.load(std::memory_order_relaxed);
    auto& block = blocks_[i / kBlockSize];
    if (!block) {
      block = std::make_unique<std::vector<PolyCoeff>>();
      // a block receives at most kBlockSize values; reserving up front keeps
      // element addresses stable for lock-free readers
      block->reserve(kBlockSize);
    }
    block->push_back(std::move(v));
    size_.store(i + 1, std::memory_order_release);
  }

 private:
  size_t capacity_;
  std::vector<std::unique_ptr<std::vector<PolyCoeff>>> blocks_;
  std::atomic<size_t> size_{0};
};

}  // namespace detail

using PrimePowerRule = std::function<GaussRational(uint64_t p, uint32_t a)>;

struct GrowthAudit {
  double constant = 0.0;   // max over the horizon and z-grid of |alpha(n)(z)| / n^k
  uint64_t horizon = 0;
  std::vector<std::complex<double>> z_grid;
};

class ArithFunc {
 public:
  static constexpr size_t kDefaultMemoCap = 1u << 16;

  ArithFunc() = default;

  ArithFunc(std::string name, double growth_k, std::function<PolyCoeff(uint64_t)> rule,
            size_t memo_cap = kDefaultMemoCap)
      : state_(std::make_shared<State>()) {
    state_->name = std::move(name);
    state_->growth_k = growth_k;
    state_->rule = std::move(rule);
    state_->memo = std::make_unique<detail::MemoStore>(memo_cap);
  }

  bool valid() const noexcept { return static_cast<bool>(state_); }
  const std::string& name() const noexcept { return state_->name; }
  void set_name(std::string name) { state_->name = std::move(name); }
  double growth_k() const noexcept { return state_->growth_k; }

  // Memoized access; n must be >= 1. Values up to the memo capacity are
  // cached; the returned reference stays valid for the function's lifetime.
  const PolyCoeff& at(uint64_t n) const {
    if (n == 0) fail(Errc::precondition, "arithmetic functions start at n=1");
    if (n > state_->memo->capacity()) fail(Errc::internal, "at() beyond memo capacity; use value()");
    size_t ready = state_->memo->size();
    if (n > ready) {
      std::lock_guard<std::mutex> lock(state_->write_mu);
      while (state_->memo->size() < n) {
        uint64_t k = state_->memo->size() + 1;
        state_->memo->push_back(state_->rule(k));
      }
    }
    return (*state_->memo)[n - 1];
  }

  // Any n; values beyond the memo capacity are recomputed per call.
  PolyCoeff value(uint64_t n) const {
    if (n == 0) fail(Errc::precondition, "arithmetic functions start at n=1");
    if (n <= state_->memo->capacity()) return at(n);
    return state_->rule(n);
  }

  std::complex<double> value_at(uint64_t n, std::complex<double> z) const {
    if (n <= state_->memo->capacity()) return at(n).eval(z);
    if (state_->fast_eval) return state_->fast_eval(n, z);
    return state_->rule(n).eval(z);
  }

  size_t memo_capacity() const noexcept { return state_->memo->capacity(); }

  // Fills the memo up to min(n, capacity) so later reads take no lock.
  void prefetch(uint64_t n) const {
    uint64_t cap = std::min<uint64_t>(n, state_->memo->capacity());
    if (cap >= 1) at(cap);
  }

  // multiplicative fast path: value at p^a without factorizing p^a
  const PrimePowerRule& prime_power_rule() const noexcept { return state_->pp_rule; }
  void set_prime_power_rule(PrimePowerRule r) { state_->pp_rule = std::move(r); }
  void set_fast_eval(std::function<std::complex<double>(uint64_t, std::complex<double>)> f) {
    state_->fast_eval = std::move(f);
  }

  bool growth_audited() const noexcept { return state_->audit.has_value(); }
  const GrowthAudit& growth_audit() const {
    if (!state_->audit)
      fail(Errc::certificate_missing, "function '" + state_->name + "' has no audited growth constant");
    return *state_->audit;
  }
  void store_growth_audit(GrowthAudit a) const { state_->audit = std::move(a); }

 private:
  struct State {
    std::string name;
    double growth_k = 0.0;
    std::function<PolyCoeff(uint64_t)> rule;
    PrimePowerRule pp_rule;
    std::function<std::complex<double>(uint64_t, std::complex<double>)> fast_eval;
    std::unique_ptr<detail::MemoStore> memo;
    std::mutex write_mu;
    std::optional<GrowthAudit> audit;
  };

  explicit ArithFunc(std::shared_ptr<State> s) : state_(std::move(s)) {}

  std::shared_ptr<State> state_;

  friend ArithFunc dirichlet_inverse(const ArithFunc&);
};

// ---------------------------------------------------------------------------
// accessors and ring operations
// ---------------------------------------------------------------------------

inline PolyCoeff eval_coeff(const ArithFunc& a, uint64_t n) { return a.value(n); }

inline ArithFunc add(const ArithFunc& a, const ArithFunc& b) {
  return ArithFunc("(" + a.name() + "+" + b.name() + ")", std::max(a.growth_k(), b.growth_k()),
                   [a, b](uint64_t n) { return a.value(n) + b.value(n); });
}

inline ArithFunc scale(const PolyCoeff& f, const ArithFunc& a) {
  return ArithFunc("(" + f.to_string() + ")*" + a.name(), a.growth_k(),
                   [f, a](uint64_t n) { return f * a.value(n); });
}

// Dirichlet convolution. The declared growth exponent of the product is
// max(k_a, k_b); the divisor-count factor d(n) grows slower than any power,
// so the declared exponent is only horizon-evidence and the audited constant
// absorbs the slack.
inline ArithFunc convolve(const ArithFunc& a, const ArithFunc& b) {
  return ArithFunc("(" + a.name() + "*" + b.name() + ")", std::max(a.growth_k(), b.growth_k()),
                   [a, b](uint64_t n) {
                     PolyCoeff acc;
                     for (uint64_t d = 1; d * d <= n; ++d) {
                       if (n % d != 0) continue;
                       acc += a.value(d) * b.value(n / d);
                       if (d != n / d) acc += a.value(n / d) * b.value(d);
                     }
                     return acc;
                   });
}

// Inverse under Dirichlet convolution via the standard recurrence. Requires
// alpha(1) to be a nonzero Gaussian rational constant; polynomial or
// log-carrying units are rejected so that all inverse values stay exact.
inline ArithFunc dirichlet_inverse(const ArithFunc& a) {
  const PolyCoeff a1 = a.value(1);
  if (a1.is_zero()) fail(Errc::not_invertible, "alpha(1) = 0");
  if (!a1.is_scalar())
    fail(Errc::not_invertible, "alpha(1) must be a nonzero constant, got " + a1.to_string());
  const GaussRational inv1 = a1.scalar().inverse();
  ArithFunc out("inv(" + a.name() + ")", a.growth_k(), nullptr);
  std::weak_ptr<ArithFunc::State> self = out.state_;
  out.state_->rule = [a, self, inv1](uint64_t n) -> PolyCoeff {
    if (n == 1) return PolyCoeff(inv1);
    ArithFunc me(self.lock());
    // inv(n) = -alpha(1)^{-1} * sum_{d|n, d<n} alpha(n/d) inv(d)
    PolyCoeff acc;
    for (uint64_t d = 1; d * d <= n; ++d) {
      if (n % d != 0) continue;
      if (d < n) acc += a.value(n / d) * me.value(d);
      uint64_t e = n / d;
      if (e != d && e < n) acc += a.value(n / e) * me.value(e);
    }
    return PolyCoeff(inv1) * (-acc);
  };
  return out;
}

// Arithmetic j-derivative: alpha^{(j)}(n) = (-1)^j alpha(n) log^j n, with the
// log factor kept as a formal polynomial in log-prime symbols. The declared
// growth exponent gains a fixed 0.25 headroom since log^j n grows slower than
// any positive power of n.
inline ArithFunc derivative(const ArithFunc& a, uint32_t j) {
  if (j == 0) return a;
  double bump = 0.25;
  return ArithFunc("D" + std::to_string(j) + "(" + a.name() + ")", a.growth_k() + bump,
                   [a, j](uint64_t n) {
                     LogPoly logn = LogPoly::log_of(n);
                     if (logn.is_zero()) return PolyCoeff();
                     LogPoly f = logn.pow(j);
                     if (j % 2 == 1) f = -f;
                     return PolyCoeff(f) * a.value(n);
                   });
}

// The unique multiplicative function with the given prime-power values.
inline ArithFunc from_prime_powers(std::string name, PrimePowerRule rule, double growth_k) {
  ArithFunc out(std::move(name), growth_k, [rule](uint64_t n) -> PolyCoeff {
    if (n == 1) return PolyCoeff(1);
    GaussRational v(1);
    for (const auto& [p, e] : factorize(n).factors) {
      v *= rule(p, e);
      if (v.is_zero()) break;
    }
    return PolyCoeff(v);
  });
  out.set_prime_power_rule(std::move(rule));
  return out;
}

// ---------------------------------------------------------------------------
// structure checks
// ---------------------------------------------------------------------------

struct MultiplicativityReport {
  bool ok = false;
  // first violation: (1,1) flags alpha(1) != 1, otherwise a coprime pair
  std::optional<std::pair<uint64_t, uint64_t>> witness;
};

inline MultiplicativityReport is_multiplicative(const ArithFunc& a, uint64_t horizon) {
  if (horizon < 2) fail(Errc::precondition, "multiplicativity horizon must be >= 2");
  if (a.value(1) != PolyCoeff(1)) return {false, std::make_pair<uint64_t, uint64_t>(1, 1)};
  for (uint64_t n = 2; n * 2 <= horizon; ++n) {
    for (uint64_t m = n + 1; n * m <= horizon; ++m) {
      if (std::gcd(n, m) != 1) continue;
      if (a.value(n * m) != a.value(n) * a.value(m)) return {false, std::make_pair(n, m)};
    }
  }
  return {true, std::nullopt};
}

struct EquivalenceVerdict {
  std::vector<uint64_t> exceptional_primes;  // primes <= horizon_p with a differing prime power
  uint64_t horizon_p = 0;
  uint32_t horizon_j = 0;
};

// Compares two multiplicative functions on prime powers p^j, p <= horizon_p,
// j <= horizon_j. A finite exceptional set within the horizon is evidence of
// equivalence; the check is semi-decidable by nature.
inline EquivalenceVerdict equivalent(const ArithFunc& a, const ArithFunc& b, uint64_t horizon_p,
                                     uint32_t horizon_j) {
  constexpr uint64_t kPrecheckHorizon = 30;
  for (const ArithFunc* f : {&a, &b}) {
    MultiplicativityReport r = is_multiplicative(*f, kPrecheckHorizon);
    if (!r.ok)
      fail(Errc::not_multiplicative, "'" + f->name() + "' fails multiplicativity at (" +
                                         std::to_string(r.witness->first) + "," +
                                         std::to_string(r.witness->second) + ")");
  }
  auto value_at_pp = [](const ArithFunc& f, uint64_t p, uint32_t j) -> PolyCoeff {
    if (f.prime_power_rule()) return PolyCoeff(f.prime_power_rule()(p, j));
    uint64_t pj = 1;
    for (uint32_t t = 0; t < j; ++t) pj *= p;
    return f.value(pj);
  };
  EquivalenceVerdict v;
  v.horizon_p = horizon_p;
  v.horizon_j = horizon_j;
  for (uint32_t p : primes_upto(static_cast<uint32_t>(horizon_p))) {
    if (p > horizon_p) break;
    for (uint32_t j = 1; j <= horizon_j; ++j) {
      if (value_at_pp(a, p, j) != value_at_pp(b, p, j)) {
        v.exceptional_primes.push_back(p);
        break;
      }
    }
  }
  return v;
}

// Measured growth constant: max over n <= horizon and z in the grid of
// |alpha(n)(z)| / n^k. This certifies the declared exponent over the horizon
// only; it is evidence, not a proof for all n.
inline double growth_check(const ArithFunc& a, double k, uint64_t horizon,
                           const std::vector<std::complex<double>>& z_grid) {
  if (horizon < 1) fail(Errc::precondition, "growth horizon must be >= 1");
  std::vector<std::complex<double>> grid = z_grid;
  if (grid.empty()) grid.emplace_back(2.0, 0.0);
  double best = 0.0;
  a.prefetch(horizon);
  for (uint64_t n = 1; n <= horizon; ++n) {
    double scale = std::pow(static_cast<double>(n), -k);
    for (const auto& z : grid) {
      double ratio = std::abs(a.value_at(n, z)) * scale;
      if (ratio > best) best = ratio;
    }
  }
  return best;
}

inline GrowthAudit audit_growth(const ArithFunc& a, uint64_t horizon = 10000,
                                std::vector<std::complex<double>> z_grid = {}) {
  GrowthAudit audit;
  audit.z_grid = z_grid.empty() ? std::vector<std::complex<double>>{{2.0, 0.0}} : std::move(z_grid);
  audit.horizon = horizon;
  audit.constant = growth_check(a, a.growth_k(), horizon, audit.z_grid);
  a.store_growth_audit(audit);
  return audit;
}

}  // namespace dforge
