#pragma once

// Trial-division factorization with a configurable horizon. Inputs above the
// horizon are rejected rather than silently degraded; the DFORGE_FACTOR_LIMIT
// environment variable overrides the default.

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <mutex>
#include <utility>
#include <vector>

#include "dforge/error.hpp"

namespace dforge {

struct Factorization {
  std::vector<std::pair<uint64_t, uint32_t>> factors;  // (prime, exponent), ascending

  uint32_t omega_total() const noexcept {  // prime factors counted with multiplicity
    uint32_t t = 0;
    for (const auto& [p, e] : factors) t += e;
    return t;
  }
  bool squarefree() const noexcept {
    for (const auto& [p, e] : factors) {
      if (e > 1) return false;
    }
    return true;
  }
};

inline uint64_t default_factor_limit() {
  static uint64_t limit = [] {
    const char* env = std::getenv("DFORGE_FACTOR_LIMIT");
    if (env != nullptr) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && v >= 2) return static_cast<uint64_t>(v);
    }
    return static_cast<uint64_t>(100000000ULL);  // 10^8
  }();
  return limit;
}

// All primes up to at least n; the cache only grows, so the returned list may
// extend beyond n and callers iterate with their own cutoff.
inline const std::vector<uint32_t>& primes_upto(uint32_t n) {
  static std::mutex mu;
  static std::vector<uint32_t> primes;
  static uint32_t sieved_to = 1;
  std::lock_guard<std::mutex> lock(mu);
  if (n > sieved_to) {
    uint32_t target = std::max(n, sieved_to * 2);
    std::vector<bool> comp(target + 1, false);
    primes.clear();
    for (uint32_t p = 2; p <= target; ++p) {
      if (comp[p]) continue;
      primes.push_back(p);
      for (uint64_t q = static_cast<uint64_t>(p) * p; q <= target; q += p) comp[q] = true;
    }
    sieved_to = target;
  }
  return primes;
}

inline Factorization factorize(uint64_t n, uint64_t limit = 0) {
  if (limit == 0) limit = default_factor_limit();
  if (n == 0) fail(Errc::precondition, "factorize(0)");
  if (n > limit)
    fail(Errc::factorization_overflow,
         "n=" + std::to_string(n) + " exceeds factorization horizon " + std::to_string(limit));
  Factorization f;
  uint64_t m = n;
  uint32_t sqrt_bound = 2;
  while (static_cast<uint64_t>(sqrt_bound) * sqrt_bound < n) ++sqrt_bound;
  const auto& primes = primes_upto(sqrt_bound);
  for (uint32_t p : primes) {
    if (static_cast<uint64_t>(p) * p > m) break;
    if (m % p == 0) {
      uint32_t e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      f.factors.emplace_back(p, e);
    }
  }
  if (m > 1) f.factors.emplace_back(m, 1u);
  return f;
}

inline bool is_prime(uint64_t n) {
  if (n < 2) return false;
  const Factorization f = factorize(n);
  return f.factors.size() == 1 && f.factors[0].second == 1;
}

inline int mobius_of(const Factorization& f) {
  if (!f.squarefree()) return 0;
  return f.factors.size() % 2 == 0 ? 1 : -1;
}

}  // namespace dforge
