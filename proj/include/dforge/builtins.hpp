#pragma once

// Named arithmetic functions addressable from the CLI and tests: the ring
// unity e, constants, the identity-valued function N, mu, the divisor count,
// Liouville's function, von Mangoldt (exact, via formal log symbols), and
// Dirichlet characters mod q for q <= 100.
//
// Character values must live in Q(i), so only characters whose order divides
// 4 are exposed; asking for any other index reports the representable ones.

#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "dforge/arith.hpp"
#include "dforge/error.hpp"
#include "dforge/factor.hpp"

namespace dforge {

inline ArithFunc make_e() {
  ArithFunc f("e", 0.0, [](uint64_t n) { return n == 1 ? PolyCoeff(1) : PolyCoeff(); });
  f.set_prime_power_rule([](uint64_t, uint32_t) { return GaussRational(0); });
  f.set_fast_eval([](uint64_t n, std::complex<double>) {
    return n == 1 ? std::complex<double>(1.0, 0.0) : std::complex<double>(0.0, 0.0);
  });
  return f;
}

inline ArithFunc make_zero() {
  return ArithFunc("zero", 0.0, [](uint64_t) { return PolyCoeff(); });
}

inline ArithFunc make_one() {
  ArithFunc f("one", 0.0, [](uint64_t) { return PolyCoeff(1); });
  f.set_prime_power_rule([](uint64_t, uint32_t) { return GaussRational(1); });
  f.set_fast_eval([](uint64_t, std::complex<double>) { return std::complex<double>(1.0, 0.0); });
  return f;
}

inline ArithFunc make_identity() {  // N(n) = n
  ArithFunc f("N", 1.0, [](uint64_t n) { return PolyCoeff(Rational(static_cast<long long>(n))); });
  f.set_prime_power_rule([](uint64_t p, uint32_t a) {
    return GaussRational(Rational(BigInt::pow(BigInt(static_cast<long long>(p)), a)));
  });
  f.set_fast_eval([](uint64_t n, std::complex<double>) {
    return std::complex<double>(static_cast<double>(n), 0.0);
  });
  return f;
}

inline ArithFunc make_mobius() {
  return from_prime_powers(
      "mu", [](uint64_t, uint32_t a) { return a == 1 ? GaussRational(-1) : GaussRational(0); }, 0.0);
}

inline ArithFunc make_divisor_count() {
  return from_prime_powers(
      "d", [](uint64_t, uint32_t a) { return GaussRational(static_cast<long long>(a) + 1); }, 0.5);
}

inline ArithFunc make_liouville() {
  return from_prime_powers(
      "lambda_liouville",
      [](uint64_t, uint32_t a) { return a % 2 == 0 ? GaussRational(1) : GaussRational(-1); }, 0.0);
}

// Lambda(p^a) = log p, kept exact as a formal symbol; zero elsewhere.
inline ArithFunc make_von_mangoldt() {
  return ArithFunc("vonmangoldt", 0.5, [](uint64_t n) -> PolyCoeff {
    if (n < 2) return PolyCoeff();
    Factorization f = factorize(n);
    if (f.factors.size() != 1) return PolyCoeff();
    LogMonomial m;
    m.factors.emplace_back(static_cast<uint32_t>(f.factors[0].first), 1u);
    return PolyCoeff(LogPoly::monomial(std::move(m), GaussRational(1)));
  });
}

// ---------------------------------------------------------------------------
// Dirichlet characters
// ---------------------------------------------------------------------------

namespace detail {

inline uint64_t powmod(uint64_t b, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  b %= m;
  while (e != 0) {
    if (e & 1ULL) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

inline uint64_t element_order(uint64_t g, uint64_t m) {
  uint64_t o = 1;
  uint64_t x = g % m;
  while (x != 1 % m) {
    x = x * g % m;
    ++o;
  }
  return o;
}

// One prime-power piece of (Z/q)* with an independent generating set:
// odd p^e is cyclic; 2^e needs {-1, 5} for e >= 3.
struct UnitPiece {
  uint64_t piece;
  std::vector<std::pair<uint64_t, uint64_t>> gens;  // (generator, order)
};

inline std::vector<UnitPiece> unit_group_pieces(uint64_t q) {
  std::vector<UnitPiece> pieces;
  for (const auto& [p, e] : factorize(q).factors) {
    uint64_t pe = 1;
    for (uint32_t t = 0; t < e; ++t) pe *= p;
    UnitPiece piece{pe, {}};
    if (p == 2) {
      if (e == 1) continue;  // trivial group
      if (e == 2) {
        piece.gens.emplace_back(3, 2);
      } else {
        piece.gens.emplace_back(pe - 1, 2);
        piece.gens.emplace_back(5, element_order(5, pe));
      }
    } else {
      uint64_t phi = pe / p * (p - 1);
      for (uint64_t cand = 2; cand < pe; ++cand) {
        if (std::gcd(cand, pe) != 1) continue;
        if (element_order(cand, pe) == phi) {
          piece.gens.emplace_back(cand, phi);
          break;
        }
      }
    }
    pieces.push_back(std::move(piece));
  }
  return pieces;
}

// exponents (a_1, ..., a_r) with x = prod gens_i^{a_i} mod piece, by enumeration
inline std::vector<uint64_t> joint_dlog(uint64_t x, const UnitPiece& piece) {
  std::vector<uint64_t> exps(piece.gens.size(), 0);
  while (true) {
    uint64_t v = 1 % piece.piece;
    for (size_t i = 0; i < piece.gens.size(); ++i) v = v * powmod(piece.gens[i].first, exps[i], piece.piece) % piece.piece;
    if (v == x % piece.piece) return exps;
    size_t i = 0;
    while (i < exps.size()) {
      if (++exps[i] < piece.gens[i].second) break;
      exps[i] = 0;
      ++i;
    }
    if (i == exps.size()) fail(Errc::internal, "discrete log lookup failed");
  }
}

// quarter-turn tables: value = i^t for t in 0..3
inline GaussRational quarter_root(uint64_t t) {
  switch (t % 4) {
    case 0: return GaussRational(1);
    case 1: return GaussRational::i();
    case 2: return GaussRational(-1);
    default: return GaussRational(Rational(0), Rational(-1));
  }
}

inline std::vector<std::pair<uint64_t, uint64_t>> flat_generators(uint64_t q) {
  std::vector<std::pair<uint64_t, uint64_t>> flat;
  for (const auto& piece : unit_group_pieces(q)) {
    for (const auto& g : piece.gens) flat.push_back(g);
  }
  return flat;
}

}  // namespace detail

// order of character index t (mixed radix over the cyclic component orders)
inline uint64_t dirichlet_character_order(uint64_t q, uint64_t t) {
  uint64_t order = 1;
  for (const auto& [gen, m] : detail::flat_generators(q)) {
    uint64_t ti = t % m;
    t /= m;
    order = std::lcm(order, m / std::gcd(ti, m));
  }
  return order;
}

inline uint64_t dirichlet_character_count(uint64_t q) {
  uint64_t n = 1;
  for (const auto& [gen, m] : detail::flat_generators(q)) n *= m;
  return n;
}

// indices of the characters mod q whose values lie in Q(i)
inline std::vector<uint64_t> representable_characters(uint64_t q) {
  std::vector<uint64_t> out;
  for (uint64_t t = 0; t < dirichlet_character_count(q); ++t) {
    uint64_t o = dirichlet_character_order(q, t);
    if (4 % o == 0) out.push_back(t);
  }
  return out;
}

inline ArithFunc make_dirichlet_character(uint64_t q, uint64_t t) {
  if (q < 1 || q > 100) fail(Errc::unsupported_character, "modulus must satisfy 1 <= q <= 100");
  uint64_t count = dirichlet_character_count(q);
  if (t >= count)
    fail(Errc::unsupported_character,
         "character index " + std::to_string(t) + " out of range for modulus " + std::to_string(q));
  uint64_t order = dirichlet_character_order(q, t);
  if (4 % order != 0) {
    std::string valid;
    for (uint64_t v : representable_characters(q)) {
      if (!valid.empty()) valid += ",";
      valid += std::to_string(v);
    }
    fail(Errc::unsupported_character, "character chi_" + std::to_string(q) + "_" + std::to_string(t) +
                                          " has order " + std::to_string(order) +
                                          "; exact Gaussian-rational values need order dividing 4 "
                                          "(available indices: " +
                                          valid + ")");
  }
  // value table over residues
  auto pieces = detail::unit_group_pieces(q);
  std::vector<GaussRational> table(q);
  for (uint64_t r = 0; r < q; ++r) {
    if (std::gcd(r, q) != 1) {
      table[r] = GaussRational(0);
      continue;
    }
    // angle as quarter turns: 4 * sum over components of t_i * dlog_i / m_i,
    // integral because the character order divides 4
    uint64_t tt = t;
    uint64_t quarters = 0;
    for (const auto& piece : pieces) {
      std::vector<uint64_t> exps = detail::joint_dlog(r % piece.piece, piece);
      for (size_t i = 0; i < piece.gens.size(); ++i) {
        uint64_t m = piece.gens[i].second;
        uint64_t ti = tt % m;
        tt /= m;
        quarters += 4 * ti * exps[i] / m % 4;
      }
    }
    table[r] = detail::quarter_root(quarters);
  }
  std::string name = "chi_" + std::to_string(q) + "_" + std::to_string(t);
  ArithFunc f(name, 0.0, [table, q](uint64_t n) { return PolyCoeff(table[n % q]); });
  f.set_prime_power_rule(
      [table, q](uint64_t p, uint32_t a) { return table[detail::powmod(p, a, q)]; });
  return f;
}

// finite table, zero beyond the listed values
inline ArithFunc make_table_func(std::string name, std::vector<GaussRational> values,
                                 double growth_k) {
  return ArithFunc(std::move(name), growth_k, [values](uint64_t n) -> PolyCoeff {
    if (n > values.size()) return PolyCoeff();
    return PolyCoeff(values[n - 1]);
  });
}

// Shared registry so repeated lookups reuse one memo per builtin.
inline ArithFunc lookup_builtin(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, ArithFunc> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  ArithFunc f;
  if (name == "e") {
    f = make_e();
  } else if (name == "zero") {
    f = make_zero();
  } else if (name == "one") {
    f = make_one();
  } else if (name == "N") {
    f = make_identity();
  } else if (name == "mu") {
    f = make_mobius();
  } else if (name == "d") {
    f = make_divisor_count();
  } else if (name == "lambda_liouville") {
    f = make_liouville();
  } else if (name == "vonmangoldt") {
    f = make_von_mangoldt();
  } else if (name.rfind("chi_", 0) == 0) {
    size_t sep = name.find('_', 4);
    if (sep == std::string::npos)
      fail(Errc::unknown_function, "character names look like chi_<q>_<index>");
    uint64_t q = std::strtoull(name.substr(4, sep - 4).c_str(), nullptr, 10);
    uint64_t t = std::strtoull(name.substr(sep + 1).c_str(), nullptr, 10);
    f = make_dirichlet_character(q, t);
  } else {
    fail(Errc::unknown_function,
         "'" + name +
             "' is not a builtin (known: e, zero, one, N, mu, d, lambda_liouville, vonmangoldt, "
             "chi_<q>_<index>)");
  }
  cache.emplace(name, f);
  return f;
}

}  // namespace dforge
