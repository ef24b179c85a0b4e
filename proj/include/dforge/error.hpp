#pragma once

#include <stdexcept>
#include <string>

namespace dforge {

// Every failure mode the library reports. CLI maps these to exit code 1;
// negative verdicts (not_certified ranks, nonempty exceptional sets) are
// results, not errors, and map to exit code 2.
enum class Errc {
  not_invertible,
  factorization_overflow,
  not_multiplicative,
  certificate_violation,
  domain_error,
  divergent,
  budget_exceeded,
  certificate_missing,
  not_morphism,
  recovery_uncertain,
  unsupported_coefficients,
  unsupported_character,
  non_finite,
  parse_error,
  unknown_function,
  bad_rational,
  precondition,
  internal,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::not_invertible: return "NotInvertible";
    case Errc::factorization_overflow: return "FactorizationOverflow";
    case Errc::not_multiplicative: return "NotMultiplicative";
    case Errc::certificate_violation: return "CertificateViolation";
    case Errc::domain_error: return "DomainError";
    case Errc::divergent: return "Divergent";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::certificate_missing: return "CertificateMissing";
    case Errc::not_morphism: return "NotMorphism";
    case Errc::recovery_uncertain: return "RecoveryUncertain";
    case Errc::unsupported_coefficients: return "UnsupportedCoefficients";
    case Errc::unsupported_character: return "UnsupportedCharacter";
    case Errc::non_finite: return "NonFinite";
    case Errc::parse_error: return "ParseError";
    case Errc::unknown_function: return "UnknownFunction";
    case Errc::bad_rational: return "BadRational";
    case Errc::precondition: return "Precondition";
    case Errc::internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace dforge
