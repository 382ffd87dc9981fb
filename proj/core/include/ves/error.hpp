#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ves {

// Stable identifiers; the CLI prints these verbatim as one-line error codes.
enum class ErrorCode {
  domain,               // non-finite intermediate / exponent overflow
  invalid_parameter,    // parameter outside its invariant bounds
  cobb_douglas_limit,   // |rho| below tolerance
  singular_denominator, // 1 - b - c == 0 or b == 1
  non_economic_region,  // alpha <= 0 or beta <= 0 in the HL -> SMAC mapping
  log_domain,           // logarithm of a non-positive quantity
  degenerate_curvature, // f'' == 0 in the elasticity formula
  insufficient_data,
  rank_deficient,
  undefined_srmse,
  incomparable_fits,
  non_invertible,
  ambiguous_roots,
  schema,
  empty_input,
  io,
  usage,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ves
