#include "ves/error.hpp"

namespace ves {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::domain: return "E_DOMAIN";
    case ErrorCode::invalid_parameter: return "E_INVALID_PARAMETER";
    case ErrorCode::cobb_douglas_limit: return "E_COBB_DOUGLAS_LIMIT";
    case ErrorCode::singular_denominator: return "E_SINGULAR_DENOMINATOR";
    case ErrorCode::non_economic_region: return "E_NON_ECONOMIC_REGION";
    case ErrorCode::log_domain: return "E_LOG_DOMAIN";
    case ErrorCode::degenerate_curvature: return "E_DEGENERATE_CURVATURE";
    case ErrorCode::insufficient_data: return "E_INSUFFICIENT_DATA";
    case ErrorCode::rank_deficient: return "E_RANK_DEFICIENT";
    case ErrorCode::undefined_srmse: return "E_UNDEFINED_SRMSE";
    case ErrorCode::incomparable_fits: return "E_INCOMPARABLE_FITS";
    case ErrorCode::non_invertible: return "E_NON_INVERTIBLE";
    case ErrorCode::ambiguous_roots: return "E_AMBIGUOUS_ROOTS";
    case ErrorCode::schema: return "E_SCHEMA";
    case ErrorCode::empty_input: return "E_EMPTY_INPUT";
    case ErrorCode::io: return "E_IO";
    case ErrorCode::usage: return "E_USAGE";
  }
  return "E_UNKNOWN";
}

}  // namespace ves
