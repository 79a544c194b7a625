#include "seesaw/error.hpp"

namespace seesaw {

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_geometry: return "invalid-geometry";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::out_of_regime: return "out-of-regime";
    case ErrorCode::singular_system: return "singular-system";
    case ErrorCode::invalid_ratio: return "invalid-ratio";
    case ErrorCode::invalid_element: return "invalid-element";
    case ErrorCode::parse: return "parse";
    case ErrorCode::validation: return "validation";
    case ErrorCode::infeasible: return "infeasible";
  }
  return "unknown";
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::out_of_regime:
    case ErrorCode::infeasible:
      return 2;
    case ErrorCode::singular_system:
      return 3;
    default:
      return 1;
  }
}

}  // namespace seesaw
