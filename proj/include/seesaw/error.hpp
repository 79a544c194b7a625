#pragma once

#include <stdexcept>
#include <string>

namespace seesaw {

enum class ErrorCode {
  invalid_geometry,
  invalid_argument,
  out_of_regime,
  singular_system,
  invalid_ratio,
  invalid_element,
  parse,
  validation,
  infeasible,
};

/// Every failure raised by the library carries one of the codes above so the
/// command layer can map it onto a process exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

const char* to_string(ErrorCode code) noexcept;

/// 1 usage/parse, 2 infeasible or constraint violation, 3 numerical failure.
int exit_code_for(ErrorCode code) noexcept;

}  // namespace seesaw
