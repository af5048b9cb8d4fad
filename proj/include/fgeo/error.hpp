#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fgeo {

enum class ErrorCode {
  contract_variance,
  shape,
  stencil_evaluation,
  domain,
  radial_singularity,
  invalid_frame,
  degenerate_fiber,
  outside_admissible_cone,
  cone_stencil,
  parse,
  validation,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::contract_variance: return "contract-variance error";
    case ErrorCode::shape: return "shape error";
    case ErrorCode::stencil_evaluation: return "stencil-evaluation error";
    case ErrorCode::domain: return "domain error";
    case ErrorCode::radial_singularity: return "radial-singularity error";
    case ErrorCode::invalid_frame: return "invalid-frame error";
    case ErrorCode::degenerate_fiber: return "degenerate-fiber error";
    case ErrorCode::outside_admissible_cone: return "outside-admissible-cone error";
    case ErrorCode::cone_stencil: return "cone-stencil error";
    case ErrorCode::parse: return "parse error";
    case ErrorCode::validation: return "validation error";
  }
  return "error";
}

}  // namespace fgeo
