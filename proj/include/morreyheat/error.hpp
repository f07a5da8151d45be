#pragma once

#include <stdexcept>
#include <string>

namespace morreyheat {

enum class ErrorCode {
  invalid_argument,
  inadmissible,
  degenerate_endpoint,
  non_integrable,
  non_integrable_weight,
  unsupported_dimension,
  unsupported_order,
  singular_point,
  infinite_measure,
  unbounded,
  divergent,
  mesh_underresolved,
  overlap_detected,
};

const char* to_string(ErrorCode code);

// Every numerical failure surfaces as this exception; the code lets callers
// (and the CLI exit-status mapping) branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace morreyheat
