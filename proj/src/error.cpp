#include "morreyheat/error.hpp"

namespace morreyheat {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::inadmissible: return "inadmissible parameters";
    case ErrorCode::degenerate_endpoint: return "degenerate endpoint";
    case ErrorCode::non_integrable: return "non-integrable";
    case ErrorCode::non_integrable_weight: return "non-integrable weight";
    case ErrorCode::unsupported_dimension: return "unsupported dimension";
    case ErrorCode::unsupported_order: return "unsupported order";
    case ErrorCode::singular_point: return "singular point";
    case ErrorCode::infinite_measure: return "infinite measure";
    case ErrorCode::unbounded: return "unbounded";
    case ErrorCode::divergent: return "divergent";
    case ErrorCode::mesh_underresolved: return "mesh underresolved";
    case ErrorCode::overlap_detected: return "overlap detected";
  }
  return "error";
}

}  // namespace morreyheat
