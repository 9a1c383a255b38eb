#include "hyperaug/error.hpp"

namespace hyperaug {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::shape_mismatch: return "shape-mismatch";
    case ErrorCode::empty_dataset: return "empty-dataset";
    case ErrorCode::empty_class: return "empty-class";
    case ErrorCode::io: return "io";
    case ErrorCode::format: return "format";
    case ErrorCode::not_a_shapefile: return "not-a-shapefile";
    case ErrorCode::unsupported_geometry: return "unsupported-geometry";
    case ErrorCode::truncated: return "truncated";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace hyperaug
