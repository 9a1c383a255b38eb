#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperaug {

enum class ErrorCode {
  invalid_argument,
  shape_mismatch,
  empty_dataset,
  empty_class,
  io,
  format,
  not_a_shapefile,
  unsupported_geometry,
  truncated,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. what() is a single line prefixed
/// with the code name, e.g. "io: cannot open 'x.hsb'".
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace hyperaug
