#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hyperaug {

struct PointRecord {
  std::int32_t record_number = 0;  ///< 1-based, strictly increasing in file order
  double x = 0.0;
  double y = 0.0;
  std::optional<std::string> label;

  friend bool operator==(const PointRecord&, const PointRecord&) = default;
};

/// Parses an ESRI .shp main file holding Point (1) or PointZ (11) shapes;
/// Z and M are ignored and Null (0) records are skipped.
///
/// Header: file code 9994 (big-endian i32 at 0), file length in 16-bit words
/// (big-endian i32 at 24), shape type (little-endian i32 at 32). Records: a
/// big-endian (record number, content length in words) pair followed by the
/// little-endian content. Never reads outside `bytes`.
///
/// Errors: not_a_shapefile (bad file code), unsupported_geometry (naming the
/// type), truncated (with the byte offset where data ran out), format
/// (inconsistent lengths or record numbers).
std::vector<PointRecord> parse_shapefile_points(std::span<const std::byte> bytes);
std::vector<PointRecord> read_shapefile_points(const std::filesystem::path& path);

/// Human-readable name of an ESRI shape type code ("Polygon" for 5).
std::string_view shape_type_name(std::int32_t type) noexcept;

/// Parses a "record,label" CSV (header row required, UTF-8). Labels become
/// folder names, so path separators and "." / ".." are rejected.
std::map<std::int32_t, std::string> parse_labels_csv(std::string_view text);

/// Copies labels onto matching points; points without a row keep no label.
void attach_labels(std::vector<PointRecord>& points,
                   const std::map<std::int32_t, std::string>& labels);

}  // namespace hyperaug
