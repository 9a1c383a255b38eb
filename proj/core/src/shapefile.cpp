#include "hyperaug/shapefile.hpp"

#include <charconv>

#include "bytes.hpp"
#include "hyperaug/error.hpp"
#include "hyperaug/io.hpp"

namespace hyperaug {
namespace {

using detail::load_be;
using detail::load_le;

constexpr std::int32_t kFileCode = 9994;
constexpr std::size_t kHeaderSize = 100;
constexpr std::int32_t kNullShape = 0;
constexpr std::int32_t kPoint = 1;
constexpr std::int32_t kPointZ = 11;
constexpr std::size_t kPointContent = 4 + 2 * sizeof(double);

[[noreturn]] void truncated(std::size_t offset, const std::string& what) {
  throw Error(ErrorCode::truncated, what + " at byte offset " + std::to_string(offset));
}

std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  std::string out(s.substr(b, e - b + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

}  // namespace

std::string_view shape_type_name(std::int32_t type) noexcept {
  switch (type) {
    case 0: return "Null";
    case 1: return "Point";
    case 3: return "PolyLine";
    case 5: return "Polygon";
    case 8: return "MultiPoint";
    case 11: return "PointZ";
    case 13: return "PolyLineZ";
    case 15: return "PolygonZ";
    case 18: return "MultiPointZ";
    case 21: return "PointM";
    case 23: return "PolyLineM";
    case 25: return "PolygonM";
    case 28: return "MultiPointM";
    case 31: return "MultiPatch";
    default: return "unknown";
  }
}

std::vector<PointRecord> parse_shapefile_points(std::span<const std::byte> bytes) {
  if (bytes.size() < 4) truncated(bytes.size(), "file ends inside the header");
  if (load_be<std::int32_t>(bytes.data()) != kFileCode) {
    throw Error(ErrorCode::not_a_shapefile, "file code is not 9994");
  }
  if (bytes.size() < kHeaderSize) truncated(bytes.size(), "file ends inside the 100-byte header");

  const std::int64_t declared = std::int64_t{load_be<std::int32_t>(bytes.data() + 24)} * 2;
  if (declared < static_cast<std::int64_t>(kHeaderSize)) {
    throw Error(ErrorCode::format, "header declares a file length of " + std::to_string(declared) +
                                       " bytes, below the header size");
  }
  if (declared > static_cast<std::int64_t>(bytes.size())) {
    truncated(bytes.size(), "header declares " + std::to_string(declared) +
                                " bytes but the file ends");
  }
  const auto end = static_cast<std::size_t>(declared);

  const auto type = load_le<std::int32_t>(bytes.data() + 32);
  if (type != kPoint && type != kPointZ) {
    throw Error(ErrorCode::unsupported_geometry,
                "shape type " + std::to_string(type) + " (" + std::string(shape_type_name(type)) +
                    ") is not Point or PointZ");
  }

  std::vector<PointRecord> points;
  std::int64_t last_number = 0;
  std::size_t offset = kHeaderSize;
  while (offset < end) {
    if (end - offset < 8) truncated(offset, "record header cut short");
    const auto number = load_be<std::int32_t>(bytes.data() + offset);
    const std::int64_t content = std::int64_t{load_be<std::int32_t>(bytes.data() + offset + 4)} * 2;
    const std::size_t start = offset + 8;
    if (content < 4) {
      throw Error(ErrorCode::format, "record " + std::to_string(number) + " at byte offset " +
                                         std::to_string(offset) + " has content length " +
                                         std::to_string(content));
    }
    if (static_cast<std::uint64_t>(content) > end - start) {
      truncated(offset, "record " + std::to_string(number) + " content cut short");
    }
    if (number <= last_number) {
      throw Error(ErrorCode::format, "record number " + std::to_string(number) +
                                         " does not increase at byte offset " +
                                         std::to_string(offset));
    }
    last_number = number;

    const auto record_type = load_le<std::int32_t>(bytes.data() + start);
    if (record_type != kNullShape) {
      if (record_type != type) {
        throw Error(ErrorCode::unsupported_geometry,
                    "record " + std::to_string(number) + " has shape type " +
                        std::to_string(record_type) + " (" +
                        std::string(shape_type_name(record_type)) + ") in a " +
                        std::string(shape_type_name(type)) + " file");
      }
      if (static_cast<std::size_t>(content) < kPointContent) {
        truncated(offset, "record " + std::to_string(number) + " too short for a point");
      }
      PointRecord p;
      p.record_number = number;
      p.x = load_le<double>(bytes.data() + start + 4);
      p.y = load_le<double>(bytes.data() + start + 12);
      points.push_back(std::move(p));
    }
    offset = start + static_cast<std::size_t>(content);
  }
  return points;
}

std::vector<PointRecord> read_shapefile_points(const std::filesystem::path& path) {
  const auto bytes = io::read_file(path);
  try {
    return parse_shapefile_points(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), "'" + path.string() + "': " + e.detail());
  }
}

std::map<std::int32_t, std::string> parse_labels_csv(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::map<std::int32_t, std::string> labels;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (trim(line).empty()) continue;

    const auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw Error(ErrorCode::format, "labels CSV line " + std::to_string(line_no) + " has no comma");
    }
    const std::string key = trim(line.substr(0, comma));
    const std::string label = trim(line.substr(comma + 1));
    if (!seen_header) {
      if (key != "record" || label != "label") {
        throw Error(ErrorCode::format, "labels CSV must start with the header 'record,label'");
      }
      seen_header = true;
      continue;
    }
    std::int32_t record = 0;
    const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), record);
    if (ec != std::errc{} || ptr != key.data() + key.size()) {
      throw Error(ErrorCode::format, "labels CSV line " + std::to_string(line_no) +
                                         ": bad record number '" + key + "'");
    }
    if (label.empty() || label == "." || label == ".." ||
        label.find_first_of("/\\") != std::string::npos) {
      throw Error(ErrorCode::format, "labels CSV line " + std::to_string(line_no) +
                                         ": label '" + label + "' is not a valid folder name");
    }
    if (!labels.emplace(record, label).second) {
      throw Error(ErrorCode::format, "labels CSV repeats record " + std::to_string(record));
    }
  }
  if (!seen_header) throw Error(ErrorCode::format, "labels CSV is empty");
  return labels;
}

void attach_labels(std::vector<PointRecord>& points,
                   const std::map<std::int32_t, std::string>& labels) {
  for (auto& p : points) {
    if (auto it = labels.find(p.record_number); it != labels.end()) p.label = it->second;
  }
}

}  // namespace hyperaug
