#include "hyperaug/geo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <set>

#include "hyperaug/error.hpp"
#include "hyperaug/io.hpp"
#include "hyperaug/parallel.hpp"

namespace hyperaug {
namespace {

namespace fs = std::filesystem;

std::int64_t saturating_floor(double v) noexcept {
  constexpr double lo = -9.2e18;
  constexpr double hi = 9.2e18;
  if (std::isnan(v) || v <= lo) return std::numeric_limits<std::int64_t>::min();
  if (v >= hi) return std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(std::floor(v));
}

std::string window_text(std::int64_t r0, std::int64_t c0, std::size_t size) {
  const auto n = static_cast<std::int64_t>(size);
  return "rows [" + std::to_string(r0) + "," + std::to_string(r0 + n) + ") cols [" +
         std::to_string(c0) + "," + std::to_string(c0 + n) + ")";
}

}  // namespace

void GeoTransform::validate() const {
  if (!std::isfinite(origin_x) || !std::isfinite(origin_y) || !std::isfinite(pixel_width) ||
      !std::isfinite(pixel_height) || pixel_width <= 0.0 || pixel_height <= 0.0) {
    throw Error(ErrorCode::invalid_argument,
                "geotransform needs finite origin and pixel sizes > 0");
  }
}

PixelIndex GeoTransform::world_to_pixel(double x, double y) const noexcept {
  return {saturating_floor((x - origin_x) / pixel_width),
          saturating_floor((origin_y - y) / pixel_height)};
}

std::pair<double, double> GeoTransform::pixel_to_world(std::int64_t col,
                                                       std::int64_t row) const noexcept {
  return {origin_x + (static_cast<double>(col) + 0.5) * pixel_width,
          origin_y - (static_cast<double>(row) + 0.5) * pixel_height};
}

InMemoryRaster::InMemoryRaster(HyperImage image, GeoTransform transform)
    : image_(std::move(image)), transform_(transform) {
  transform_.validate();
}

HyperImage InMemoryRaster::read_window(std::size_t row0, std::size_t col0, std::size_t rows,
                                       std::size_t cols) const {
  if (rows == 0 || cols == 0 || row0 >= height() || col0 >= width() || rows > height() - row0 ||
      cols > width() - col0) {
    throw Error(ErrorCode::invalid_argument, "raster window out of bounds");
  }
  HyperImage out(rows, cols, channels());
  const std::size_t run = cols * channels();
  for (std::size_t r = 0; r < rows; ++r) {
    auto src = image_.data().subspan(image_.offset(row0 + r, col0), run);
    std::copy(src.begin(), src.end(), out.data().begin() + out.offset(r, 0));
  }
  return out;
}

InMemoryRaster load_band_raster(const fs::path& sidecar, const BandDecoder& decoder) {
  std::ifstream in(sidecar);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + sidecar.string() + "'");
  GeoTransform gt;
  std::vector<std::string> band_names;
  try {
    const auto doc = nlohmann::json::parse(in);
    gt.origin_x = doc.at("origin_x").get<double>();
    gt.origin_y = doc.at("origin_y").get<double>();
    gt.pixel_width = doc.at("pixel_width").get<double>();
    gt.pixel_height = doc.at("pixel_height").get<double>();
    band_names = doc.at("bands").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::format, "sidecar '" + sidecar.string() + "': " + e.what());
  }
  if (band_names.empty()) {
    throw Error(ErrorCode::format, "sidecar '" + sidecar.string() + "' lists no bands");
  }

  const fs::path base = sidecar.parent_path();
  std::vector<HyperImage> bands;
  bands.reserve(band_names.size());
  for (const auto& name : band_names) {
    const fs::path path = base / name;
    if (io::is_patch_file(path)) {
      bands.push_back(io::load_patch(path));
    } else if (decoder) {
      bands.push_back(decoder(path));
    } else {
      throw Error(ErrorCode::format, "no decoder for band '" + path.string() + "'");
    }
  }
  return InMemoryRaster(from_bands(bands), gt);
}

PatchResult extract_patch(const RasterSource& source, std::int64_t center_col,
                          std::int64_t center_row, std::size_t size, BorderPolicy policy) {
  if (size == 0) throw Error(ErrorCode::invalid_argument, "patch size must be >= 1");
  const auto h = static_cast<std::int64_t>(source.height());
  const auto w = static_cast<std::int64_t>(source.width());
  if (center_col < 0 || center_row < 0 || center_col >= w || center_row >= h) {
    return SkipNotice{"center pixel (col " + std::to_string(center_col) + ", row " +
                      std::to_string(center_row) + ") lies outside the raster"};
  }
  if (size > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    throw Error(ErrorCode::invalid_argument, "patch size too large");
  }
  const auto n = static_cast<std::int64_t>(size);
  const std::int64_t r0 = center_row - n / 2;
  const std::int64_t c0 = center_col - n / 2;
  if (r0 >= 0 && c0 >= 0 && r0 + n <= h && c0 + n <= w) {
    return source.read_window(static_cast<std::size_t>(r0), static_cast<std::size_t>(c0), size,
                              size);
  }
  if (policy == BorderPolicy::skip) {
    return SkipNotice{"window " + window_text(r0, c0, size) + " exceeds the " +
                      std::to_string(h) + "x" + std::to_string(w) + " raster"};
  }

  const std::int64_t ir0 = std::max<std::int64_t>(r0, 0);
  const std::int64_t ir1 = std::min(r0 + n, h);
  const std::int64_t ic0 = std::max<std::int64_t>(c0, 0);
  const std::int64_t ic1 = std::min(c0 + n, w);
  const HyperImage part =
      source.read_window(static_cast<std::size_t>(ir0), static_cast<std::size_t>(ic0),
                         static_cast<std::size_t>(ir1 - ir0), static_cast<std::size_t>(ic1 - ic0));
  HyperImage out(size, size, source.channels());
  for (std::int64_t i = 0; i < n; ++i) {
    const auto pr = static_cast<std::size_t>(std::clamp(r0 + i, ir0, ir1 - 1) - ir0);
    for (std::int64_t j = 0; j < n; ++j) {
      const auto pc = static_cast<std::size_t>(std::clamp(c0 + j, ic0, ic1 - 1) - ic0);
      auto src = part.spectrum(pr, pc);
      std::copy(src.begin(), src.end(),
                out.data().begin() + out.offset(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
    }
  }
  return out;
}

std::string patch_file_name(std::int32_t record_number) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06d.hsb", record_number);
  return buf;
}

ExtractReport extract_all(const RasterSource& source, std::span<const PointRecord> points,
                          std::size_t size, BorderPolicy policy, const fs::path& out_dir,
                          std::size_t workers) {
  if (size == 0) throw Error(ErrorCode::invalid_argument, "patch size must be >= 1");
  std::set<std::int32_t> numbers;
  std::set<std::string> labels;
  for (const auto& p : points) {
    if (!numbers.insert(p.record_number).second) {
      throw Error(ErrorCode::invalid_argument,
                  "duplicate record number " + std::to_string(p.record_number));
    }
    if (p.label) labels.insert(*p.label);
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw Error(ErrorCode::io, "cannot create output directory '" + out_dir.string() + "'");
  }
  for (const auto& label : labels) {
    fs::create_directories(out_dir / label, ec);
    if (ec) throw Error(ErrorCode::io, "cannot create '" + (out_dir / label).string() + "'");
  }

  const GeoTransform gt = source.geotransform();
  std::vector<std::string> reasons(points.size());
  std::vector<char> written(points.size(), 0);
  parallel_for(points.size(), workers, [&](std::size_t i) {
    const PointRecord& p = points[i];
    const PixelIndex px = gt.world_to_pixel(p.x, p.y);
    PatchResult result = extract_patch(source, px.col, px.row, size, policy);
    if (auto* notice = std::get_if<SkipNotice>(&result)) {
      reasons[i] = std::move(notice->reason);
      return;
    }
    const fs::path dir = p.label ? out_dir / *p.label : out_dir;
    io::save_hsb(dir / patch_file_name(p.record_number), std::get<HyperImage>(result));
    written[i] = 1;
  });

  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points[a].record_number < points[b].record_number;
  });
  ExtractReport report;
  for (std::size_t i : order) {
    if (written[i]) {
      ++report.written;
    } else {
      report.skipped.push_back(points[i].record_number);
      report.skip_reasons.push_back(std::move(reasons[i]));
    }
  }
  return report;
}

}  // namespace hyperaug
