#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hyperaug/image.hpp"
#include "hyperaug/shapefile.hpp"

namespace hyperaug {

struct PixelIndex {
  std::int64_t col = 0;
  std::int64_t row = 0;

  friend bool operator==(const PixelIndex&, const PixelIndex&) = default;
};

/// North-up, axis-aligned world <-> pixel mapping. The origin is the outer
/// top-left corner of pixel (0, 0); rows grow southward. No reprojection is
/// done: world coordinates must already be in the raster's CRS.
struct GeoTransform {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double pixel_width = 1.0;
  double pixel_height = 1.0;

  /// Throws invalid_argument unless both pixel sizes are finite and > 0.
  void validate() const;

  /// col = floor((x - origin_x) / pixel_width), row = floor((origin_y - y) / pixel_height).
  /// Saturates at the int64 range for coordinates far outside any raster.
  PixelIndex world_to_pixel(double x, double y) const noexcept;
  /// World coordinate of the center of pixel (col, row).
  std::pair<double, double> pixel_to_world(std::int64_t col, std::int64_t row) const noexcept;
};

/// Read access to a geo-referenced raster. Implementations must allow
/// concurrent read_window calls.
class RasterSource {
public:
  virtual ~RasterSource() = default;

  virtual std::size_t height() const = 0;
  virtual std::size_t width() const = 0;
  virtual std::size_t channels() const = 0;
  virtual GeoTransform geotransform() const = 0;
  /// Throws invalid_argument unless the window is non-empty and inside the raster.
  virtual HyperImage read_window(std::size_t row0, std::size_t col0, std::size_t rows,
                                 std::size_t cols) const = 0;
};

class InMemoryRaster final : public RasterSource {
public:
  InMemoryRaster(HyperImage image, GeoTransform transform);

  std::size_t height() const override { return image_.height(); }
  std::size_t width() const override { return image_.width(); }
  std::size_t channels() const override { return image_.channels(); }
  GeoTransform geotransform() const override { return transform_; }
  HyperImage read_window(std::size_t row0, std::size_t col0, std::size_t rows,
                         std::size_t cols) const override;

  const HyperImage& image() const noexcept { return image_; }

private:
  HyperImage image_;
  GeoTransform transform_;
};

/// Materializes one band file the library cannot read itself (e.g. a JPEG
/// 2000 tile) into a single-channel image.
using BandDecoder = std::function<HyperImage(const std::filesystem::path&)>;

/// Loads a band-directory raster from its JSON sidecar:
///   {"origin_x": .., "origin_y": .., "pixel_width": .., "pixel_height": ..,
///    "bands": ["B01.hsb", "B02.npy", ...]}
/// Band paths are relative to the sidecar's directory and listed in channel
/// order. ".hsb" and ".npy" bands are read directly; anything else goes to
/// `decoder` (format error when none is given).
InMemoryRaster load_band_raster(const std::filesystem::path& sidecar,
                                const BandDecoder& decoder = {});

enum class BorderPolicy { skip, edge_pad };

struct SkipNotice {
  std::string reason;
};

using PatchResult = std::variant<HyperImage, SkipNotice>;

/// Crops rows/cols [center - size/2, center - size/2 + size). Even sizes put
/// the center at the top-left of the central 2x2. Windows crossing the
/// raster edge are skipped, or under edge_pad filled by replicating the
/// nearest edge pixels. A center outside the raster is skipped under both
/// policies. Throws invalid_argument when size is 0.
PatchResult extract_patch(const RasterSource& source, std::int64_t center_col,
                          std::int64_t center_row, std::size_t size, BorderPolicy policy);

struct ExtractReport {
  std::size_t written = 0;
  std::vector<std::int32_t> skipped;    ///< record numbers, ascending
  std::vector<std::string> skip_reasons;  ///< parallel to `skipped`
};

/// Patch file name for a record, e.g. "000007.hsb".
std::string patch_file_name(std::int32_t record_number);

/// Maps each point through the source's geotransform, extracts a patch, and
/// writes it as HSB to out_dir[/label]/NNNNNN.hsb. Per-point skips are
/// reported, not thrown; an unwritable out_dir throws io. Record numbers
/// must be unique.
ExtractReport extract_all(const RasterSource& source, std::span<const PointRecord> points,
                          std::size_t size, BorderPolicy policy,
                          const std::filesystem::path& out_dir, std::size_t workers = 1);

}  // namespace hyperaug
