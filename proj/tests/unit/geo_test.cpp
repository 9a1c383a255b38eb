#include <gtest/gtest.h>

#include <fstream>

#include "hyperaug/error.hpp"
#include "hyperaug/geo.hpp"
#include "hyperaug/io.hpp"
#include "test_support.hpp"

namespace hyperaug {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

// Band 0 encodes row * W + col; band 1 is its negative.
InMemoryRaster ramp_raster(std::size_t h, std::size_t w, GeoTransform gt = {}) {
  HyperImage img(h, w, 2);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      img(r, c, 0) = static_cast<float>(r * w + c);
      img(r, c, 1) = -static_cast<float>(r * w + c);
    }
  }
  return InMemoryRaster(std::move(img), gt);
}

TEST(GeoTransform, WorldToPixel) {
  const GeoTransform unit{0, 0, 1, 1};
  EXPECT_EQ(unit.world_to_pixel(10.5, -3.5), (PixelIndex{10, 3}));
  EXPECT_EQ(unit.world_to_pixel(-0.5, 0.5), (PixelIndex{-1, -1}));
  const GeoTransform s2{300000, 5000000, 10, 10};
  EXPECT_EQ(s2.world_to_pixel(300050, 4999980), (PixelIndex{5, 2}));
}

TEST(GeoTransform, PixelCentersRoundTrip) {
  const GeoTransform gt{500000, 4200000, 10, 20};
  for (std::int64_t r = 0; r < 50; ++r) {
    for (std::int64_t c = 0; c < 50; ++c) {
      const auto [x, y] = gt.pixel_to_world(c, r);
      ASSERT_EQ(gt.world_to_pixel(x, y), (PixelIndex{c, r}));
    }
  }
}

TEST(GeoTransform, SaturatesFarAway) {
  const GeoTransform gt{0, 0, 1e-9, 1e-9};
  const auto p = gt.world_to_pixel(1e300, -1e300);
  EXPECT_EQ(p.col, std::numeric_limits<std::int64_t>::max());
  EXPECT_EQ(p.row, std::numeric_limits<std::int64_t>::max());
}

TEST(GeoTransform, RejectsNonPositivePixels) {
  EXPECT_THROW((GeoTransform{0, 0, 0, 1}.validate()), Error);
  EXPECT_THROW(InMemoryRaster(HyperImage(1, 1, 1), GeoTransform{0, 0, 1, -1}), Error);
}

TEST(Raster, FullWindowIsWholeRaster) {
  const auto raster = ramp_raster(9, 7);
  EXPECT_EQ(raster.read_window(0, 0, 9, 7), raster.image());
  EXPECT_THROW(raster.read_window(5, 0, 5, 7), Error);
  EXPECT_THROW(raster.read_window(0, 0, 0, 1), Error);
}

TEST(ExtractPatch, InteriorWindowArithmetic) {
  const auto raster = ramp_raster(128, 128);
  const auto result = extract_patch(raster, 64, 64, 64, BorderPolicy::skip);
  const auto& patch = std::get<HyperImage>(result);
  ASSERT_EQ(patch.height(), 64u);
  for (std::size_t i = 0; i < 64; ++i)
    for (std::size_t j = 0; j < 64; ++j)
      ASSERT_EQ(patch(i, j, 0), static_cast<float>((32 + i) * 128 + 32 + j));
}

TEST(ExtractPatch, OddSizeIsCentered) {
  const auto raster = ramp_raster(10, 10);
  const auto patch = std::get<HyperImage>(extract_patch(raster, 5, 4, 3, BorderPolicy::skip));
  EXPECT_EQ(patch(1, 1, 0), 45.0f);
  EXPECT_EQ(patch(0, 0, 0), 34.0f);
}

TEST(ExtractPatch, SkipPolicyAtBorder) {
  const auto raster = ramp_raster(128, 128);
  const auto result = extract_patch(raster, 10, 10, 64, BorderPolicy::skip);
  ASSERT_TRUE(std::holds_alternative<SkipNotice>(result));
  EXPECT_NE(std::get<SkipNotice>(result).reason.find("[-22,42)"), std::string::npos);
  EXPECT_TRUE(std::holds_alternative<SkipNotice>(extract_patch(raster, 64, 64, 200, BorderPolicy::skip)));
}

TEST(ExtractPatch, EdgePadConstantRaster) {
  const InMemoryRaster raster(HyperImage(8, 8, 3, 7.0f), GeoTransform{});
  const auto patch = std::get<HyperImage>(extract_patch(raster, 0, 0, 4, BorderPolicy::edge_pad));
  EXPECT_EQ(patch, HyperImage(4, 4, 3, 7.0f));
}

TEST(ExtractPatch, EdgePadReplicatesNearestPixels) {
  const auto raster = ramp_raster(6, 6);
  const auto patch = std::get<HyperImage>(extract_patch(raster, 0, 5, 4, BorderPolicy::edge_pad));
  // Window rows [3,7) cols [-2,2).
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const std::size_t r = std::min<std::size_t>(3 + i, 5);
      const std::size_t c = j < 2 ? 0 : j - 2;
      ASSERT_EQ(patch(i, j, 0), static_cast<float>(r * 6 + c));
      ASSERT_EQ(patch(i, j, 1), -static_cast<float>(r * 6 + c));
    }
  }
}

TEST(ExtractPatch, CenterOutsideRasterIsSkipped) {
  const auto raster = ramp_raster(6, 6);
  EXPECT_TRUE(std::holds_alternative<SkipNotice>(extract_patch(raster, -1, 2, 2, BorderPolicy::edge_pad)));
  EXPECT_TRUE(std::holds_alternative<SkipNotice>(extract_patch(raster, 2, 6, 2, BorderPolicy::skip)));
  EXPECT_THROW(extract_patch(raster, 2, 2, 0, BorderPolicy::skip), Error);
}

std::vector<PointRecord> points_at(const GeoTransform& gt,
                                   std::initializer_list<std::pair<int, int>> cols_rows) {
  std::vector<PointRecord> points;
  std::int32_t n = 1;
  for (auto [c, r] : cols_rows) {
    const auto [x, y] = gt.pixel_to_world(c, r);
    points.push_back({n++, x, y, std::nullopt});
  }
  return points;
}

TEST(ExtractAll, WritesEveryInBoundsPoint) {
  TempDir out;
  const GeoTransform gt{1000, 2000, 2, 2};
  const auto raster = ramp_raster(32, 32, gt);
  const auto points = points_at(gt, {{8, 8}, {16, 16}, {20, 10}});
  const auto report = extract_all(raster, points, 8, BorderPolicy::skip, out.path());
  EXPECT_EQ(report.written, 3u);
  EXPECT_TRUE(report.skipped.empty());
  const auto patch = io::load_patch(out / "000002.hsb");
  EXPECT_EQ(patch, std::get<HyperImage>(extract_patch(raster, 16, 16, 8, BorderPolicy::skip)));
}

TEST(ExtractAll, SkipsBorderPointUnderSkip) {
  TempDir out;
  const GeoTransform gt{0, 0, 1, 1};
  const auto raster = ramp_raster(32, 32, gt);
  const auto points = points_at(gt, {{8, 8}, {16, 16}, {1, 1}});
  const auto report = extract_all(raster, points, 8, BorderPolicy::skip, out.path(), 3);
  EXPECT_EQ(report.written, 2u);
  EXPECT_EQ(report.skipped, (std::vector<std::int32_t>{3}));
  EXPECT_EQ(report.skip_reasons.size(), 1u);
  EXPECT_FALSE(fs::exists(out / "000003.hsb"));
}

TEST(ExtractAll, LabelSubfolders) {
  TempDir out;
  const GeoTransform gt{0, 0, 1, 1};
  const auto raster = ramp_raster(32, 32, gt);
  auto points = points_at(gt, {{8, 8}, {16, 16}, {20, 20}});
  points[0].label = "park";
  points[1].label = "park";
  points[2].label = "water";
  const auto report = extract_all(raster, points, 4, BorderPolicy::skip, out.path());
  EXPECT_EQ(report.written, 3u);
  EXPECT_TRUE(fs::exists(out / "park" / "000001.hsb"));
  EXPECT_TRUE(fs::exists(out / "park" / "000002.hsb"));
  EXPECT_TRUE(fs::exists(out / "water" / "000003.hsb"));
}

TEST(ExtractAll, Errors) {
  TempDir out;
  const auto raster = ramp_raster(8, 8);
  const std::vector<PointRecord> dup{{1, 1, -1, {}}, {1, 2, -2, {}}};
  EXPECT_THROW(extract_all(raster, dup, 2, BorderPolicy::skip, out.path()), Error);
  std::ofstream(out / "file") << "x";
  try {
    extract_all(raster, std::vector<PointRecord>{}, 2, BorderPolicy::skip, out / "file" / "sub");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::io);
  }
}

TEST(BandRaster, LoadsSidecarInChannelOrder) {
  TempDir dir;
  io::save_hsb(dir / "B02.hsb", HyperImage(3, 4, 1, 2.0f));
  io::save_npy(dir / "B01.npy", HyperImage(3, 4, 1, 1.0f));
  std::ofstream(dir / "scene.json") << R"({"origin_x": 10, "origin_y": 20, "pixel_width": 0.5,
    "pixel_height": 0.25, "bands": ["B01.npy", "B02.hsb"]})";
  const auto raster = load_band_raster(dir / "scene.json");
  EXPECT_EQ(raster.channels(), 2u);
  EXPECT_EQ(raster.image()(2, 3, 0), 1.0f);
  EXPECT_EQ(raster.image()(2, 3, 1), 2.0f);
  EXPECT_EQ(raster.geotransform().pixel_height, 0.25);
}

TEST(BandRaster, DecoderHookAndErrors) {
  TempDir dir;
  io::save_hsb(dir / "B01.hsb", HyperImage(2, 2, 1, 1.0f));
  std::ofstream(dir / "B02.jp2") << "not really";
  std::ofstream(dir / "scene.json") << R"({"origin_x": 0, "origin_y": 0, "pixel_width": 1,
    "pixel_height": 1, "bands": ["B01.hsb", "B02.jp2"]})";
  EXPECT_THROW(load_band_raster(dir / "scene.json"), Error);
  std::vector<fs::path> seen;
  const auto raster = load_band_raster(dir / "scene.json", [&](const fs::path& p) {
    seen.push_back(p);
    return HyperImage(2, 2, 1, 9.0f);
  });
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_EQ(seen[0].filename(), "B02.jp2");
  EXPECT_EQ(raster.image()(1, 1, 1), 9.0f);

  std::ofstream(dir / "bad.json") << R"({"origin_x": 0})";
  EXPECT_THROW(load_band_raster(dir / "bad.json"), Error);
  std::ofstream(dir / "mismatch.json") << R"({"origin_x": 0, "origin_y": 0, "pixel_width": 1,
    "pixel_height": 1, "bands": ["B01.hsb", "B03.hsb"]})";
  io::save_hsb(dir / "B03.hsb", HyperImage(3, 2, 1));
  EXPECT_THROW(load_band_raster(dir / "mismatch.json"), Error);
}

}  // namespace
}  // namespace hyperaug
