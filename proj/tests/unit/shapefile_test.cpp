#include <gtest/gtest.h>

#include <random>

#include "hyperaug/error.hpp"
#include "hyperaug/io.hpp"
#include "hyperaug/shapefile.hpp"
#include "test_support.hpp"

namespace hyperaug {
namespace {

std::vector<std::byte> load(const std::string& name) { return io::read_file(testing::fixture(name)); }

ErrorCode parse_error(std::span<const std::byte> bytes, std::string* message = nullptr) {
  try {
    parse_shapefile_points(bytes);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "parse succeeded";
  return ErrorCode::format;
}

void set_file_length(std::vector<std::byte>& bytes, std::size_t length_bytes) {
  const auto words = static_cast<std::uint32_t>(length_bytes / 2);
  for (int i = 0; i < 4; ++i) bytes[24 + i] = static_cast<std::byte>(words >> (8 * (3 - i)));
}

TEST(Shapefile, OnePoint) {
  const auto points = parse_shapefile_points(load("one_point.shp"));
  ASSERT_EQ(points.size(), 1u);
  EXPECT_EQ(points[0], (PointRecord{1, 5.0, 7.0, std::nullopt}));
}

TEST(Shapefile, HeaderOnlyIsEmpty) {
  const auto bytes = load("no_points.shp");
  ASSERT_EQ(bytes.size(), 100u);
  EXPECT_TRUE(parse_shapefile_points(bytes).empty());
}

TEST(Shapefile, PointZIgnoresZ) {
  const auto points = read_shapefile_points(testing::fixture("pointz.shp"));
  ASSERT_EQ(points.size(), 2u);
  EXPECT_EQ(points[0], (PointRecord{1, 1.5, -2.25, std::nullopt}));
  EXPECT_EQ(points[1], (PointRecord{2, 300010.0, 4999990.0, std::nullopt}));
}

TEST(Shapefile, RejectsPolygon) {
  std::string message;
  EXPECT_EQ(parse_error(load("polygon.shp"), &message), ErrorCode::unsupported_geometry);
  EXPECT_NE(message.find("5"), std::string::npos);
  EXPECT_NE(message.find("Polygon"), std::string::npos);
}

TEST(Shapefile, RejectsWrongMagic) {
  auto bytes = load("one_point.shp");
  bytes[3] = std::byte{0x0b};
  EXPECT_EQ(parse_error(bytes), ErrorCode::not_a_shapefile);
}

TEST(Shapefile, TruncationsReportOffsets) {
  const auto bytes = load("one_point.shp");
  ASSERT_EQ(bytes.size(), 128u);
  std::string message;

  EXPECT_EQ(parse_error(std::span(bytes).first(50), &message), ErrorCode::truncated);
  EXPECT_NE(message.find("offset 50"), std::string::npos) << message;

  EXPECT_EQ(parse_error(std::span(bytes).first(104), &message), ErrorCode::truncated);
  EXPECT_NE(message.find("offset 104"), std::string::npos) << message;

  // Header patched to agree with the cut, so the record itself is short.
  std::vector<std::byte> cut(bytes.begin(), bytes.begin() + 120);
  set_file_length(cut, 120);
  EXPECT_EQ(parse_error(cut, &message), ErrorCode::truncated);
  EXPECT_NE(message.find("offset 100"), std::string::npos) << message;
}

TEST(Shapefile, RandomTruncationAndCorruptionNeverCrash) {
  std::mt19937_64 gen(2718);
  const std::vector<std::vector<std::byte>> seeds{load("one_point.shp"), load("pointz.shp"),
                                                  load("five_points.shp"), load("no_points.shp")};
  for (int i = 0; i < 10000; ++i) {
    auto bytes = seeds[gen() % seeds.size()];
    bytes.resize(gen() % (bytes.size() + 1));
    if (i % 2 == 1 && !bytes.empty()) {
      for (int flips = 0; flips < 3; ++flips) bytes[gen() % bytes.size()] = static_cast<std::byte>(gen());
    }
    try {
      parse_shapefile_points(bytes);
    } catch (const Error&) {
    }
  }
}

TEST(LabelsCsv, ParsesAndAttaches) {
  const auto labels = parse_labels_csv("record,label\r\n1,park\n3, water \n");
  ASSERT_EQ(labels.size(), 2u);
  std::vector<PointRecord> points{{1, 0, 0, {}}, {2, 0, 0, {}}, {3, 0, 0, {}}};
  attach_labels(points, labels);
  EXPECT_EQ(points[0].label, "park");
  EXPECT_FALSE(points[1].label.has_value());
  EXPECT_EQ(points[2].label, "water");
}

TEST(LabelsCsv, Rejects) {
  EXPECT_THROW(parse_labels_csv(""), Error);
  EXPECT_THROW(parse_labels_csv("id,name\n1,a\n"), Error);
  EXPECT_THROW(parse_labels_csv("record,label\nx,a\n"), Error);
  EXPECT_THROW(parse_labels_csv("record,label\n1,../etc\n"), Error);
  EXPECT_THROW(parse_labels_csv("record,label\n1,a\n1,b\n"), Error);
}

}  // namespace
}  // namespace hyperaug
