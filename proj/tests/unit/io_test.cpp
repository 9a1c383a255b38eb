#include <gtest/gtest.h>

#include "hyperaug/error.hpp"
#include "hyperaug/io.hpp"
#include "test_support.hpp"

namespace hyperaug {
namespace {

using testing::TempDir;

std::vector<std::byte> bytes_of(std::initializer_list<unsigned> values) {
  std::vector<std::byte> out;
  for (unsigned v : values) out.push_back(static_cast<std::byte>(v));
  return out;
}

TEST(Hsb, EncodesExactLayout) {
  const HyperImage img(1, 2, 1, std::vector<float>{1.0f, -2.0f});
  const auto expected = bytes_of({'H', 'S', 'B', '1', 1, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0,
                                  0x00, 0x00, 0x80, 0x3f, 0x00, 0x00, 0x00, 0xc0});
  EXPECT_EQ(io::encode_hsb(img), expected);
}

TEST(Hsb, RoundTripPreservesBits) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto img = testing::random_image(gen, 1 + gen() % 7, 1 + gen() % 7, 1 + gen() % 13);
    EXPECT_EQ(io::decode_hsb(io::encode_hsb(img)), img);
  }
}

TEST(Hsb, RejectsBadBuffers) {
  auto good = io::encode_hsb(HyperImage(2, 2, 3, 1.0f));
  auto bad_magic = good;
  bad_magic[3] = std::byte{'2'};
  EXPECT_THROW(io::decode_hsb(bad_magic), Error);
  auto short_payload = good;
  short_payload.pop_back();
  EXPECT_THROW(io::decode_hsb(short_payload), Error);
  EXPECT_THROW(io::decode_hsb(std::span(good).first(10)), Error);
  auto zero_dim = good;
  zero_dim[4] = std::byte{0};
  EXPECT_THROW(io::decode_hsb(zero_dim), Error);
}

TEST(Npy, ReadsNumpyFloat32) {
  const auto img = io::load_patch(testing::fixture("ramp_3x4x13_f4.npy"));
  ASSERT_EQ(img.height(), 3u);
  ASSERT_EQ(img.width(), 4u);
  ASSERT_EQ(img.channels(), 13u);
  EXPECT_EQ(img(2, 3, 12), 242.0f);
  EXPECT_EQ(img(1, 0, 5), 105.0f);
}

TEST(Npy, ReadsWiderAndIntegerDtypesWithoutScaling) {
  EXPECT_EQ(io::load_patch(testing::fixture("ramp_3x4x13_f8.npy")),
            io::load_patch(testing::fixture("ramp_3x4x13_f4.npy")));
  const auto band = io::load_patch(testing::fixture("band_2x3_u2.npy"));
  ASSERT_EQ(band.channels(), 1u);
  EXPECT_EQ(band(1, 2, 0), 5000.0f);
}

TEST(Npy, RejectsFortranOrder) {
  EXPECT_THROW(io::load_patch(testing::fixture("fortran_2x2.npy")), Error);
}

TEST(Npy, WriterOutputIsReadableAndAligned) {
  std::mt19937_64 gen(4);
  const auto img = testing::random_image(gen, 5, 6, 13);
  const auto bytes = io::encode_npy(img);
  const std::size_t header = static_cast<std::size_t>(bytes[8]) | (static_cast<std::size_t>(bytes[9]) << 8);
  EXPECT_EQ((10 + header) % 64, 0u);
  EXPECT_EQ(static_cast<char>(bytes[10 + header - 1]), '\n');
  EXPECT_EQ(io::decode_npy(bytes), img);
}

TEST(Files, LoadPatchErrorsNameThePath) {
  TempDir dir;
  const auto missing = dir / "nope.hsb";
  try {
    io::load_patch(missing);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::io);
    EXPECT_NE(std::string(e.what()).find("nope.hsb"), std::string::npos);
  }
  const auto junk = dir / "junk.hsb";
  const auto junk_bytes = bytes_of({1, 2, 3});
  io::write_file(junk, junk_bytes);
  try {
    io::load_patch(junk);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::format);
    EXPECT_NE(std::string(e.what()).find("junk.hsb"), std::string::npos);
  }
}

TEST(Files, SaveAndLoadBothFormats) {
  TempDir dir;
  std::mt19937_64 gen(12);
  const auto img = testing::random_image(gen, 4, 3, 13);
  io::save_hsb(dir / "a.hsb", img);
  io::save_npy(dir / "a.npy", img);
  EXPECT_EQ(io::load_patch(dir / "a.hsb"), img);
  EXPECT_EQ(io::load_patch(dir / "a.npy"), img);
  EXPECT_FALSE(std::filesystem::exists(dir / "a.hsb.part"));
}

}  // namespace
}  // namespace hyperaug
