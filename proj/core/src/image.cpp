#include "hyperaug/image.hpp"

#include <cstring>
#include <string>

#include "hyperaug/error.hpp"

namespace hyperaug {
namespace {

void check_dims(std::size_t height, std::size_t width, std::size_t channels) {
  if (height == 0 || width == 0 || channels == 0) {
    throw Error(ErrorCode::invalid_argument,
                "image dimensions must be >= 1, got " + std::to_string(height) + "x" +
                    std::to_string(width) + "x" + std::to_string(channels));
  }
}

std::string shape_string(const HyperImage& img) {
  return std::to_string(img.height()) + "x" + std::to_string(img.width()) + "x" +
         std::to_string(img.channels());
}

}  // namespace

HyperImage::HyperImage(std::size_t height, std::size_t width, std::size_t channels, float fill)
    : height_(height), width_(width), channels_(channels) {
  check_dims(height, width, channels);
  data_.assign(height * width * channels, fill);
}

HyperImage::HyperImage(std::size_t height, std::size_t width, std::size_t channels,
                       std::vector<float> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  check_dims(height, width, channels);
  if (data_.size() != height * width * channels) {
    throw Error(ErrorCode::shape_mismatch,
                "sample buffer holds " + std::to_string(data_.size()) + " values, shape needs " +
                    std::to_string(height * width * channels));
  }
}

float HyperImage::at(std::size_t row, std::size_t col, std::size_t k) const {
  if (row >= height_ || col >= width_ || k >= channels_) {
    throw Error(ErrorCode::invalid_argument, "sample index out of range");
  }
  return (*this)(row, col, k);
}

float& HyperImage::at(std::size_t row, std::size_t col, std::size_t k) {
  if (row >= height_ || col >= width_ || k >= channels_) {
    throw Error(ErrorCode::invalid_argument, "sample index out of range");
  }
  return (*this)(row, col, k);
}

bool operator==(const HyperImage& lhs, const HyperImage& rhs) noexcept {
  return lhs.same_shape(rhs) &&
         std::memcmp(lhs.data_.data(), rhs.data_.data(), lhs.data_.size() * sizeof(float)) == 0;
}

HyperImage new_image(std::size_t height, std::size_t width, std::size_t channels, float fill) {
  return HyperImage(height, width, channels, fill);
}

HyperImage from_bands(std::span<const HyperImage> bands) {
  if (bands.empty()) {
    throw Error(ErrorCode::invalid_argument, "from_bands needs at least one band");
  }
  const auto& first = bands.front();
  for (std::size_t k = 0; k < bands.size(); ++k) {
    const auto& band = bands[k];
    if (band.channels() != 1 || band.height() != first.height() || band.width() != first.width()) {
      throw Error(ErrorCode::shape_mismatch, "band " + std::to_string(k) + " is " +
                                                 shape_string(band) + ", expected " +
                                                 std::to_string(first.height()) + "x" +
                                                 std::to_string(first.width()) + "x1");
    }
  }
  HyperImage out(first.height(), first.width(), bands.size());
  auto dst = out.data();
  const std::size_t sites = first.height() * first.width();
  const std::size_t nb = bands.size();
  for (std::size_t k = 0; k < nb; ++k) {
    auto src = bands[k].data();
    for (std::size_t i = 0; i < sites; ++i) dst[i * nb + k] = src[i];
  }
  return out;
}

std::vector<HyperImage> to_bands(const HyperImage& image) {
  const std::size_t sites = image.height() * image.width();
  const std::size_t nc = image.channels();
  auto src = image.data();
  std::vector<HyperImage> bands;
  bands.reserve(nc);
  for (std::size_t k = 0; k < nc; ++k) {
    HyperImage band(image.height(), image.width(), 1);
    auto dst = band.data();
    for (std::size_t i = 0; i < sites; ++i) dst[i] = src[i * nc + k];
    bands.push_back(std::move(band));
  }
  return bands;
}

}  // namespace hyperaug
