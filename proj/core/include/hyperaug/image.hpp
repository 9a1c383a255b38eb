#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hyperaug {

/// Dense H x W x C raster of float samples, row-major and channel-last:
/// sample (row, col, k) lives at ((row * width) + col) * channels + k, so the
/// spectrum of one site is contiguous. Any channel count >= 1 is accepted.
class HyperImage {
public:
  /// Throws ErrorCode::invalid_argument on a zero dimension.
  HyperImage(std::size_t height, std::size_t width, std::size_t channels, float fill = 0.0f);
  /// Takes ownership of `data`; its length must equal height * width * channels.
  HyperImage(std::size_t height, std::size_t width, std::size_t channels, std::vector<float> data);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<const float> data() const noexcept { return data_; }
  std::span<float> data() noexcept { return data_; }

  std::size_t offset(std::size_t row, std::size_t col, std::size_t k = 0) const noexcept {
    return (row * width_ + col) * channels_ + k;
  }

  float operator()(std::size_t row, std::size_t col, std::size_t k) const noexcept {
    return data_[offset(row, col, k)];
  }
  float& operator()(std::size_t row, std::size_t col, std::size_t k) noexcept {
    return data_[offset(row, col, k)];
  }

  /// Bounds-checked access; throws ErrorCode::invalid_argument.
  float at(std::size_t row, std::size_t col, std::size_t k) const;
  float& at(std::size_t row, std::size_t col, std::size_t k);

  /// The contiguous spectrum at one site.
  std::span<const float> spectrum(std::size_t row, std::size_t col) const noexcept {
    return {data_.data() + offset(row, col), channels_};
  }

  bool same_shape(const HyperImage& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_;
  }

  /// Bitwise sample equality (so NaN payloads and signed zeros are compared exactly).
  friend bool operator==(const HyperImage& lhs, const HyperImage& rhs) noexcept;

private:
  std::size_t height_;
  std::size_t width_;
  std::size_t channels_;
  std::vector<float> data_;
};

struct LabeledSample {
  HyperImage image;
  std::size_t label_index = 0;
};

HyperImage new_image(std::size_t height, std::size_t width, std::size_t channels, float fill);

/// Stacks single-channel bands into one image; channel k of the result is bands[k].
HyperImage from_bands(std::span<const HyperImage> bands);

/// Splits an image into single-channel bands; inverse of from_bands.
std::vector<HyperImage> to_bands(const HyperImage& image);

}  // namespace hyperaug
