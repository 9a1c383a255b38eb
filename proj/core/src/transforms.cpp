#include "hyperaug/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "hyperaug/error.hpp"

namespace hyperaug {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::invalid_argument, message);
}

void require_range(double value, const char* name) {
  require(std::isfinite(value) && value >= 0.0,
          std::string(name) + " must be finite and >= 0, got " + std::to_string(value));
}

// Exact at multiples of 90 degrees.
std::pair<double, double> sincos_degrees(double degrees) {
  const double quarter = degrees / 90.0;
  if (quarter == std::floor(quarter) && std::abs(quarter) < 1e15) {
    const auto k = ((static_cast<long long>(quarter) % 4) + 4) % 4;
    constexpr double sines[] = {0.0, 1.0, 0.0, -1.0};
    constexpr double cosines[] = {1.0, 0.0, -1.0, 0.0};
    return {sines[k], cosines[k]};
  }
  const double rad = degrees * std::numbers::pi / 180.0;
  return {std::sin(rad), std::cos(rad)};
}

}  // namespace

void AugmentConfig::validate() const {
  require_range(max_rotation, "max_rotation");
  require_range(max_translation, "max_translation");
  require_range(max_shear, "max_shear");
  require_range(speckle_variance, "speckle_variance");
  require(std::isfinite(max_zoom) && max_zoom >= 1.0,
          "max_zoom must be finite and >= 1, got " + std::to_string(max_zoom));
}

bool AugmentConfig::is_identity() const noexcept {
  return *this == AugmentConfig{};
}

HyperImage flip_h(const HyperImage& image) {
  HyperImage out(image.height(), image.width(), image.channels());
  const std::size_t w = image.width();
  for (std::size_t r = 0; r < image.height(); ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      auto src = image.spectrum(r, w - 1 - c);
      std::copy(src.begin(), src.end(), out.data().begin() + out.offset(r, c));
    }
  }
  return out;
}

HyperImage flip_v(const HyperImage& image) {
  HyperImage out(image.height(), image.width(), image.channels());
  const std::size_t row_len = image.width() * image.channels();
  const std::size_t h = image.height();
  for (std::size_t r = 0; r < h; ++r) {
    auto src = image.data().subspan(image.offset(h - 1 - r, 0), row_len);
    std::copy(src.begin(), src.end(), out.data().begin() + out.offset(r, 0));
  }
  return out;
}

AffineMatrix make_affine(const AugmentParams& p, std::size_t width, std::size_t height) {
  require(std::isfinite(p.zoom) && p.zoom > 0.0, "zoom must be > 0, got " + std::to_string(p.zoom));
  require(std::isfinite(p.angle) && std::isfinite(p.dx) && std::isfinite(p.dy) &&
              std::isfinite(p.shear),
          "affine parameters must be finite");
  require(width > 0 && height > 0, "image dimensions must be >= 1");

  const auto [s, c] = sincos_degrees(p.angle);
  const double cx = (static_cast<double>(width) - 1.0) / 2.0;
  const double cy = (static_cast<double>(height) - 1.0) / 2.0;

  // Linear part of the inverse: R^-1 * Shear^-1 * Zoom^-1, with forward
  // R = [[c, s], [-s, c]] and Shear = [[1, h], [0, 1]].
  const double h = p.shear;
  const double inv_zoom = 1.0 / p.zoom;
  AffineMatrix m;
  m.a = c * inv_zoom;
  m.b = (-c * h - s) * inv_zoom;
  m.c = s * inv_zoom;
  m.d = (c - s * h) * inv_zoom;
  // x_in = L * (x_out - d - center) + center
  const double ux = p.dx + cx;
  const double uy = p.dy + cy;
  m.tx = cx - (m.a * ux + m.b * uy);
  m.ty = cy - (m.c * ux + m.d * uy);
  return m;
}

HyperImage warp_affine(const HyperImage& image, const AffineMatrix& m) {
  const std::size_t h = image.height();
  const std::size_t w = image.width();
  const std::size_t nc = image.channels();
  const double max_x = static_cast<double>(w - 1);
  const double max_y = static_cast<double>(h - 1);
  HyperImage out(h, w, nc);
  auto src = image.data();
  auto dst = out.data();

  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t col = 0; col < w; ++col) {
      auto [x, y] = m.apply(static_cast<double>(col), static_cast<double>(r));
      x = std::clamp(x, 0.0, max_x);
      y = std::clamp(y, 0.0, max_y);
      const auto x0 = static_cast<std::size_t>(x);
      const auto y0 = static_cast<std::size_t>(y);
      const std::size_t x1 = std::min(x0 + 1, w - 1);
      const std::size_t y1 = std::min(y0 + 1, h - 1);
      const double fx = x - static_cast<double>(x0);
      const double fy = y - static_cast<double>(y0);
      const double w00 = (1.0 - fx) * (1.0 - fy);
      const double w01 = fx * (1.0 - fy);
      const double w10 = (1.0 - fx) * fy;
      const double w11 = fx * fy;

      const float* p00 = src.data() + image.offset(y0, x0);
      const float* p01 = src.data() + image.offset(y0, x1);
      const float* p10 = src.data() + image.offset(y1, x0);
      const float* p11 = src.data() + image.offset(y1, x1);
      float* q = dst.data() + out.offset(r, col);
      for (std::size_t k = 0; k < nc; ++k) {
        q[k] = static_cast<float>(w00 * p00[k] + w01 * p01[k] + w10 * p10[k] + w11 * p11[k]);
      }
    }
  }
  return out;
}

HyperImage speckle(const HyperImage& image, double variance, Seed seed) {
  require(std::isfinite(variance) && variance >= 0.0,
          "speckle variance must be finite and >= 0, got " + std::to_string(variance));
  if (variance == 0.0) return image;
  const double sigma = std::sqrt(variance);
  Rng rng(seed);
  HyperImage out = image;
  for (float& v : out.data()) {
    v = static_cast<float>(static_cast<double>(v) * (1.0 + sigma * rng.gaussian()));
  }
  return out;
}

AugmentParams sample_params(const AugmentConfig& config, Seed seed, std::size_t width,
                            std::size_t height) {
  config.validate();
  Rng rng(seed);
  AugmentParams p;
  const bool coin_h = rng.uniform01() < 0.5;
  const bool coin_v = rng.uniform01() < 0.5;
  p.do_flip_h = config.flip_horizontal && coin_h;
  p.do_flip_v = config.flip_vertical && coin_v;
  p.angle = rng.uniform(-config.max_rotation, config.max_rotation);
  const double tx = config.max_translation * static_cast<double>(width);
  const double ty = config.max_translation * static_cast<double>(height);
  p.dx = rng.uniform(-tx, tx);
  p.dy = rng.uniform(-ty, ty);
  p.zoom = rng.uniform(1.0 / config.max_zoom, config.max_zoom);
  p.shear = rng.uniform(-config.max_shear, config.max_shear);
  p.speckle_variance = config.speckle_variance;
  // uniform(-0, +0) returns -0.0; normalize so identity configs give identity params.
  if (p.angle == 0.0) p.angle = 0.0;
  if (p.dx == 0.0) p.dx = 0.0;
  if (p.dy == 0.0) p.dy = 0.0;
  if (p.shear == 0.0) p.shear = 0.0;
  return p;
}

HyperImage augment_image(const HyperImage& image, const AugmentConfig& config, Seed seed) {
  const AugmentParams p = sample_params(config, seed, image.width(), image.height());
  HyperImage out = p.do_flip_h ? flip_h(image) : image;
  if (p.do_flip_v) out = flip_v(out);
  const AffineMatrix m = make_affine(p, image.width(), image.height());
  if (!m.is_identity()) out = warp_affine(out, m);
  if (p.speckle_variance > 0.0) out = speckle(out, p.speckle_variance, fold_seed(seed, 1));
  return out;
}

LabeledSample augment(const LabeledSample& sample, const AugmentConfig& config, Seed seed) {
  return {augment_image(sample.image, config, seed), sample.label_index};
}

}  // namespace hyperaug
