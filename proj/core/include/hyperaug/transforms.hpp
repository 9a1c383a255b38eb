#pragma once

#include <cstddef>
#include <utility>

#include "hyperaug/image.hpp"
#include "hyperaug/random.hpp"

namespace hyperaug {

/// User-facing augmentation ranges. The default-constructed value is the
/// identity configuration.
struct AugmentConfig {
  bool flip_horizontal = false;
  bool flip_vertical = false;
  double max_rotation = 0.0;     ///< degrees, angle drawn from [-max, +max]
  double max_translation = 0.0;  ///< fraction of width (dx) and height (dy), per axis
  double max_zoom = 1.0;         ///< >= 1, zoom drawn from [1/max, max]
  double max_shear = 0.0;        ///< x-shear coefficient drawn from [-max, +max]
  double speckle_variance = 0.0;

  /// Throws ErrorCode::invalid_argument on a negative range, a non-finite
  /// value, or max_zoom < 1.
  void validate() const;
  bool is_identity() const noexcept;

  friend bool operator==(const AugmentConfig&, const AugmentConfig&) = default;
};

/// One concrete draw from an AugmentConfig.
struct AugmentParams {
  bool do_flip_h = false;
  bool do_flip_v = false;
  double angle = 0.0;  ///< degrees, positive turns content counter-clockwise on screen
  double dx = 0.0;     ///< pixels, positive moves content right
  double dy = 0.0;     ///< pixels, positive moves content down
  double zoom = 1.0;   ///< > 1 magnifies content
  double shear = 0.0;  ///< forward map x' = x + shear * y
  double speckle_variance = 0.0;

  friend bool operator==(const AugmentParams&, const AugmentParams&) = default;
};

/// Output-to-input coordinate map:
///   x_in = a * x_out + b * y_out + tx
///   y_in = c * x_out + d * y_out + ty
/// Coordinates are pixel centers: column index for x, row index for y.
struct AffineMatrix {
  double a = 1.0, b = 0.0, tx = 0.0;
  double c = 0.0, d = 1.0, ty = 0.0;

  std::pair<double, double> apply(double x, double y) const noexcept {
    return {a * x + b * y + tx, c * x + d * y + ty};
  }
  double determinant() const noexcept { return a * d - b * c; }
  bool is_identity() const noexcept {
    return a == 1.0 && b == 0.0 && tx == 0.0 && c == 0.0 && d == 1.0 && ty == 0.0;
  }

  friend bool operator==(const AffineMatrix&, const AffineMatrix&) = default;
};

/// out(r, c, k) = in(r, W-1-c, k)
HyperImage flip_h(const HyperImage& image);
/// out(r, c, k) = in(H-1-r, c, k)
HyperImage flip_v(const HyperImage& image);

/// Composes the forward transform rotate -> shear -> zoom about the image
/// center ((W-1)/2, (H-1)/2), then translate by (dx, dy), and returns its
/// inverse as an output-to-input map. Angles that are multiples of 90 degrees
/// use exact sines and cosines. Throws on zoom <= 0 or non-finite params.
AffineMatrix make_affine(const AugmentParams& params, std::size_t width, std::size_t height);

/// Resamples every channel on the same grid with bilinear interpolation.
/// Source coordinates are clamped to [0, W-1] x [0, H-1], which replicates
/// edge pixels into out-of-frame regions. Output shape equals input shape.
HyperImage warp_affine(const HyperImage& image, const AffineMatrix& m);

/// out = in * (1 + n), n ~ N(0, variance) i.i.d. per sample, drawn in
/// storage order from Rng(seed). Variance 0 returns the input unchanged.
HyperImage speckle(const HyperImage& image, double variance, Seed seed);

/// Draws one AugmentParams. Draw order is fixed (flip_h, flip_v, angle, dx,
/// dy, zoom, shear) and every draw is consumed even when its technique is
/// disabled, so toggling one technique does not reshuffle the others.
AugmentParams sample_params(const AugmentConfig& config, Seed seed, std::size_t width,
                            std::size_t height);

/// flips -> one composed affine warp -> speckle. The label is carried
/// through untouched. The speckle stream is seeded from fold_seed(seed, 1)
/// so it is independent of the parameter draws.
LabeledSample augment(const LabeledSample& sample, const AugmentConfig& config, Seed seed);
HyperImage augment_image(const HyperImage& image, const AugmentConfig& config, Seed seed);

}  // namespace hyperaug
