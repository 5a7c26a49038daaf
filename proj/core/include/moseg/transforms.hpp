#pragma once

#include <cstdint>

#include "moseg/dataset.hpp"

namespace moseg {

inline constexpr int kDefaultTargetSide = 1024;

/// Scales polygon vertices by (target.width / dims.width,
/// target.height / dims.height) and replaces the image dimensions.
/// Without an explicit target, scales to 1024x1024.
AnnotatedImage rescale(const AnnotatedImage& img, GridDims target);
AnnotatedImage rescale(const AnnotatedImage& img);

/// Mirrors every vertex left-to-right: x' = width - x.
AnnotatedImage hflip(const AnnotatedImage& img);

/// Separable Gaussian convolution, kernel truncated at radius ceil(3*sigma)
/// and normalized, reflect padding at the borders. Throws ValidationError for
/// sigma <= 0.
FloatGrid gaussian_blur(const FloatGrid& grid, double sigma);

struct AugmentConfig {
  std::uint64_t seed = 0;
  double flip_prob = 0.5;
  double sigma_min = 0.5;  // blur strength drawn per copy
  double sigma_max = 2.0;
  int copies = 2;  // extra copies per image
};

/// Emits each image followed by `copies` augmented versions of it (ids get a
/// "#aug<k>" suffix). Each copy flips with probability flip_prob and draws a
/// blur sigma from [sigma_min, sigma_max]; the sigma parameterizes the
/// photometric pipeline and leaves the annotations untouched. Deterministic:
/// copy k of image i uses the stream Rng::mix(seed, i * copies + k).
AnnotatedDataset augment(const AnnotatedDataset& ds, const AugmentConfig& cfg);

}  // namespace moseg
