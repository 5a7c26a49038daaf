#include "moseg/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "moseg/rng.hpp"

namespace moseg {

namespace {

AnnotatedImage map_vertices(const AnnotatedImage& img, GridDims dims, auto&& fn) {
  std::vector<AnnotatedRegion> regions;
  regions.reserve(img.regions().size());
  for (const AnnotatedRegion& region : img.regions()) {
    std::vector<Point> vs = region.polygon.vertices();
    for (Point& p : vs) p = fn(p);
    regions.push_back({region.cls, Polygon(std::move(vs))});
  }
  return AnnotatedImage(img.id(), dims, std::move(regions));
}

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-0.5 * (i / sigma) * (i / sigma));
    kernel[static_cast<std::size_t>(i + radius)] = w;
    sum += w;
  }
  for (double& w : kernel) w /= sum;
  return kernel;
}

// Reflect index into [0, n): ... 2 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
int reflect(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

}  // namespace

AnnotatedImage rescale(const AnnotatedImage& img, GridDims target) {
  const double sx = static_cast<double>(target.width) / img.dims().width;
  const double sy = static_cast<double>(target.height) / img.dims().height;
  return map_vertices(img, target, [&](Point p) {
    // Clamp: x * sx may overshoot target.width by one ulp.
    return Point{std::clamp(p.x * sx, 0.0, static_cast<double>(target.width)),
                 std::clamp(p.y * sy, 0.0, static_cast<double>(target.height))};
  });
}

AnnotatedImage rescale(const AnnotatedImage& img) {
  return rescale(img, GridDims(kDefaultTargetSide, kDefaultTargetSide));
}

AnnotatedImage hflip(const AnnotatedImage& img) {
  const double width = img.dims().width;
  return map_vertices(img, img.dims(),
                      [&](Point p) { return Point{width - p.x, p.y}; });
}

FloatGrid gaussian_blur(const FloatGrid& grid, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ValidationError("gaussian_blur: sigma must be positive and finite");
  }
  const std::vector<double> kernel = gaussian_kernel(sigma);
  const int radius = static_cast<int>(kernel.size() / 2);
  const int w = grid.width();
  const int h = grid.height();

  FloatGrid rows(grid.dims);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[static_cast<std::size_t>(k + radius)] *
               grid.at(reflect(x + k, w), y);
      }
      rows.at(x, y) = acc;
    }
  }
  FloatGrid out(grid.dims);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[static_cast<std::size_t>(k + radius)] *
               rows.at(x, reflect(y + k, h));
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

AnnotatedDataset augment(const AnnotatedDataset& ds, const AugmentConfig& cfg) {
  std::vector<AnnotatedImage> images;
  images.reserve(ds.images().size() * (1 + static_cast<std::size_t>(cfg.copies)));
  for (std::size_t i = 0; i < ds.images().size(); ++i) {
    const AnnotatedImage& original = ds.images()[i];
    images.push_back(original);
    for (int k = 0; k < cfg.copies; ++k) {
      Rng rng(Rng::mix(cfg.seed, i * static_cast<std::uint64_t>(cfg.copies) + k));
      const bool flip = rng.bernoulli(cfg.flip_prob);
      (void)rng.uniform(cfg.sigma_min, cfg.sigma_max);  // photometric only
      AnnotatedImage copy = flip ? hflip(original) : original;
      images.emplace_back(original.id() + "#aug" + std::to_string(k + 1),
                          copy.dims(), copy.regions());
    }
  }
  return AnnotatedDataset(std::move(images));
}

}  // namespace moseg
