#pragma once

// Fixture builders shared across the test files.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "moseg/dataset.hpp"
#include "moseg/rng.hpp"

namespace helpers {

inline moseg::Polygon rect_polygon(double x, double y, double w, double h) {
  return moseg::Polygon({{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}});
}

inline moseg::AnnotatedImage image_with(
    std::string id, moseg::GridDims dims,
    std::vector<std::pair<moseg::AnatomyClass, moseg::Polygon>> regions) {
  std::vector<moseg::AnnotatedRegion> rs;
  rs.reserve(regions.size());
  for (auto& [cls, poly] : regions) {
    rs.push_back({cls, std::move(poly)});
  }
  return moseg::AnnotatedImage(std::move(id), dims, std::move(rs));
}

/// A dataset with the requested number of single-region images per class.
inline moseg::AnnotatedDataset dataset_with_counts(int thorax, int abdomen,
                                                   int wing, int leg) {
  using moseg::AnatomyClass;
  std::vector<moseg::AnnotatedImage> images;
  int serial = 0;
  const auto add = [&](AnatomyClass cls, int count) {
    for (int i = 0; i < count; ++i) {
      images.push_back(image_with(
          "img" + std::to_string(serial++) + ".jpg", moseg::GridDims(64, 64),
          {{cls, rect_polygon(8, 8, 16, 16)}}));
    }
  };
  add(AnatomyClass::thorax, thorax);
  add(AnatomyClass::abdomen, abdomen);
  add(AnatomyClass::wing, wing);
  add(AnatomyClass::leg, leg);
  return moseg::AnnotatedDataset(std::move(images));
}

/// 27 images shaped like a held-out test set: one thorax and one abdomen
/// each, 48 wings and 105 legs spread across the images.
inline moseg::AnnotatedDataset test_set_fixture() {
  using moseg::AnatomyClass;
  std::vector<moseg::AnnotatedImage> images;
  for (int i = 0; i < 27; ++i) {
    std::vector<std::pair<AnatomyClass, moseg::Polygon>> regions;
    regions.emplace_back(AnatomyClass::thorax, rect_polygon(10, 10, 20, 20));
    regions.emplace_back(AnatomyClass::abdomen, rect_polygon(40, 10, 30, 20));
    const int wings = i < 21 ? 2 : 1;  // 21 * 2 + 6 = 48
    for (int w = 0; w < wings; ++w) {
      regions.emplace_back(AnatomyClass::wing,
                           rect_polygon(10 + 40 * w, 40, 30, 15));
    }
    const int legs = i < 24 ? 4 : 3;  // 24 * 4 + 3 * 3 = 105
    for (int l = 0; l < legs; ++l) {
      regions.emplace_back(AnatomyClass::leg,
                           rect_polygon(5 + 25 * l, 70, 3, 40));
    }
    images.push_back(image_with("specimen" + std::to_string(i) + ".jpg",
                                moseg::GridDims(128, 128), std::move(regions)));
  }
  return moseg::AnnotatedDataset(std::move(images));
}

inline moseg::BitMask random_mask(moseg::Rng& rng, int width, int height,
                                  double fill = 0.3) {
  moseg::BitMask mask(moseg::GridDims(width, height));
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (rng.bernoulli(fill)) mask.set(x, y);
    }
  }
  return mask;
}

/// Convex polygon: random points on an ellipse, sorted by angle.
inline moseg::Polygon random_convex_polygon(moseg::Rng& rng, double center_x,
                                            double center_y, double radius_x,
                                            double radius_y, int vertices) {
  std::vector<double> angles;
  angles.reserve(static_cast<std::size_t>(vertices));
  for (int i = 0; i < vertices; ++i) {
    angles.push_back(rng.uniform(0.0, 2.0 * 3.141592653589793));
  }
  std::sort(angles.begin(), angles.end());
  std::vector<moseg::Point> pts;
  pts.reserve(angles.size());
  for (const double a : angles) {
    pts.push_back({center_x + radius_x * std::cos(a), center_y + radius_y * std::sin(a)});
  }
  return moseg::Polygon(std::move(pts));
}

}  // namespace helpers
