#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "moseg/geometry.hpp"
#include "moseg/rle.hpp"

namespace moseg {

/// The four anatomical classes, ordered as reports list them.
enum class AnatomyClass : int { thorax = 0, abdomen = 1, wing = 2, leg = 3 };

inline constexpr std::array<AnatomyClass, 4> kAnatomyClasses = {
    AnatomyClass::thorax, AnatomyClass::abdomen, AnatomyClass::wing,
    AnatomyClass::leg};

inline constexpr std::size_t kClassCount = kAnatomyClasses.size();

std::string_view class_name(AnatomyClass cls);          // "thorax", ...
std::string_view class_display_name(AnatomyClass cls);  // "Thorax", ...

/// Matches a free-text label case-insensitively; "wings" and "legs" fold to
/// their singular forms. Returns nullopt for anything else.
std::optional<AnatomyClass> parse_class_label(std::string_view label);

struct AnnotatedRegion {
  AnatomyClass cls;
  Polygon polygon;

  friend bool operator==(const AnnotatedRegion&, const AnnotatedRegion&) = default;
};

/// One labeled image. Region vertices must lie within [0, width] x [0, height].
class AnnotatedImage {
 public:
  AnnotatedImage(std::string id, GridDims dims, std::vector<AnnotatedRegion> regions);

  const std::string& id() const { return id_; }
  GridDims dims() const { return dims_; }
  const std::vector<AnnotatedRegion>& regions() const { return regions_; }

  friend bool operator==(const AnnotatedImage&, const AnnotatedImage&) = default;

 private:
  std::string id_;
  GridDims dims_;
  std::vector<AnnotatedRegion> regions_;
};

/// A set of labeled images with unique ids.
class AnnotatedDataset {
 public:
  AnnotatedDataset() = default;
  explicit AnnotatedDataset(std::vector<AnnotatedImage> images);

  const std::vector<AnnotatedImage>& images() const { return images_; }
  const AnnotatedImage* find(std::string_view id) const;

  friend bool operator==(const AnnotatedDataset&, const AnnotatedDataset&) = default;

 private:
  std::vector<AnnotatedImage> images_;
};

/// One predicted instance.
struct Detection {
  std::string image_id;
  AnatomyClass cls;
  double score;  // in [0, 1]
  BoundingBox box;
  std::optional<RleMask> mask;
};

struct ClassCounts {
  std::array<std::int64_t, kClassCount> regions{};
  std::int64_t images = 0;

  std::int64_t& operator[](AnatomyClass cls) {
    return regions[static_cast<std::size_t>(cls)];
  }
  std::int64_t operator[](AnatomyClass cls) const {
    return regions[static_cast<std::size_t>(cls)];
  }
};

/// Per-class region counts plus the image count.
ClassCounts dataset_stats(const AnnotatedDataset& ds);

}  // namespace moseg
