#include "moseg/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace moseg {

std::string_view class_name(AnatomyClass cls) {
  switch (cls) {
    case AnatomyClass::thorax: return "thorax";
    case AnatomyClass::abdomen: return "abdomen";
    case AnatomyClass::wing: return "wing";
    case AnatomyClass::leg: return "leg";
  }
  return "";
}

std::string_view class_display_name(AnatomyClass cls) {
  switch (cls) {
    case AnatomyClass::thorax: return "Thorax";
    case AnatomyClass::abdomen: return "Abdomen";
    case AnatomyClass::wing: return "Wing";
    case AnatomyClass::leg: return "Leg";
  }
  return "";
}

std::optional<AnatomyClass> parse_class_label(std::string_view label) {
  std::string lower(label);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "thorax") return AnatomyClass::thorax;
  if (lower == "abdomen") return AnatomyClass::abdomen;
  if (lower == "wing" || lower == "wings") return AnatomyClass::wing;
  if (lower == "leg" || lower == "legs") return AnatomyClass::leg;
  return std::nullopt;
}

AnnotatedImage::AnnotatedImage(std::string id, GridDims dims,
                               std::vector<AnnotatedRegion> regions)
    : id_(std::move(id)), dims_(dims), regions_(std::move(regions)) {
  if (id_.empty()) {
    throw ValidationError("image id must not be empty");
  }
  for (const AnnotatedRegion& region : regions_) {
    for (const Point& p : region.polygon.vertices()) {
      if (p.x < 0.0 || p.x > dims_.width || p.y < 0.0 || p.y > dims_.height) {
        throw ValidationError("image '" + id_ + "': polygon vertex (" +
                              std::to_string(p.x) + ", " + std::to_string(p.y) +
                              ") lies outside " + std::to_string(dims_.width) +
                              "x" + std::to_string(dims_.height));
      }
    }
  }
}

AnnotatedDataset::AnnotatedDataset(std::vector<AnnotatedImage> images)
    : images_(std::move(images)) {
  std::unordered_set<std::string_view> seen;
  for (const AnnotatedImage& img : images_) {
    if (!seen.insert(img.id()).second) {
      throw ValidationError("duplicate image id '" + img.id() + "'");
    }
  }
}

const AnnotatedImage* AnnotatedDataset::find(std::string_view id) const {
  for (const AnnotatedImage& img : images_) {
    if (img.id() == id) return &img;
  }
  return nullptr;
}

ClassCounts dataset_stats(const AnnotatedDataset& ds) {
  ClassCounts counts;
  counts.images = static_cast<std::int64_t>(ds.images().size());
  for (const AnnotatedImage& img : ds.images()) {
    for (const AnnotatedRegion& region : img.regions()) {
      ++counts[region.cls];
    }
  }
  return counts;
}

}  // namespace moseg
