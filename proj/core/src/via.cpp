#include "moseg/via.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_set>
#include <utility>

#include <json.hpp>

namespace moseg {

namespace {

using json = nlohmann::ordered_json;

// Reports a problem; parse_via installs a throwing sink, validate_via a
// collecting one. Returning normally means "skip and continue".
using ProblemSink = std::function<void(const std::string& image_id,
                                       const std::string& message, bool domain)>;

json parse_document(const std::string& doc) {
  try {
    return json::parse(doc);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON at byte " + std::to_string(e.byte) + ": " +
                     e.what());
  }
}

const json* image_table(const json& root) {
  if (!root.is_object()) return nullptr;
  if (auto it = root.find("_via_img_metadata"); it != root.end() && it->is_object()) {
    return &*it;
  }
  return &root;
}

std::optional<AnnotatedRegion> parse_region(const json& region,
                                            const std::string& image_id,
                                            const ViaOptions& opts,
                                            const ProblemSink& problem) {
  if (!region.is_object() || !region.contains("shape_attributes")) {
    problem(image_id, "region without shape_attributes", false);
    return std::nullopt;
  }
  const json& shape = region["shape_attributes"];
  const std::string shape_name = shape.value("name", std::string("<missing>"));
  if (shape_name != "polygon") {
    problem(image_id, "unsupported region shape '" + shape_name + "'", true);
    return std::nullopt;
  }
  if (!shape.contains("all_points_x") || !shape.contains("all_points_y") ||
      !shape["all_points_x"].is_array() || !shape["all_points_y"].is_array()) {
    problem(image_id, "polygon region without all_points_x/all_points_y arrays", false);
    return std::nullopt;
  }
  const json& xs = shape["all_points_x"];
  const json& ys = shape["all_points_y"];
  if (xs.size() != ys.size()) {
    problem(image_id, "all_points_x and all_points_y lengths differ", false);
    return std::nullopt;
  }

  std::vector<Point> vertices;
  vertices.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!xs[i].is_number() || !ys[i].is_number()) {
      problem(image_id, "polygon vertex is not numeric", false);
      return std::nullopt;
    }
    vertices.push_back({xs[i].get<double>(), ys[i].get<double>()});
  }

  const json attrs = region.value("region_attributes", json::object());
  if (!attrs.contains(opts.class_key) || !attrs[opts.class_key].is_string()) {
    problem(image_id, "region without '" + opts.class_key + "' label", false);
    return std::nullopt;
  }
  const std::string label = attrs[opts.class_key].get<std::string>();
  const auto cls = parse_class_label(label);
  if (!cls) {
    problem(image_id, "unknown class label '" + label + "'", true);
    return std::nullopt;
  }

  try {
    return AnnotatedRegion{*cls, Polygon(std::move(vertices))};
  } catch (const ValidationError& e) {
    problem(image_id, e.what(), true);
    return std::nullopt;
  }
}

GridDims image_dims(const json& entry, const std::vector<AnnotatedRegion>& regions) {
  int width = 0;
  int height = 0;
  if (auto it = entry.find("file_attributes"); it != entry.end() && it->is_object()) {
    width = static_cast<int>(it->value("width", 0.0));
    height = static_cast<int>(it->value("height", 0.0));
  }
  if (width < 1 || height < 1) {
    // Dimensions absent: take the rounded-up vertex extent.
    double max_x = 1.0;
    double max_y = 1.0;
    for (const AnnotatedRegion& region : regions) {
      for (const Point& p : region.polygon.vertices()) {
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
      }
    }
    width = static_cast<int>(std::ceil(max_x));
    height = static_cast<int>(std::ceil(max_y));
  }
  return GridDims(width, height);
}

std::vector<AnnotatedRegion> clamp_regions(std::vector<AnnotatedRegion> regions,
                                           GridDims dims) {
  std::vector<AnnotatedRegion> out;
  out.reserve(regions.size());
  for (AnnotatedRegion& region : regions) {
    std::vector<Point> vs = region.polygon.vertices();
    for (Point& p : vs) {
      p.x = std::clamp(p.x, 0.0, static_cast<double>(dims.width));
      p.y = std::clamp(p.y, 0.0, static_cast<double>(dims.height));
    }
    out.push_back({region.cls, Polygon(std::move(vs))});
  }
  return out;
}

void walk_entry(const std::string& key, const json& entry, const ViaOptions& opts,
                const ProblemSink& problem,
                std::unordered_set<std::string>& seen_ids,
                std::vector<AnnotatedImage>& images) {
  const std::string id = entry.value("filename", key);
  if (id.empty()) {
    problem(key, "image with empty filename", true);
    return;
  }
  if (!seen_ids.insert(id).second) {
    problem(id, "duplicate image id", true);
    return;
  }

  std::vector<AnnotatedRegion> regions;
  if (auto it = entry.find("regions"); it != entry.end()) {
    // VIA 2.x stores regions as an array, 1.x as an object keyed by index.
    const auto each = [&](const json& region) {
      if (auto parsed = parse_region(region, id, opts, problem)) {
        regions.push_back(std::move(*parsed));
      }
    };
    if (it->is_array()) {
      for (const json& region : *it) each(region);
    } else if (it->is_object()) {
      for (const auto& [unused, region] : it->items()) each(region);
    } else {
      problem(id, "regions is neither an array nor an object", false);
    }
  }

  try {
    const GridDims dims = image_dims(entry, regions);
    images.emplace_back(id, dims, clamp_regions(std::move(regions), dims));
  } catch (const ValidationError& e) {
    problem(id, e.what(), true);
  }
}

std::vector<AnnotatedImage> walk(const std::string& doc, const ViaOptions& opts,
                                 const ProblemSink& problem) {
  const json root = parse_document(doc);
  const json* table = image_table(root);
  if (table == nullptr) {
    problem("", "top-level value is not an object", false);
    return {};
  }

  std::vector<AnnotatedImage> images;
  std::unordered_set<std::string> seen_ids;
  for (const auto& [key, entry] : table->items()) {
    if (key.rfind("_via_", 0) == 0) continue;
    if (!entry.is_object()) {
      problem(key, "image entry is not an object", false);
      continue;
    }
    try {
      walk_entry(key, entry, opts, problem, seen_ids, images);
    } catch (const json::exception& e) {
      // Field with an unexpected JSON type.
      problem(key, std::string("malformed image entry: ") + e.what(), false);
    }
  }
  return images;
}

}  // namespace

AnnotatedDataset parse_via(const std::string& doc, const ViaOptions& opts) {
  const ProblemSink throwing = [](const std::string& image_id,
                                  const std::string& message, bool domain) {
    const std::string full =
        image_id.empty() ? message : "image '" + image_id + "': " + message;
    if (domain) throw ValidationError(full);
    throw ParseError(full);
  };
  return AnnotatedDataset(walk(doc, opts, throwing));
}

std::vector<ViaDiagnostic> validate_via(const std::string& doc,
                                        const ViaOptions& opts) {
  std::vector<ViaDiagnostic> diagnostics;
  const ProblemSink collecting = [&diagnostics](const std::string& image_id,
                                                const std::string& message,
                                                bool) {
    diagnostics.push_back({image_id, message});
  };
  try {
    walk(doc, opts, collecting);
  } catch (const ParseError& e) {
    diagnostics.push_back({"", e.what()});
  }
  return diagnostics;
}

std::string serialize_via(const AnnotatedDataset& ds, const ViaOptions& opts) {
  json root = json::object();
  for (const AnnotatedImage& img : ds.images()) {
    json entry;
    entry["filename"] = img.id();
    entry["size"] = -1;
    entry["file_attributes"] = {{"width", img.dims().width},
                                {"height", img.dims().height}};
    json regions = json::array();
    for (const AnnotatedRegion& region : img.regions()) {
      json xs = json::array();
      json ys = json::array();
      for (const Point& p : region.polygon.vertices()) {
        xs.push_back(p.x);
        ys.push_back(p.y);
      }
      regions.push_back({{"shape_attributes",
                          {{"name", "polygon"},
                           {"all_points_x", std::move(xs)},
                           {"all_points_y", std::move(ys)}}},
                         {"region_attributes", {{opts.class_key, class_name(region.cls)}}}});
    }
    entry["regions"] = std::move(regions);
    root[img.id() + "-1"] = std::move(entry);
  }
  return root.dump(2) + "\n";
}

}  // namespace moseg
