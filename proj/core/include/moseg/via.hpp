#pragma once

#include <string>
#include <vector>

#include "moseg/dataset.hpp"

namespace moseg {

struct ViaOptions {
  /// region_attributes key carrying the class label.
  std::string class_key = "anatomy";
};

/// Parses the VIA polygon-annotation dialect:
///
///   { "<filename>-1": {
///       "filename": "...", "size": -1,
///       "file_attributes": { "width": W, "height": H },
///       "regions": [ { "shape_attributes": { "name": "polygon",
///                                            "all_points_x": [...],
///                                            "all_points_y": [...] },
///                      "region_attributes": { "anatomy": "thorax" } } ] } }
///
/// A top-level "_via_img_metadata" wrapper is accepted and "_via_*" keys are
/// skipped. When file_attributes carries no dimensions they are inferred from
/// the rounded-up vertex extent. Vertices are clamped to the image bounds.
/// Throws ParseError (malformed document, with byte offset for JSON syntax
/// errors) or ValidationError (unknown label, unsupported shape, bad polygon),
/// naming the image.
AnnotatedDataset parse_via(const std::string& doc, const ViaOptions& opts = {});

/// Inverse of parse_via; image and region order is preserved, so
/// parse_via(serialize_via(ds)) == ds.
std::string serialize_via(const AnnotatedDataset& ds, const ViaOptions& opts = {});

struct ViaDiagnostic {
  std::string image_id;  // empty for document-level problems
  std::string message;
};

/// Collects every problem parse_via would stop at, instead of throwing on the
/// first. An empty result means parse_via(doc) succeeds.
std::vector<ViaDiagnostic> validate_via(const std::string& doc,
                                        const ViaOptions& opts = {});

}  // namespace moseg
