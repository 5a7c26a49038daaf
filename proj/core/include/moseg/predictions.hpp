#pragma once

#include <string>
#include <vector>

#include "moseg/dataset.hpp"

namespace moseg {

/// Parses a prediction file: a JSON array of records
///
///   { "image_id": "...", "class": "thorax", "score": 0.9,
///     "bbox": [x, y, w, h],
///     "rle": { "width": W, "height": H, "runs": [...] } }   // optional
///
/// Throws ParseError/ValidationError naming the offending record index.
std::vector<Detection> parse_predictions(const std::string& doc);

/// Inverse of parse_predictions, in input order.
std::string serialize_predictions(const std::vector<Detection>& detections);

}  // namespace moseg
