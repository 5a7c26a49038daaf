#include "moseg/predictions.hpp"

#include <utility>

#include <json.hpp>

namespace moseg {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(std::size_t index, const std::string& message) {
  throw ValidationError("prediction " + std::to_string(index) + ": " + message);
}

RleMask parse_rle_field(const json& node, std::size_t index) {
  if (!node.is_object() || !node.contains("width") || !node.contains("height") ||
      !node.contains("runs") || !node["runs"].is_array() ||
      !node["width"].is_number_integer() || !node["height"].is_number_integer()) {
    fail(index, "rle must be an object with integer width/height and a runs array");
  }
  RleMask rle;
  rle.width = node["width"].get<int>();
  rle.height = node["height"].get<int>();
  for (const json& run : node["runs"]) {
    if (!run.is_number_integer()) fail(index, "rle run lengths must be integers");
    rle.runs.push_back(run.get<std::int64_t>());
  }
  return rle;
}

}  // namespace

std::vector<Detection> parse_predictions(const std::string& doc) {
  json root;
  try {
    root = json::parse(doc);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON at byte " + std::to_string(e.byte) + ": " +
                     e.what());
  }
  if (!root.is_array()) {
    throw ParseError("prediction file must be a JSON array");
  }

  std::vector<Detection> detections;
  detections.reserve(root.size());
  for (std::size_t i = 0; i < root.size(); ++i) {
    const json& rec = root[i];
    if (!rec.is_object()) fail(i, "record is not an object");
    if (!rec.contains("image_id") || !rec["image_id"].is_string()) {
      fail(i, "missing string field 'image_id'");
    }
    if (!rec.contains("class") || !rec["class"].is_string()) {
      fail(i, "missing string field 'class'");
    }
    const std::string label = rec["class"].get<std::string>();
    const auto cls = parse_class_label(label);
    if (!cls) fail(i, "unknown class label '" + label + "'");

    if (!rec.contains("score") || !rec["score"].is_number()) {
      fail(i, "missing numeric field 'score'");
    }
    const double score = rec["score"].get<double>();
    if (!(score >= 0.0 && score <= 1.0)) {
      fail(i, "score " + std::to_string(score) + " outside [0,1]");
    }

    if (!rec.contains("bbox") || !rec["bbox"].is_array() || rec["bbox"].size() != 4) {
      fail(i, "bbox must be an array [x, y, w, h]");
    }
    const json& bb = rec["bbox"];
    for (const json& v : bb) {
      if (!v.is_number()) fail(i, "bbox entries must be numeric");
    }

    auto parse_box = [&]() -> BoundingBox {
      try {
        return BoundingBox(bb[0].get<double>(), bb[1].get<double>(),
                           bb[2].get<double>(), bb[3].get<double>());
      } catch (const ValidationError& e) {
        fail(i, e.what());
      }
    };
    Detection det{rec["image_id"].get<std::string>(), *cls, score, parse_box(),
                  std::nullopt};
    if (rec.contains("rle")) {
      RleMask rle = parse_rle_field(rec["rle"], i);
      try {
        decode_rle(rle);  // reject non-canonical runs up front
      } catch (const ParseError& e) {
        fail(i, e.what());
      }
      det.mask = std::move(rle);
    }
    detections.push_back(std::move(det));
  }
  return detections;
}

std::string serialize_predictions(const std::vector<Detection>& detections) {
  json root = json::array();
  for (const Detection& det : detections) {
    json rec;
    rec["image_id"] = det.image_id;
    rec["class"] = class_name(det.cls);
    rec["score"] = det.score;
    rec["bbox"] = {det.box.x, det.box.y, det.box.w, det.box.h};
    if (det.mask) {
      rec["rle"] = {{"width", det.mask->width},
                    {"height", det.mask->height},
                    {"runs", det.mask->runs}};
    }
    root.push_back(std::move(rec));
  }
  return root.dump(2) + "\n";
}

}  // namespace moseg
