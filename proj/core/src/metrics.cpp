#include "moseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <unordered_map>

#include "moseg/rle.hpp"

namespace moseg {

namespace {

BoundingBox polygon_extent(const Polygon& poly) {
  const auto& vs = poly.vertices();
  double min_x = vs[0].x, max_x = vs[0].x;
  double min_y = vs[0].y, max_y = vs[0].y;
  for (const Point& p : vs) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  return BoundingBox(min_x, min_y, max_x - min_x, max_y - min_y);
}

// IoU evaluator for one image; rasterizes ground truths and decodes detection
// masks once, lazily, in mask mode.
class IouTable {
 public:
  IouTable(std::span<const Detection> dets, std::span<const AnnotatedRegion> gts,
           GridDims dims, IouKind kind)
      : dets_(dets), gts_(gts), dims_(dims), kind_(kind) {
    if (kind_ == IouKind::box) {
      gt_boxes_.reserve(gts.size());
      for (const AnnotatedRegion& gt : gts) {
        gt_boxes_.push_back(polygon_extent(gt.polygon));
      }
    } else {
      gt_masks_.resize(gts.size());
      det_masks_.resize(dets.size());
    }
  }

  double operator()(std::size_t det, std::size_t gt) {
    if (kind_ == IouKind::box) {
      return box_iou(dets_[det].box, gt_boxes_[gt]);
    }
    if (!det_masks_[det]) {
      const Detection& d = dets_[det];
      if (!d.mask) {
        throw ValidationError("detection for image '" + d.image_id +
                              "' has no mask but mask IoU was requested");
      }
      if (d.mask->width != dims_.width || d.mask->height != dims_.height) {
        throw ValidationError("detection mask for image '" + d.image_id + "' is " +
                              std::to_string(d.mask->width) + "x" +
                              std::to_string(d.mask->height) + ", image is " +
                              std::to_string(dims_.width) + "x" +
                              std::to_string(dims_.height));
      }
      det_masks_[det] = decode_rle(*d.mask);
    }
    if (!gt_masks_[gt]) {
      gt_masks_[gt] = rasterize_polygon(gts_[gt].polygon, dims_);
    }
    return mask_iou(*det_masks_[det], *gt_masks_[gt]);
  }

 private:
  std::span<const Detection> dets_;
  std::span<const AnnotatedRegion> gts_;
  GridDims dims_;
  IouKind kind_;
  std::vector<BoundingBox> gt_boxes_;
  std::vector<std::optional<BitMask>> gt_masks_;
  std::vector<std::optional<BitMask>> det_masks_;
};

std::vector<std::size_t> score_order(std::span<const Detection> dets) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });
  return order;
}

constexpr int kRecallLevels = 101;

double envelope_ap(const std::vector<PrecisionRecall>& curve) {
  // Sort curve points by recall and take suffix maxima of precision, so
  // env(r) = max precision among points with recall >= r.
  std::vector<std::size_t> order(curve.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return curve[a].recall < curve[b].recall;
  });
  std::vector<double> recalls(curve.size());
  std::vector<double> env(curve.size());
  double running = 0.0;
  for (std::size_t k = curve.size(); k-- > 0;) {
    running = std::max(running, curve[order[k]].precision);
    recalls[k] = curve[order[k]].recall;
    env[k] = running;
  }
  double sum = 0.0;
  for (int level = 0; level < kRecallLevels; ++level) {
    const double r = static_cast<double>(level) / 100.0;
    // First point with recall >= r.
    const auto it = std::lower_bound(recalls.begin(), recalls.end(), r);
    if (it != recalls.end()) {
      sum += env[static_cast<std::size_t>(it - recalls.begin())];
    }
  }
  return sum / kRecallLevels;
}

struct ClassEvaluation {
  MatchResult pooled;  // tp/fp/fn aggregated over images (pairs left empty)
  double ap = 0.0;
};

// One pass over every image: greedy per-image matching in global score order,
// pooled counts, and the AP sweep for one class at one threshold.
ClassEvaluation evaluate_class(const AnnotatedDataset& ds,
                               std::span<const Detection> detections,
                               AnatomyClass cls, double iou_thr, IouKind kind) {
  struct PerImage {
    std::vector<Detection> dets;
    std::vector<std::size_t> det_ids;  // global sweep order tags
    std::vector<AnnotatedRegion> gts;
    const AnnotatedImage* image = nullptr;
  };

  std::unordered_map<std::string_view, std::size_t> image_index;
  std::vector<PerImage> per_image(ds.images().size());
  for (std::size_t i = 0; i < ds.images().size(); ++i) {
    const AnnotatedImage& img = ds.images()[i];
    image_index.emplace(img.id(), i);
    per_image[i].image = &img;
    for (const AnnotatedRegion& region : img.regions()) {
      if (region.cls == cls) per_image[i].gts.push_back(region);
    }
  }

  std::vector<std::size_t> order = score_order(detections);
  std::erase_if(order, [&](std::size_t i) { return detections[i].cls != cls; });
  std::int64_t total_gt = 0;
  for (const PerImage& pi : per_image) total_gt += static_cast<std::int64_t>(pi.gts.size());

  // Route detections to their image, keeping the global order tag.
  for (std::size_t sweep = 0; sweep < order.size(); ++sweep) {
    const Detection& det = detections[order[sweep]];
    const auto it = image_index.find(det.image_id);
    if (it == image_index.end()) {
      throw ValidationError("detection references unknown image id '" +
                            det.image_id + "'");
    }
    per_image[it->second].dets.push_back(det);
    per_image[it->second].det_ids.push_back(sweep);
  }

  // Greedy match per image; record for each sweep position whether it was a
  // true positive. Per-image matching in the order tags' order equals the
  // global score-descending sweep restricted to that image.
  std::vector<char> is_tp(order.size(), 0);
  ClassEvaluation out;
  for (PerImage& pi : per_image) {
    IouTable iou(pi.dets, pi.gts, pi.image->dims(), kind);
    std::vector<char> gt_taken(pi.gts.size(), 0);
    int tp_here = 0;
    for (std::size_t d = 0; d < pi.dets.size(); ++d) {
      double best = 0.0;
      int best_gt = -1;
      for (std::size_t g = 0; g < pi.gts.size(); ++g) {
        if (gt_taken[g]) continue;
        const double value = iou(d, g);
        if (value >= iou_thr && value > best) {
          best = value;
          best_gt = static_cast<int>(g);
        }
      }
      if (best_gt >= 0) {
        gt_taken[static_cast<std::size_t>(best_gt)] = 1;
        is_tp[pi.det_ids[d]] = 1;
        ++tp_here;
      }
    }
    out.pooled.tp += tp_here;
    out.pooled.fp += static_cast<int>(pi.dets.size()) - tp_here;
    out.pooled.fn += static_cast<int>(pi.gts.size()) - tp_here;
  }

  if (total_gt == 0) {
    out.ap = order.empty() ? 1.0 : 0.0;
    return out;
  }

  std::vector<PrecisionRecall> curve;
  curve.reserve(order.size());
  std::int64_t tp_running = 0;
  for (std::size_t sweep = 0; sweep < order.size(); ++sweep) {
    if (is_tp[sweep]) ++tp_running;
    curve.push_back({static_cast<double>(tp_running) / static_cast<double>(sweep + 1),
                     static_cast<double>(tp_running) / static_cast<double>(total_gt)});
  }
  out.ap = envelope_ap(curve);
  return out;
}

}  // namespace

std::string_view iou_kind_name(IouKind kind) {
  return kind == IouKind::box ? "box" : "mask";
}

MatchResult match_detections(std::span<const Detection> detections,
                             std::span<const AnnotatedRegion> gts,
                             GridDims image_dims, double iou_thr, IouKind kind) {
  IouTable iou(detections, gts, image_dims, kind);
  const std::vector<std::size_t> order = score_order(detections);

  MatchResult result;
  std::vector<char> gt_taken(gts.size(), 0);
  for (const std::size_t d : order) {
    double best = 0.0;
    int best_gt = -1;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (gt_taken[g]) continue;
      const double value = iou(d, g);
      if (value >= iou_thr && value > best) {
        best = value;
        best_gt = static_cast<int>(g);
      }
    }
    if (best_gt >= 0) {
      gt_taken[static_cast<std::size_t>(best_gt)] = 1;
      result.pairs.push_back({static_cast<int>(d), best_gt, best});
      ++result.tp;
    }
  }
  result.fp = static_cast<int>(detections.size()) - result.tp;
  result.fn = static_cast<int>(gts.size()) - result.tp;
  return result;
}

PrecisionRecall precision_recall(const MatchResult& m) {
  PrecisionRecall pr;
  const int detections = m.tp + m.fp;
  const int ground_truth = m.tp + m.fn;
  pr.precision = detections == 0
                     ? 1.0
                     : static_cast<double>(m.tp) / static_cast<double>(detections);
  pr.recall = ground_truth == 0
                  ? 1.0
                  : static_cast<double>(m.tp) / static_cast<double>(ground_truth);
  return pr;
}

double average_precision(const AnnotatedDataset& ds,
                         std::span<const Detection> detections, AnatomyClass cls,
                         double iou_thr, IouKind kind) {
  return evaluate_class(ds, detections, cls, iou_thr, kind).ap;
}

double mean_average_precision(const AnnotatedDataset& ds,
                              std::span<const Detection> detections,
                              double iou_thr, IouKind kind) {
  double sum = 0.0;
  for (const AnatomyClass cls : kAnatomyClasses) {
    sum += average_precision(ds, detections, cls, iou_thr, kind);
  }
  return sum / static_cast<double>(kClassCount);
}

EvaluationReport build_report(const AnnotatedDataset& ds,
                              std::span<const Detection> detections,
                              std::span<const double> thresholds, IouKind kind) {
  if (thresholds.empty()) {
    throw ValidationError("report needs at least one IoU threshold");
  }
  for (const double thr : thresholds) {
    if (!(thr > 0.0 && thr <= 1.0)) {
      throw ValidationError("IoU threshold " + std::to_string(thr) +
                            " outside (0, 1]");
    }
  }

  EvaluationReport report;
  report.thresholds.assign(thresholds.begin(), thresholds.end());
  report.kind = kind;
  for (const double thr : thresholds) {
    double ap_sum = 0.0;
    for (const AnatomyClass cls : kAnatomyClasses) {
      const ClassEvaluation eval = evaluate_class(ds, detections, cls, thr, kind);
      report.cells[static_cast<std::size_t>(cls)].push_back(
          {precision_recall(eval.pooled), eval.ap});
      ap_sum += eval.ap;
    }
    report.map.push_back(ap_sum / static_cast<double>(kClassCount));
  }
  return report;
}

}  // namespace moseg
