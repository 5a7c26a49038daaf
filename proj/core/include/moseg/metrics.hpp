#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "moseg/dataset.hpp"

namespace moseg {

enum class IouKind { box, mask };

std::string_view iou_kind_name(IouKind kind);

/// Outcome of matching one image's detections of one class against its
/// ground-truth regions.
struct MatchResult {
  struct Pair {
    int detection = -1;  // indices into the inputs
    int gt = -1;
    double iou = 0.0;
  };

  int tp = 0;
  int fp = 0;
  int fn = 0;
  std::vector<Pair> pairs;
};

/// Greedy matcher: detections are visited by descending score (ties by lower
/// index) and each takes its highest-IoU still-unmatched ground truth with
/// IoU >= iou_thr (IoU ties break to the lower ground-truth index).
/// kind == mask compares rasterized ground-truth polygons against detection
/// RLE masks and requires masks on both sides (missing or wrongly sized
/// detection masks raise ValidationError naming the detection).
MatchResult match_detections(std::span<const Detection> detections,
                             std::span<const AnnotatedRegion> gts,
                             GridDims image_dims, double iou_thr, IouKind kind);

struct PrecisionRecall {
  double precision = 1.0;
  double recall = 1.0;
};

/// precision = tp / (tp + fp), 1.0 with no detections;
/// recall = tp / (tp + fn), 1.0 with no ground truth.
PrecisionRecall precision_recall(const MatchResult& m);

/// 101-point interpolated average precision for one class at one IoU
/// threshold. Detections are swept across all images by descending score; the
/// precision envelope max{P at recall >= r} is averaged over
/// r = 0.00, 0.01, ..., 1.00. Conventions: 1.0 when the class has neither
/// ground truth nor detections, 0.0 when detections exist without ground
/// truth.
double average_precision(const AnnotatedDataset& ds,
                         std::span<const Detection> detections,
                         AnatomyClass cls, double iou_thr, IouKind kind);

/// Arithmetic mean of the four per-class average precisions.
double mean_average_precision(const AnnotatedDataset& ds,
                              std::span<const Detection> detections,
                              double iou_thr, IouKind kind);

/// Per-class precision/recall and AP for each IoU threshold, plus mAP.
struct EvaluationReport {
  struct Cell {
    PrecisionRecall pr;
    double ap = 0.0;
  };

  std::vector<double> thresholds;
  IouKind kind = IouKind::box;
  // cells[class ordinal][threshold index]
  std::array<std::vector<Cell>, kClassCount> cells;
  std::vector<double> map;  // one per threshold
};

/// Evaluates detections against the dataset at every threshold. Aggregate
/// per-class precision/recall pools matches over all images. Detections that
/// reference an image id absent from the dataset raise ValidationError.
EvaluationReport build_report(const AnnotatedDataset& ds,
                              std::span<const Detection> detections,
                              std::span<const double> thresholds, IouKind kind);

}  // namespace moseg
