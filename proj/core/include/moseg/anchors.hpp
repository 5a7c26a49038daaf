#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "moseg/geometry.hpp"

namespace moseg {

/// A reference box emplaced on a regular grid over the image.
struct Anchor {
  BoundingBox box;
  int level = 0;

  friend bool operator==(const Anchor&, const Anchor&) = default;
};

/// Multi-level anchor grid configuration. Every level emplaces one anchor per
/// (cell, scale, ratio); a ratio r turns scale s into a box of w = s * sqrt(r)
/// and h = s / sqrt(r).
struct AnchorConfig {
  std::vector<double> strides = {16.0};
  std::vector<double> scales = {32.0, 64.0, 128.0};
  std::vector<double> ratios = {0.5, 1.0, 2.0};
  bool clip_to_image = false;  // clipping changes regression targets, so opt-in

  // Matching / suppression defaults; the published conventions, not tunables
  // taken from any measurement.
  double positive_iou = 0.5;
  double negative_iou = 0.3;
  double nms_iou = 0.7;

  void validate() const;
};

/// Box offsets relative to an anchor: (t_x, t_y) are center-free offsets in
/// anchor units, (t_w, t_h) natural-log size ratios.
struct RegressionTarget {
  double tx = 0.0;
  double ty = 0.0;
  double tw = 0.0;
  double th = 0.0;

  friend bool operator==(const RegressionTarget&, const RegressionTarget&) = default;
};

struct MatchLabel {
  enum class Kind { positive, negative, ignore };
  Kind kind = Kind::negative;
  int gt_index = -1;  // valid iff kind == positive

  friend bool operator==(const MatchLabel&, const MatchLabel&) = default;
};

struct ScoredBox {
  BoundingBox box;
  double score;
};

struct PixelCounts {
  std::int64_t foreground = 0;
  std::int64_t background = 0;
};

/// Emplaces anchors for every level: one per (cell, scale, ratio), centered on
/// cell centers ((i + 0.5) * stride). Cells cover ceil(side / stride) steps, so
/// anchors may extend past the image unless cfg.clip_to_image is set.
std::vector<Anchor> generate_anchors(const AnchorConfig& cfg, GridDims image);

/// t_x = (x - x_a) / w_a, t_y = (y - y_a) / h_a,
/// t_w = ln(w / w_a),     t_h = ln(h / h_a).
RegressionTarget encode_box(const Anchor& anchor, const BoundingBox& target);

/// Exact inverse of encode_box.
BoundingBox decode_box(const Anchor& anchor, const RegressionTarget& t);

/// Labels each anchor against the ground-truth boxes:
///   - positive, assigned to its argmax-IoU ground truth, when max IoU >=
///     pos_thr (IoU ties break to the lowest ground-truth index);
///   - additionally, each ground truth forces its argmax-IoU anchor positive
///     (ties to the lowest anchor index) even below pos_thr, so every ground
///     truth's best anchor is positive whenever any anchor exists; the forced
///     anchor is still assigned to its own argmax ground truth;
///   - negative when max IoU < neg_thr; ignore otherwise.
std::vector<MatchLabel> match_anchors(std::span<const Anchor> anchors,
                                      std::span<const BoundingBox> gts,
                                      double pos_thr = 0.5, double neg_thr = 0.3);

/// Greedy non-maximum suppression by descending score (ties keep the lower
/// original index first). A box survives iff its IoU with every already-kept
/// box is < thr. Returns kept indices in keep order.
std::vector<std::size_t> nms(std::span<const ScoredBox> boxes, double thr);

/// Counts set (foreground) vs unset (background) mask pixels inside the
/// anchor's integer-clipped region. Throws ValidationError when the region is
/// empty.
PixelCounts fg_bg_ratio(const Anchor& anchor, const BitMask& gt_mask);

}  // namespace moseg
