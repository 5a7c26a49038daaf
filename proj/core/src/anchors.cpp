#include "moseg/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

namespace moseg {

void AnchorConfig::validate() const {
  if (strides.empty() || scales.empty() || ratios.empty()) {
    throw ValidationError("anchor config needs at least one stride, scale and ratio");
  }
  for (double s : strides) {
    if (!(s > 0.0)) throw ValidationError("anchor strides must be positive");
  }
  for (double s : scales) {
    if (!(s > 0.0)) throw ValidationError("anchor scales must be positive");
  }
  for (double r : ratios) {
    if (!(r > 0.0)) throw ValidationError("anchor ratios must be positive");
  }
  if (!(positive_iou >= negative_iou && negative_iou >= 0.0 && positive_iou <= 1.0)) {
    throw ValidationError("anchor thresholds need 0 <= negative <= positive <= 1");
  }
  if (!(nms_iou >= 0.0 && nms_iou <= 1.0)) {
    throw ValidationError("nms threshold must lie in [0,1]");
  }
}

std::vector<Anchor> generate_anchors(const AnchorConfig& cfg, GridDims image) {
  cfg.validate();
  std::vector<Anchor> anchors;
  for (std::size_t level = 0; level < cfg.strides.size(); ++level) {
    const double stride = cfg.strides[level];
    const int cells_x = static_cast<int>(std::ceil(image.width / stride));
    const int cells_y = static_cast<int>(std::ceil(image.height / stride));
    for (int cy = 0; cy < cells_y; ++cy) {
      for (int cx = 0; cx < cells_x; ++cx) {
        const double center_x = (cx + 0.5) * stride;
        const double center_y = (cy + 0.5) * stride;
        for (const double scale : cfg.scales) {
          for (const double ratio : cfg.ratios) {
            const double w = scale * std::sqrt(ratio);
            const double h = scale / std::sqrt(ratio);
            double x0 = center_x - 0.5 * w;
            double y0 = center_y - 0.5 * h;
            double x1 = x0 + w;
            double y1 = y0 + h;
            if (cfg.clip_to_image) {
              x0 = std::max(x0, 0.0);
              y0 = std::max(y0, 0.0);
              x1 = std::min(x1, static_cast<double>(image.width));
              y1 = std::min(y1, static_cast<double>(image.height));
              if (!(x1 > x0 && y1 > y0)) continue;
            }
            anchors.push_back(
                {BoundingBox(x0, y0, x1 - x0, y1 - y0), static_cast<int>(level)});
          }
        }
      }
    }
  }
  return anchors;
}

RegressionTarget encode_box(const Anchor& anchor, const BoundingBox& target) {
  const BoundingBox& a = anchor.box;
  return {(target.x - a.x) / a.w, (target.y - a.y) / a.h,
          std::log(target.w / a.w), std::log(target.h / a.h)};
}

BoundingBox decode_box(const Anchor& anchor, const RegressionTarget& t) {
  const BoundingBox& a = anchor.box;
  return BoundingBox(a.x + t.tx * a.w, a.y + t.ty * a.h, a.w * std::exp(t.tw),
                     a.h * std::exp(t.th));
}

std::vector<MatchLabel> match_anchors(std::span<const Anchor> anchors,
                                      std::span<const BoundingBox> gts,
                                      double pos_thr, double neg_thr) {
  if (!(0.0 <= neg_thr && neg_thr <= pos_thr && pos_thr <= 1.0)) {
    throw ValidationError("match_anchors needs 0 <= neg_thr <= pos_thr <= 1");
  }
  std::vector<MatchLabel> labels(anchors.size());
  if (gts.empty()) {
    return labels;  // all negative
  }

  // Per-anchor argmax over ground truths (ties keep the lowest gt index).
  std::vector<double> best_iou(anchors.size(), 0.0);
  std::vector<int> best_gt(anchors.size(), -1);
  // Per-gt argmax over anchors (ties keep the lowest anchor index).
  std::vector<double> gt_best_iou(gts.size(), -1.0);
  std::vector<std::size_t> gt_best_anchor(gts.size(), 0);

  for (std::size_t a = 0; a < anchors.size(); ++a) {
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double iou = box_iou(anchors[a].box, gts[g]);
      if (iou > best_iou[a]) {
        best_iou[a] = iou;
        best_gt[a] = static_cast<int>(g);
      }
      if (iou > gt_best_iou[g]) {
        gt_best_iou[g] = iou;
        gt_best_anchor[g] = a;
      }
    }
  }

  for (std::size_t a = 0; a < anchors.size(); ++a) {
    if (best_iou[a] >= pos_thr && best_gt[a] >= 0) {
      labels[a] = {MatchLabel::Kind::positive, best_gt[a]};
    } else if (best_iou[a] < neg_thr) {
      labels[a] = {MatchLabel::Kind::negative, -1};
    } else {
      labels[a] = {MatchLabel::Kind::ignore, -1};
    }
  }

  // Forced positives: each gt's argmax anchor is positive even below pos_thr.
  // Assignment still follows the anchor's own argmax gt, so an anchor forced
  // by a gt it overlaps less keeps its better partner.
  for (std::size_t g = 0; g < gts.size(); ++g) {
    const std::size_t a = gt_best_anchor[g];
    if (labels[a].kind != MatchLabel::Kind::positive) {
      const int assigned = best_gt[a] >= 0 ? best_gt[a] : static_cast<int>(g);
      labels[a] = {MatchLabel::Kind::positive, assigned};
    }
  }
  return labels;
}

std::vector<std::size_t> nms(std::span<const ScoredBox> boxes, double thr) {
  if (!(thr >= 0.0 && thr <= 1.0)) {
    throw ValidationError("nms threshold must lie in [0,1]");
  }
  for (const ScoredBox& b : boxes) {
    if (!(b.score >= 0.0 && b.score <= 1.0)) {
      throw ValidationError("nms scores must lie in [0,1]");
    }
  }
  std::vector<std::size_t> order(boxes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return boxes[a].score > boxes[b].score;
  });

  std::vector<std::size_t> kept;
  for (const std::size_t candidate : order) {
    bool suppressed = false;
    for (const std::size_t keeper : kept) {
      if (box_iou(boxes[candidate].box, boxes[keeper].box) >= thr) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(candidate);
  }
  return kept;
}

PixelCounts fg_bg_ratio(const Anchor& anchor, const BitMask& gt_mask) {
  const BoundingBox& b = anchor.box;
  // Pixel (i, j) belongs to the region iff its center lies in the box,
  // clipped to the grid.
  const auto span_begin = [](double lo) {
    return static_cast<std::int64_t>(std::ceil(lo - 0.5));
  };
  const auto span_end = [](double hi) {  // exclusive
    return static_cast<std::int64_t>(std::ceil(hi - 0.5));
  };
  const std::int64_t x0 = std::max<std::int64_t>(span_begin(b.x), 0);
  const std::int64_t x1 = std::min<std::int64_t>(span_end(b.x2()), gt_mask.width());
  const std::int64_t y0 = std::max<std::int64_t>(span_begin(b.y), 0);
  const std::int64_t y1 = std::min<std::int64_t>(span_end(b.y2()), gt_mask.height());
  if (x0 >= x1 || y0 >= y1) {
    throw ValidationError("anchor does not cover any grid pixel");
  }

  PixelCounts counts;
  for (std::int64_t y = y0; y < y1; ++y) {
    const std::int64_t row = y * gt_mask.width();
    counts.foreground += gt_mask.count_span(row + x0, row + x1);
  }
  const std::int64_t area = (x1 - x0) * (y1 - y0);
  counts.background = area - counts.foreground;
  return counts;
}

}  // namespace moseg
