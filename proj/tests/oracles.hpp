#pragma once

// Independent reference implementations the tests check the library against.
// Everything here is written directly from first principles (definitions, not
// library code) and stays deliberately simple and slow.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "moseg/geometry.hpp"

namespace oracles {

/// Even-odd point-in-polygon crossing test (one edge walk, toggle on
/// crossings strictly right of the point).
inline bool point_in_polygon(const std::vector<moseg::Point>& vs, double px,
                             double py) {
  bool inside = false;
  for (std::size_t i = 0, j = vs.size() - 1; i < vs.size(); j = i++) {
    const moseg::Point& a = vs[j];
    const moseg::Point& b = vs[i];
    if ((a.y > py) != (b.y > py) &&
        px < (b.x - a.x) * (py - a.y) / (b.y - a.y) + a.x) {
      inside = !inside;
    }
  }
  return inside;
}

/// Number of grid pixels whose center lies inside the polygon.
inline std::int64_t raster_count(const std::vector<moseg::Point>& vs, int width,
                                 int height) {
  std::int64_t count = 0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (point_in_polygon(vs, x + 0.5, y + 0.5)) ++count;
    }
  }
  return count;
}

/// IoU of two integer boxes by counting pixel centers covered by each box.
inline double pixel_count_box_iou(int ax, int ay, int aw, int ah, int bx, int by,
                                  int bw, int bh, int width, int height) {
  std::int64_t inter = 0;
  std::int64_t uni = 0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double cx = x + 0.5;
      const double cy = y + 0.5;
      const bool in_a = cx >= ax && cx < ax + aw && cy >= ay && cy < ay + ah;
      const bool in_b = cx >= bx && cx < bx + bw && cy >= by && cy < by + bh;
      if (in_a && in_b) ++inter;
      if (in_a || in_b) ++uni;
    }
  }
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

/// Central finite difference.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double relative_error(double reference, double candidate) {
  const double scale = std::max({std::abs(reference), std::abs(candidate), 1e-12});
  return std::abs(reference - candidate) / scale;
}

// --- detection-matching oracles -------------------------------------------

/// One synthetic single-class evaluation instance. Scores are expected to be
/// distinct so score thresholds and sweep prefixes coincide.
struct ApInstance {
  struct Det {
    int image = 0;
    double score = 0.0;
    std::vector<double> ious;  // IoU against each gt of the same image
  };
  std::vector<Det> dets;
  std::vector<int> gts_per_image;
};

/// Greedy matching of the given detections (descending score), each taking
/// its best still-free ground truth with IoU >= thr; returns the match count.
inline int greedy_tp(const ApInstance& inst, const std::vector<int>& det_ids,
                     double thr) {
  std::vector<int> order(det_ids);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return inst.dets[static_cast<std::size_t>(a)].score >
           inst.dets[static_cast<std::size_t>(b)].score;
  });
  std::vector<std::vector<char>> taken;
  for (const int n : inst.gts_per_image) {
    taken.emplace_back(static_cast<std::size_t>(n), 0);
  }
  int tp = 0;
  for (const int d : order) {
    const auto& det = inst.dets[static_cast<std::size_t>(d)];
    double best = 0.0;
    int best_gt = -1;
    for (std::size_t g = 0; g < det.ious.size(); ++g) {
      if (taken[static_cast<std::size_t>(det.image)][g]) continue;
      if (det.ious[g] >= thr && det.ious[g] > best) {
        best = det.ious[g];
        best_gt = static_cast<int>(g);
      }
    }
    if (best_gt >= 0) {
      taken[static_cast<std::size_t>(det.image)][static_cast<std::size_t>(best_gt)] = 1;
      ++tp;
    }
  }
  return tp;
}

/// Brute-force 101-point envelope AP: enumerate every score threshold (one
/// per detection), rebuild the matching from scratch for the detections at or
/// above it, and average max{P at recall >= r} over r = 0.00 .. 1.00.
inline double brute_force_ap(const ApInstance& inst, double thr) {
  std::int64_t total_gt = 0;
  for (const int n : inst.gts_per_image) total_gt += n;
  if (total_gt == 0) return inst.dets.empty() ? 1.0 : 0.0;

  std::vector<int> order(static_cast<int>(inst.dets.size()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return inst.dets[static_cast<std::size_t>(a)].score >
           inst.dets[static_cast<std::size_t>(b)].score;
  });

  std::vector<double> precision;
  std::vector<double> recall;
  for (std::size_t k = 1; k <= order.size(); ++k) {
    const std::vector<int> subset(order.begin(), order.begin() + static_cast<long>(k));
    const int tp = greedy_tp(inst, subset, thr);
    precision.push_back(static_cast<double>(tp) / static_cast<double>(k));
    recall.push_back(static_cast<double>(tp) / static_cast<double>(total_gt));
  }

  double sum = 0.0;
  for (int level = 0; level <= 100; ++level) {
    const double r = static_cast<double>(level) / 100.0;
    double best = 0.0;
    for (std::size_t k = 0; k < precision.size(); ++k) {
      if (recall[k] >= r) best = std::max(best, precision[k]);
    }
    sum += best;
  }
  return sum / 101.0;
}

/// Maximum bipartite matching size (Kuhn's augmenting paths) over edges with
/// IoU >= thr; upper-bounds what any one-to-one matcher can reach.
inline int max_matching_tp(const std::vector<std::vector<double>>& iou,
                           double thr) {
  const std::size_t n_det = iou.size();
  const std::size_t n_gt = n_det == 0 ? 0 : iou[0].size();
  std::vector<int> gt_owner(n_gt, -1);

  std::function<bool(std::size_t, std::vector<char>&)> try_assign =
      [&](std::size_t det, std::vector<char>& visited) -> bool {
    for (std::size_t g = 0; g < n_gt; ++g) {
      if (iou[det][g] < thr || visited[g]) continue;
      visited[g] = 1;
      if (gt_owner[g] < 0 ||
          try_assign(static_cast<std::size_t>(gt_owner[g]), visited)) {
        gt_owner[g] = static_cast<int>(det);
        return true;
      }
    }
    return false;
  };

  int matched = 0;
  for (std::size_t d = 0; d < n_det; ++d) {
    std::vector<char> visited(n_gt, 0);
    if (try_assign(d, visited)) ++matched;
  }
  return matched;
}

}  // namespace oracles
