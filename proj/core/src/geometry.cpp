#include "moseg/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace moseg {

namespace {

bool all_finite(const std::vector<Point>& pts) {
  for (const Point& p : pts) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
  }
  return true;
}

double shoelace_twice(const std::vector<Point>& vs) {
  double acc = 0.0;
  for (std::size_t i = 0, j = vs.size() - 1; i < vs.size(); j = i++) {
    acc += vs[j].x * vs[i].y - vs[i].x * vs[j].y;
  }
  return acc;
}

}  // namespace

GridDims::GridDims(int width, int height) : width(width), height(height) {
  if (width < 1 || height < 1) {
    throw ValidationError("grid dimensions must be at least 1x1, got " +
                          std::to_string(width) + "x" + std::to_string(height));
  }
}

BoundingBox::BoundingBox(double x, double y, double w, double h)
    : x(x), y(y), w(w), h(h) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(w) ||
      !std::isfinite(h)) {
    throw ValidationError("bounding box coordinates must be finite");
  }
  if (w <= 0.0 || h <= 0.0) {
    throw ValidationError("bounding box extent must be positive, got w=" +
                          std::to_string(w) + " h=" + std::to_string(h));
  }
}

Polygon::Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) {
    throw ValidationError("polygon needs at least 3 vertices, got " +
                          std::to_string(vertices_.size()));
  }
  if (!all_finite(vertices_)) {
    throw ValidationError("polygon vertices must be finite");
  }
  if (shoelace_twice(vertices_) == 0.0) {
    throw ValidationError("polygon has zero area");
  }
}

double polygon_area(const Polygon& poly) {
  return std::abs(shoelace_twice(poly.vertices())) * 0.5;
}

BitMask::BitMask(GridDims dims)
    : dims_(dims),
      words_(static_cast<std::size_t>((dims.area() + 63) / 64), 0ull) {}

bool BitMask::test(int x, int y) const {
  const std::int64_t bit = static_cast<std::int64_t>(y) * dims_.width + x;
  return (words_[static_cast<std::size_t>(bit >> 6)] >> (bit & 63)) & 1ull;
}

void BitMask::set(int x, int y, bool value) {
  const std::int64_t bit = static_cast<std::int64_t>(y) * dims_.width + x;
  const std::uint64_t mask = 1ull << (bit & 63);
  if (value) {
    words_[static_cast<std::size_t>(bit >> 6)] |= mask;
  } else {
    words_[static_cast<std::size_t>(bit >> 6)] &= ~mask;
  }
}

void BitMask::set_span(std::int64_t begin, std::int64_t end) {
  if (begin >= end) return;
  std::int64_t first_word = begin >> 6;
  std::int64_t last_word = (end - 1) >> 6;
  const std::uint64_t head = ~0ull << (begin & 63);
  const std::uint64_t tail = ~0ull >> (63 - ((end - 1) & 63));
  if (first_word == last_word) {
    words_[static_cast<std::size_t>(first_word)] |= head & tail;
    return;
  }
  words_[static_cast<std::size_t>(first_word)] |= head;
  for (std::int64_t w = first_word + 1; w < last_word; ++w) {
    words_[static_cast<std::size_t>(w)] = ~0ull;
  }
  words_[static_cast<std::size_t>(last_word)] |= tail;
}

std::int64_t BitMask::count() const {
  std::int64_t total = 0;
  for (std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

std::int64_t BitMask::count_span(std::int64_t begin, std::int64_t end) const {
  if (begin >= end) return 0;
  const std::int64_t first_word = begin >> 6;
  const std::int64_t last_word = (end - 1) >> 6;
  const std::uint64_t head = ~0ull << (begin & 63);
  const std::uint64_t tail = ~0ull >> (63 - ((end - 1) & 63));
  if (first_word == last_word) {
    return std::popcount(words_[static_cast<std::size_t>(first_word)] & head & tail);
  }
  std::int64_t total = std::popcount(words_[static_cast<std::size_t>(first_word)] & head);
  for (std::int64_t w = first_word + 1; w < last_word; ++w) {
    total += std::popcount(words_[static_cast<std::size_t>(w)]);
  }
  total += std::popcount(words_[static_cast<std::size_t>(last_word)] & tail);
  return total;
}

FloatGrid::FloatGrid(GridDims dims, double fill)
    : dims(dims), values(static_cast<std::size_t>(dims.area()), fill) {}

double box_iou(const BoundingBox& a, const BoundingBox& b) {
  const double ax2 = a.x2();
  const double ay2 = a.y2();
  const double bx2 = b.x2();
  const double by2 = b.y2();
  const double iw = std::min(ax2, bx2) - std::max(a.x, b.x);
  const double ih = std::min(ay2, by2) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  // Areas from the same corner differences as the intersection, so identical
  // boxes yield exactly 1.
  const double area_a = (ax2 - a.x) * (ay2 - a.y);
  const double area_b = (bx2 - b.x) * (by2 - b.y);
  return inter / (area_a + area_b - inter);
}

double mask_iou(const BitMask& a, const BitMask& b) {
  if (a.dims() != b.dims()) {
    throw ValidationError("mask dimensions differ: " +
                          std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                          " vs " + std::to_string(b.width()) + "x" +
                          std::to_string(b.height()));
  }
  std::int64_t inter = 0;
  std::int64_t uni = 0;
  const auto& aw = a.words();
  const auto& bw = b.words();
  for (std::size_t i = 0; i < aw.size(); ++i) {
    inter += std::popcount(aw[i] & bw[i]);
    uni += std::popcount(aw[i] | bw[i]);
  }
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

BitMask rasterize_polygon(const Polygon& poly, GridDims grid) {
  BitMask mask(grid);
  const auto& vs = poly.vertices();
  const std::size_t n = vs.size();

  double min_y = vs[0].y;
  double max_y = vs[0].y;
  for (const Point& p : vs) {
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const int row_begin = std::max(0, static_cast<int>(std::floor(min_y - 0.5)));
  const int row_end = std::min(grid.height - 1, static_cast<int>(std::ceil(max_y)));

  std::vector<double> crossings;
  for (int y = row_begin; y <= row_end; ++y) {
    const double cy = y + 0.5;
    crossings.clear();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point& a = vs[j];
      const Point& b = vs[i];
      // Half-open in y so a scanline through a vertex is counted once.
      if ((a.y > cy) != (b.y > cy)) {
        crossings.push_back((b.x - a.x) * (cy - a.y) / (b.y - a.y) + a.x);
      }
    }
    std::sort(crossings.begin(), crossings.end());
    const std::int64_t row_base = static_cast<std::int64_t>(y) * grid.width;
    for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
      // Centers cx = i + 0.5 with crossings[k] <= cx < crossings[k + 1].
      std::int64_t first = static_cast<std::int64_t>(std::ceil(crossings[k] - 0.5));
      std::int64_t last = static_cast<std::int64_t>(std::ceil(crossings[k + 1] - 0.5)) - 1;
      first = std::max<std::int64_t>(first, 0);
      last = std::min<std::int64_t>(last, grid.width - 1);
      if (first <= last) mask.set_span(row_base + first, row_base + last + 1);
    }
  }
  return mask;
}

BoundingBox mask_to_bbox(const BitMask& mask) {
  int min_x = mask.width();
  int max_x = -1;
  int min_y = mask.height();
  int max_y = -1;
  const auto& words = mask.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t bits = words[w];
    while (bits != 0) {
      const int b = std::countr_zero(bits);
      bits &= bits - 1;
      const std::int64_t flat = static_cast<std::int64_t>(w) * 64 + b;
      const int x = static_cast<int>(flat % mask.width());
      const int y = static_cast<int>(flat / mask.width());
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
    }
  }
  if (max_x < 0) {
    throw ValidationError("mask_to_bbox: mask has no set pixels");
  }
  return BoundingBox(min_x, min_y, max_x - min_x + 1, max_y - min_y + 1);
}

}  // namespace moseg
