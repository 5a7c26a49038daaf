#pragma once

#include <cstdint>
#include <vector>

#include "moseg/errors.hpp"

namespace moseg {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Integer raster dimensions; both sides are at least one pixel.
struct GridDims {
  GridDims(int width, int height);

  int width;
  int height;

  std::int64_t area() const { return static_cast<std::int64_t>(width) * height; }

  friend bool operator==(const GridDims&, const GridDims&) = default;
};

/// Axis-aligned box as top-left corner plus real-valued width and height.
struct BoundingBox {
  BoundingBox(double x, double y, double w, double h);

  double x;
  double y;
  double w;
  double h;

  double x2() const { return x + w; }
  double y2() const { return y + h; }
  double area() const { return w * h; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Closed polygon with at least three finite vertices and non-zero area.
class Polygon {
 public:
  explicit Polygon(std::vector<Point> vertices);

  const std::vector<Point>& vertices() const { return vertices_; }

  friend bool operator==(const Polygon&, const Polygon&) = default;

 private:
  std::vector<Point> vertices_;
};

/// Row-major binary mask packed into 64-bit words. Pixel (x, y) maps to flat
/// bit index y * width + x; bits past width * height stay zero.
class BitMask {
 public:
  explicit BitMask(GridDims dims);

  int width() const { return dims_.width; }
  int height() const { return dims_.height; }
  GridDims dims() const { return dims_; }
  std::int64_t size() const { return dims_.area(); }

  bool test(int x, int y) const;
  void set(int x, int y, bool value = true);

  /// Sets the flat bit range [begin, end).
  void set_span(std::int64_t begin, std::int64_t end);

  std::int64_t count() const;
  std::int64_t count_span(std::int64_t begin, std::int64_t end) const;

  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const BitMask&, const BitMask&) = default;

 private:
  GridDims dims_;
  std::vector<std::uint64_t> words_;
};

/// Row-major grid of real values (intensities, probabilities).
struct FloatGrid {
  explicit FloatGrid(GridDims dims, double fill = 0.0);

  GridDims dims;
  std::vector<double> values;

  int width() const { return dims.width; }
  int height() const { return dims.height; }

  double at(int x, int y) const {
    return values[static_cast<std::size_t>(y) * dims.width + x];
  }
  double& at(int x, int y) {
    return values[static_cast<std::size_t>(y) * dims.width + x];
  }

  friend bool operator==(const FloatGrid&, const FloatGrid&) = default;
};

/// Absolute shoelace area.
double polygon_area(const Polygon& poly);

/// Intersection over union of two boxes; 0 when disjoint.
double box_iou(const BoundingBox& a, const BoundingBox& b);

/// Intersection over union of two equally sized masks; 0 when both are empty.
/// Throws ValidationError when dimensions differ.
double mask_iou(const BitMask& a, const BitMask& b);

/// Scanline fill: pixel (i, j) is set iff its center (i + 0.5, j + 0.5) lies
/// inside the polygon under the even-odd rule. Pixels outside the grid are
/// dropped.
BitMask rasterize_polygon(const Polygon& poly, GridDims grid);

/// Tightest integer-aligned box containing every set pixel.
/// Throws ValidationError when the mask is empty.
BoundingBox mask_to_bbox(const BitMask& mask);

}  // namespace moseg
