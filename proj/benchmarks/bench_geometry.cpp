#include <benchmark/benchmark.h>

#include "moseg/anchors.hpp"
#include "moseg/geometry.hpp"
#include "moseg/rle.hpp"
#include "moseg/rng.hpp"

using namespace moseg;

namespace {

Polygon wavy_polygon(int vertices, double radius, double center) {
  Rng rng(1234);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(vertices));
  for (int i = 0; i < vertices; ++i) {
    const double angle = 2.0 * 3.141592653589793 * i / vertices;
    const double r = radius * rng.uniform(0.6, 1.0);
    pts.push_back({center + r * std::cos(angle), center + r * std::sin(angle)});
  }
  return Polygon(std::move(pts));
}

void RasterizePolygon(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Polygon poly = wavy_polygon(24, side * 0.45, side * 0.5);
  const GridDims grid(side, side);
  for (auto _ : state) {
    BitMask mask = rasterize_polygon(poly, grid);
    benchmark::DoNotOptimize(mask);
  }
  state.SetItemsProcessed(state.iterations() * grid.area());
}
BENCHMARK(RasterizePolygon)->Arg(128)->Arg(512)->Arg(1024);

void MaskIoU(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const GridDims grid(side, side);
  const BitMask a = rasterize_polygon(wavy_polygon(24, side * 0.45, side * 0.5), grid);
  const BitMask b = rasterize_polygon(wavy_polygon(24, side * 0.4, side * 0.45), grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mask_iou(a, b));
  }
  state.SetItemsProcessed(state.iterations() * grid.area());
}
BENCHMARK(MaskIoU)->Arg(128)->Arg(512)->Arg(1024);

void RleRoundtrip(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const GridDims grid(side, side);
  const BitMask mask = rasterize_polygon(wavy_polygon(24, side * 0.45, side * 0.5), grid);
  for (auto _ : state) {
    const RleMask rle = encode_rle(mask);
    BitMask back = decode_rle(rle);
    benchmark::DoNotOptimize(back);
  }
  state.SetItemsProcessed(state.iterations() * grid.area());
}
BENCHMARK(RleRoundtrip)->Arg(128)->Arg(512)->Arg(1024);

void BoxIoUPairs(benchmark::State& state) {
  Rng rng(7);
  std::vector<BoundingBox> boxes;
  for (int i = 0; i < 1024; ++i) {
    boxes.emplace_back(rng.uniform(0, 900), rng.uniform(0, 900),
                       rng.uniform(5, 120), rng.uniform(5, 120));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const double iou = box_iou(boxes[i & 1023], boxes[(i * 7 + 13) & 1023]);
    benchmark::DoNotOptimize(iou);
    ++i;
  }
}
BENCHMARK(BoxIoUPairs);

void Nms(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(11);
  std::vector<ScoredBox> boxes;
  for (int i = 0; i < n; ++i) {
    boxes.push_back({BoundingBox(rng.uniform(0, 900), rng.uniform(0, 900),
                                 rng.uniform(10, 150), rng.uniform(10, 150)),
                     rng.uniform01()});
  }
  for (auto _ : state) {
    auto kept = nms(boxes, 0.7);
    benchmark::DoNotOptimize(kept);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(Nms)->Arg(100)->Arg(1000)->Arg(4000);

}  // namespace

BENCHMARK_MAIN();
