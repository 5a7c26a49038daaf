#include <benchmark/benchmark.h>

#include "moseg/metrics.hpp"
#include "moseg/rng.hpp"
#include "moseg/transforms.hpp"

using namespace moseg;

namespace {

Polygon box_polygon(double x, double y, double w, double h) {
  return Polygon({{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}});
}

struct Workload {
  AnnotatedDataset ds;
  std::vector<Detection> dets;
};

// Synthetic evaluation load: `images` images, a handful of regions each, three
// noisy detections per region.
Workload make_workload(int images) {
  Rng rng(99);
  std::vector<AnnotatedImage> annotated;
  std::vector<Detection> dets;
  for (int i = 0; i < images; ++i) {
    const std::string id = "img" + std::to_string(i);
    std::vector<AnnotatedRegion> regions;
    for (const AnatomyClass cls : kAnatomyClasses) {
      const int count = cls == AnatomyClass::leg ? 4 : 1;
      for (int r = 0; r < count; ++r) {
        const double x = rng.uniform(0, 800);
        const double y = rng.uniform(0, 800);
        const double w = rng.uniform(20, 150);
        const double h = rng.uniform(20, 150);
        regions.push_back({cls, box_polygon(x, y, w, h)});
        for (int d = 0; d < 3; ++d) {
          dets.push_back({id, cls, rng.uniform01(),
                          BoundingBox(x + rng.uniform(-10, 10), y + rng.uniform(-10, 10),
                                      w * rng.uniform(0.8, 1.2), h * rng.uniform(0.8, 1.2)),
                          std::nullopt});
        }
      }
    }
    annotated.emplace_back(id, GridDims(1024, 1024), std::move(regions));
  }
  return {AnnotatedDataset(std::move(annotated)), std::move(dets)};
}

void BuildReport(benchmark::State& state) {
  const Workload load = make_workload(static_cast<int>(state.range(0)));
  const std::vector<double> thresholds = {0.3, 0.5, 0.7};
  for (auto _ : state) {
    EvaluationReport report = build_report(load.ds, load.dets, thresholds, IouKind::box);
    benchmark::DoNotOptimize(report);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(load.dets.size()));
}
BENCHMARK(BuildReport)->Arg(27)->Arg(100);

void AveragePrecisionSweep(benchmark::State& state) {
  const Workload load = make_workload(100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        average_precision(load.ds, load.dets, AnatomyClass::leg, 0.5, IouKind::box));
  }
}
BENCHMARK(AveragePrecisionSweep);

void GaussianBlur(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  FloatGrid grid(GridDims(side, side), 0.0);
  Rng rng(5);
  for (double& v : grid.values) v = rng.uniform(0, 255);
  for (auto _ : state) {
    FloatGrid out = gaussian_blur(grid, 1.5);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * grid.dims.area());
}
BENCHMARK(GaussianBlur)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
