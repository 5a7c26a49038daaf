#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "moseg/metrics.hpp"
#include "moseg/report.hpp"
#include "moseg/rle.hpp"
#include "moseg/rng.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace moseg;

TEST_SUITE_BEGIN("metrics");

namespace {

Detection det(std::string image, AnatomyClass cls, double score, BoundingBox box) {
  return Detection{std::move(image), cls, score, box, std::nullopt};
}

/// Random single-class instance over a few images, with distinct scores, and
/// its translation into dataset + detections. Boxes are integer-aligned and
/// IoU values come from box geometry on both sides.
struct RandomInstance {
  AnnotatedDataset ds;
  std::vector<Detection> dets;
  oracles::ApInstance abstract;
};

RandomInstance make_instance(Rng& rng, int max_dets, int max_gts) {
  const int images = static_cast<int>(rng.uniform_int(1, 3));
  std::vector<std::vector<BoundingBox>> gt_boxes(static_cast<std::size_t>(images));
  RandomInstance inst;

  std::vector<AnnotatedImage> annotated;
  int total_gts = static_cast<int>(rng.uniform_int(0, max_gts));
  for (int g = 0; g < total_gts; ++g) {
    const int image = static_cast<int>(rng.uniform_int(0, images - 1));
    gt_boxes[static_cast<std::size_t>(image)].emplace_back(
        rng.uniform_int(0, 40), rng.uniform_int(0, 40), rng.uniform_int(4, 24),
        rng.uniform_int(4, 24));
  }
  for (int i = 0; i < images; ++i) {
    std::vector<AnnotatedRegion> regions;
    for (const BoundingBox& b : gt_boxes[static_cast<std::size_t>(i)]) {
      regions.push_back({AnatomyClass::leg,
                         helpers::rect_polygon(b.x, b.y, b.w, b.h)});
    }
    annotated.push_back(AnnotatedImage("img" + std::to_string(i), GridDims(96, 96),
                                       std::move(regions)));
    inst.abstract.gts_per_image.push_back(
        static_cast<int>(gt_boxes[static_cast<std::size_t>(i)].size()));
  }
  inst.ds = AnnotatedDataset(std::move(annotated));

  const int n_dets = static_cast<int>(rng.uniform_int(0, max_dets));
  std::vector<double> scores;
  for (int d = 0; d < n_dets; ++d) {
    scores.push_back((d + 1) / static_cast<double>(n_dets + 1));
  }
  // Shuffle scores so sweep order is not input order.
  for (int d = n_dets - 1; d > 0; --d) {
    std::swap(scores[static_cast<std::size_t>(d)],
              scores[static_cast<std::size_t>(rng.uniform_int(0, d))]);
  }
  for (int d = 0; d < n_dets; ++d) {
    const int image = static_cast<int>(rng.uniform_int(0, images - 1));
    BoundingBox box(rng.uniform_int(0, 40), rng.uniform_int(0, 40),
                    rng.uniform_int(4, 24), rng.uniform_int(4, 24));
    if (rng.bernoulli(0.5) && !gt_boxes[static_cast<std::size_t>(image)].empty()) {
      // Overlap an existing gt so matches actually occur.
      const auto& target = gt_boxes[static_cast<std::size_t>(image)][
          static_cast<std::size_t>(rng.uniform_int(
              0, static_cast<std::int64_t>(gt_boxes[static_cast<std::size_t>(image)].size()) - 1))];
      box = BoundingBox(target.x + rng.uniform_int(0, 6), target.y + rng.uniform_int(0, 6),
                        target.w, target.h);
    }
    inst.dets.push_back(det("img" + std::to_string(image), AnatomyClass::leg,
                            scores[static_cast<std::size_t>(d)], box));
    oracles::ApInstance::Det ad;
    ad.image = image;
    ad.score = scores[static_cast<std::size_t>(d)];
    for (const BoundingBox& gt : gt_boxes[static_cast<std::size_t>(image)]) {
      ad.ious.push_back(box_iou(box, gt));
    }
    inst.abstract.dets.push_back(std::move(ad));
  }
  return inst;
}

}  // namespace

TEST_CASE("match_detections on the documented examples") {
  const GridDims dims(64, 64);

  SUBCASE("no detections leaves every gt unmatched") {
    const std::vector<AnnotatedRegion> gts = {
        {AnatomyClass::leg, helpers::rect_polygon(0, 0, 8, 8)},
        {AnatomyClass::leg, helpers::rect_polygon(20, 20, 8, 8)}};
    const MatchResult m = match_detections({}, gts, dims, 0.5, IouKind::box);
    CHECK(m.tp == 0);
    CHECK(m.fp == 0);
    CHECK(m.fn == 2);
  }

  SUBCASE("identical detection matches at any threshold") {
    const std::vector<AnnotatedRegion> gts = {
        {AnatomyClass::leg, helpers::rect_polygon(4, 4, 10, 10)}};
    const std::vector<Detection> dets = {det("a", AnatomyClass::leg, 0.9,
                                             BoundingBox(4, 4, 10, 10))};
    const MatchResult m = match_detections(dets, gts, dims, 1.0, IouKind::box);
    CHECK(m.tp == 1);
    CHECK(m.fp == 0);
    CHECK(m.fn == 0);
    REQUIRE(m.pairs.size() == 1);
    CHECK(m.pairs[0].iou == 1.0);
  }

  SUBCASE("two detections over one gt: higher score wins, other is fp") {
    // Both boxes have IoU 0.6 with the gt: gt (0,0,10,10), det (0,0,10,6) has
    // IoU 60/100 = 0.6.
    const std::vector<AnnotatedRegion> gts = {
        {AnatomyClass::leg, helpers::rect_polygon(0, 0, 10, 10)}};
    const BoundingBox overlapping(0, 0, 10, 6);
    const std::vector<Detection> dets = {det("a", AnatomyClass::leg, 0.8, overlapping),
                                         det("a", AnatomyClass::leg, 0.9, overlapping)};
    const MatchResult m = match_detections(dets, gts, dims, 0.5, IouKind::box);
    CHECK(m.tp == 1);
    CHECK(m.fp == 1);
    CHECK(m.fn == 0);
    REQUIRE(m.pairs.size() == 1);
    CHECK(m.pairs[0].detection == 1);  // the 0.9-score detection
  }
}

TEST_CASE("match_detections with mask IoU") {
  const GridDims dims(32, 32);
  const std::vector<AnnotatedRegion> gts = {
      {AnatomyClass::wing, helpers::rect_polygon(4, 4, 8, 8)}};

  Detection with_mask = det("a", AnatomyClass::wing, 0.9, BoundingBox(4, 4, 8, 8));
  with_mask.mask = encode_rle(rasterize_polygon(helpers::rect_polygon(4, 4, 8, 8), dims));

  SUBCASE("exact mask matches with IoU 1") {
    const std::vector<Detection> dets = {with_mask};
    const MatchResult m = match_detections(dets, gts, dims, 0.99, IouKind::mask);
    CHECK(m.tp == 1);
    CHECK(m.pairs[0].iou == 1.0);
  }

  SUBCASE("missing mask raises naming the detection") {
    const std::vector<Detection> dets = {det("imgX", AnatomyClass::wing, 0.9,
                                             BoundingBox(4, 4, 8, 8))};
    CHECK_THROWS_WITH_AS(match_detections(dets, gts, dims, 0.5, IouKind::mask),
                         doctest::Contains("imgX"), ValidationError);
  }

  SUBCASE("mask dims must match the image") {
    Detection wrong = with_mask;
    wrong.mask = encode_rle(BitMask(GridDims(16, 16)));
    const std::vector<Detection> dets = {wrong};
    CHECK_THROWS_AS(match_detections(dets, gts, dims, 0.5, IouKind::mask),
                    ValidationError);
  }
}

TEST_CASE("precision_recall on the documented examples") {
  MatchResult m;
  m.tp = 2;
  m.fp = 1;
  m.fn = 0;
  const PrecisionRecall pr = precision_recall(m);
  CHECK(pr.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(pr.recall == 1.0);

  MatchResult none;
  none.fn = 5;
  CHECK(precision_recall(none).precision == 1.0);
  CHECK(precision_recall(none).recall == 0.0);

  MatchResult perfect;
  perfect.tp = 4;
  CHECK(precision_recall(perfect).precision == 1.0);
  CHECK(precision_recall(perfect).recall == 1.0);
}

TEST_CASE("tp/fp/fn always partition detections and ground truths") {
  Rng rng(83);
  for (int i = 0; i < 100; ++i) {
    const RandomInstance inst = make_instance(rng, 10, 8);
    int total_gt = 0;
    int total_det = 0;
    MatchResult pooled;
    for (const AnnotatedImage& img : inst.ds.images()) {
      std::vector<Detection> dets;
      for (const Detection& d : inst.dets) {
        if (d.image_id == img.id()) dets.push_back(d);
      }
      const MatchResult m =
          match_detections(dets, img.regions(), img.dims(), 0.5, IouKind::box);
      CHECK(m.tp + m.fp == static_cast<int>(dets.size()));
      CHECK(m.tp + m.fn == static_cast<int>(img.regions().size()));
      total_gt += static_cast<int>(img.regions().size());
      total_det += static_cast<int>(dets.size());
      pooled.tp += m.tp;
      pooled.fp += m.fp;
      pooled.fn += m.fn;
    }
    CHECK(pooled.tp + pooled.fp == total_det);
    CHECK(pooled.tp + pooled.fn == total_gt);
  }
}

TEST_CASE("greedy matching never beats maximum bipartite matching") {
  Rng rng(89);
  for (int i = 0; i < 200; ++i) {
    const int n_det = static_cast<int>(rng.uniform_int(0, 8));
    const int n_gt = static_cast<int>(rng.uniform_int(0, 8));
    std::vector<Detection> dets;
    std::vector<AnnotatedRegion> gts;
    for (int g = 0; g < n_gt; ++g) {
      gts.push_back({AnatomyClass::leg,
                     helpers::rect_polygon(rng.uniform_int(0, 30), rng.uniform_int(0, 30),
                                           rng.uniform_int(4, 20), rng.uniform_int(4, 20))});
    }
    for (int d = 0; d < n_det; ++d) {
      dets.push_back(det("a", AnatomyClass::leg, rng.uniform01(),
                         BoundingBox(rng.uniform_int(0, 30), rng.uniform_int(0, 30),
                                     rng.uniform_int(4, 20), rng.uniform_int(4, 20))));
    }
    const double thr = rng.uniform(0.1, 0.9);
    const MatchResult greedy =
        match_detections(dets, gts, GridDims(64, 64), thr, IouKind::box);

    std::vector<std::vector<double>> iou(static_cast<std::size_t>(n_det),
                                         std::vector<double>(static_cast<std::size_t>(n_gt)));
    for (int d = 0; d < n_det; ++d) {
      for (int g = 0; g < n_gt; ++g) {
        double min_x = 1e18, min_y = 1e18, max_x = -1e18, max_y = -1e18;
        for (const Point& p : gts[static_cast<std::size_t>(g)].polygon.vertices()) {
          min_x = std::min(min_x, p.x);
          min_y = std::min(min_y, p.y);
          max_x = std::max(max_x, p.x);
          max_y = std::max(max_y, p.y);
        }
        iou[static_cast<std::size_t>(d)][static_cast<std::size_t>(g)] = box_iou(
            dets[static_cast<std::size_t>(d)].box,
            BoundingBox(min_x, min_y, max_x - min_x, max_y - min_y));
      }
    }
    CHECK(greedy.tp <= oracles::max_matching_tp(iou, thr));
  }
}

TEST_CASE("average_precision boundary conventions") {
  const AnnotatedDataset empty_ds(
      {helpers::image_with("a", GridDims(64, 64), {})});

  SUBCASE("no gt and no detections is 1.0") {
    CHECK(average_precision(empty_ds, {}, AnatomyClass::leg, 0.5, IouKind::box) == 1.0);
  }

  SUBCASE("no gt with a detection is 0.0") {
    const std::vector<Detection> dets = {det("a", AnatomyClass::leg, 0.9,
                                             BoundingBox(0, 0, 5, 5))};
    CHECK(average_precision(empty_ds, dets, AnatomyClass::leg, 0.5, IouKind::box) == 0.0);
  }

  SUBCASE("single perfect detection is 1.0") {
    const AnnotatedDataset ds({helpers::image_with(
        "a", GridDims(64, 64), {{AnatomyClass::leg, helpers::rect_polygon(2, 2, 9, 9)}})});
    const std::vector<Detection> dets = {det("a", AnatomyClass::leg, 0.8,
                                             BoundingBox(2, 2, 9, 9))};
    CHECK(average_precision(ds, dets, AnatomyClass::leg, 0.5, IouKind::box) == 1.0);
  }

  SUBCASE("gt without detections is 0.0") {
    const AnnotatedDataset ds({helpers::image_with(
        "a", GridDims(64, 64), {{AnatomyClass::leg, helpers::rect_polygon(2, 2, 9, 9)}})});
    CHECK(average_precision(ds, {}, AnatomyClass::leg, 0.5, IouKind::box) == 0.0);
  }
}

TEST_CASE("average_precision reproduces the worked 3-detection example") {
  // 2 gts; detections: 0.9 true, 0.8 false, 0.7 true.
  const AnnotatedDataset ds({helpers::image_with(
      "a", GridDims(64, 64),
      {{AnatomyClass::leg, helpers::rect_polygon(0, 0, 10, 10)},
       {AnatomyClass::leg, helpers::rect_polygon(30, 30, 10, 10)}})});
  const std::vector<Detection> dets = {
      det("a", AnatomyClass::leg, 0.9, BoundingBox(0, 0, 10, 10)),
      det("a", AnatomyClass::leg, 0.8, BoundingBox(50, 0, 5, 5)),
      det("a", AnatomyClass::leg, 0.7, BoundingBox(30, 30, 10, 10))};
  const double ap = average_precision(ds, dets, AnatomyClass::leg, 0.5, IouKind::box);
  // Envelope: 1.0 for r <= 0.5 (51 levels), 2/3 above (50 levels).
  double expected = 0.0;
  for (int level = 0; level <= 100; ++level) {
    expected += level <= 50 ? 1.0 : 2.0 / 3.0;
  }
  expected /= 101.0;
  CHECK(ap == expected);
  CHECK(ap == doctest::Approx(0.8350).epsilon(1e-3));
}

TEST_CASE("average_precision equals the brute-force threshold oracle") {
  Rng rng(97);
  for (int i = 0; i < 200; ++i) {
    const RandomInstance inst = make_instance(rng, 10, 5);
    const double thr = rng.uniform(0.1, 0.9);
    const double ap =
        average_precision(inst.ds, inst.dets, AnatomyClass::leg, thr, IouKind::box);
    const double expected = oracles::brute_force_ap(inst.abstract, thr);
    CHECK(ap == expected);
  }
}

TEST_CASE("mean_average_precision averages the four classes") {
  // thorax perfect (1.0), abdomen absent everywhere (1.0), wing gt without
  // detections (0.0), leg half-matched.
  const AnnotatedDataset ds({helpers::image_with(
      "a", GridDims(64, 64),
      {{AnatomyClass::thorax, helpers::rect_polygon(0, 0, 10, 10)},
       {AnatomyClass::wing, helpers::rect_polygon(20, 20, 10, 10)},
       {AnatomyClass::leg, helpers::rect_polygon(40, 0, 10, 10)},
       {AnatomyClass::leg, helpers::rect_polygon(40, 20, 10, 10)}})});
  const std::vector<Detection> dets = {
      det("a", AnatomyClass::thorax, 0.9, BoundingBox(0, 0, 10, 10)),
      det("a", AnatomyClass::leg, 0.8, BoundingBox(40, 0, 10, 10))};
  const double map = mean_average_precision(ds, dets, 0.5, IouKind::box);
  const double leg_ap =
      average_precision(ds, dets, AnatomyClass::leg, 0.5, IouKind::box);
  CHECK(map == doctest::Approx((1.0 + 1.0 + 0.0 + leg_ap) / 4.0).epsilon(1e-12));
}

TEST_CASE("build_report on boundary inputs") {
  const AnnotatedDataset ds = helpers::test_set_fixture();
  const std::vector<double> thresholds = {0.3, 0.5, 0.7};

  SUBCASE("empty predictions: recall 0, vacuous precision 1") {
    const EvaluationReport report = build_report(ds, {}, thresholds, IouKind::box);
    for (const AnatomyClass cls : kAnatomyClasses) {
      for (const auto& cell : report.cells[static_cast<std::size_t>(cls)]) {
        CHECK(cell.pr.precision == 1.0);
        CHECK(cell.pr.recall == 0.0);
        CHECK(cell.ap == 0.0);
      }
    }
    for (const double m : report.map) CHECK(m == 0.0);
  }

  SUBCASE("unknown image id raises") {
    const std::vector<Detection> dets = {det("ghost.jpg", AnatomyClass::leg, 0.5,
                                             BoundingBox(0, 0, 5, 5))};
    CHECK_THROWS_WITH_AS(build_report(ds, dets, thresholds, IouKind::box),
                         doctest::Contains("ghost.jpg"), ValidationError);
  }

  SUBCASE("threshold validation") {
    CHECK_THROWS_AS(build_report(ds, {}, {}, IouKind::box), ValidationError);
    const std::vector<double> bad = {0.0};
    CHECK_THROWS_AS(build_report(ds, {}, bad, IouKind::box), ValidationError);
  }

  SUBCASE("mAP equals the mean of per-class APs") {
    std::vector<Detection> dets;
    for (const AnnotatedImage& img : ds.images()) {
      int i = 0;
      for (const AnnotatedRegion& region : img.regions()) {
        if (++i % 2 == 0) continue;  // drop half to mix tp and fn
        const auto& vs = region.polygon.vertices();
        dets.push_back(det(img.id(), region.cls, 0.5 + 0.001 * i,
                           BoundingBox(vs[0].x, vs[0].y, vs[2].x - vs[0].x,
                                       vs[2].y - vs[0].y)));
      }
    }
    const EvaluationReport report = build_report(ds, dets, thresholds, IouKind::box);
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      double sum = 0.0;
      for (const AnatomyClass cls : kAnatomyClasses) {
        sum += report.cells[static_cast<std::size_t>(cls)][t].ap;
        CHECK(report.cells[static_cast<std::size_t>(cls)][t].pr.precision >= 0.0);
        CHECK(report.cells[static_cast<std::size_t>(cls)][t].pr.precision <= 1.0);
        CHECK(report.cells[static_cast<std::size_t>(cls)][t].pr.recall >= 0.0);
        CHECK(report.cells[static_cast<std::size_t>(cls)][t].pr.recall <= 1.0);
      }
      CHECK(report.map[t] == doctest::Approx(sum / 4.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("build_report reproduces a hand-enumerated table") {
  // Two images; per class, counts constructed by hand:
  //   thorax: 1 gt, 1 exact match           -> tp 1 fp 0 fn 0: P 1,   R 1
  //   abdomen: 2 gt, 1 match + 1 miss       -> tp 1 fp 0 fn 1: P 1,   R 1/2
  //   wing: 1 gt, 1 match + 1 false alarm   -> tp 1 fp 1 fn 0: P 1/2, R 1
  //   leg: 2 gt, no detections              -> tp 0 fp 0 fn 2: P 1,   R 0
  const AnnotatedDataset ds(
      {helpers::image_with("one", GridDims(64, 64),
                           {{AnatomyClass::thorax, helpers::rect_polygon(0, 0, 10, 10)},
                            {AnatomyClass::abdomen, helpers::rect_polygon(20, 0, 10, 10)},
                            {AnatomyClass::leg, helpers::rect_polygon(40, 0, 4, 20)}}),
       helpers::image_with("two", GridDims(64, 64),
                           {{AnatomyClass::abdomen, helpers::rect_polygon(0, 30, 10, 10)},
                            {AnatomyClass::wing, helpers::rect_polygon(20, 30, 10, 10)},
                            {AnatomyClass::leg, helpers::rect_polygon(40, 30, 4, 20)}})});
  const std::vector<Detection> dets = {
      det("one", AnatomyClass::thorax, 0.9, BoundingBox(0, 0, 10, 10)),
      det("one", AnatomyClass::abdomen, 0.8, BoundingBox(20, 0, 10, 10)),
      det("two", AnatomyClass::wing, 0.7, BoundingBox(20, 30, 10, 10)),
      det("two", AnatomyClass::wing, 0.6, BoundingBox(50, 50, 5, 5))};
  const std::vector<double> thresholds = {0.5};
  const EvaluationReport report = build_report(ds, dets, thresholds, IouKind::box);

  const auto cell = [&](AnatomyClass cls) {
    return report.cells[static_cast<std::size_t>(cls)][0];
  };
  CHECK(cell(AnatomyClass::thorax).pr.precision == 1.0);
  CHECK(cell(AnatomyClass::thorax).pr.recall == 1.0);
  CHECK(cell(AnatomyClass::abdomen).pr.precision == 1.0);
  CHECK(cell(AnatomyClass::abdomen).pr.recall == 0.5);
  CHECK(cell(AnatomyClass::wing).pr.precision == 0.5);
  CHECK(cell(AnatomyClass::wing).pr.recall == 1.0);
  CHECK(cell(AnatomyClass::leg).pr.precision == 1.0);
  CHECK(cell(AnatomyClass::leg).pr.recall == 0.0);

  // APs by the same construction: thorax 1; abdomen envelope 1.0 for r <= 0.5;
  // wing 1.0 everywhere (fp scores below the tp); leg 0.
  CHECK(cell(AnatomyClass::thorax).ap == 1.0);
  CHECK(cell(AnatomyClass::abdomen).ap == doctest::Approx(51.0 / 101.0).epsilon(1e-12));
  CHECK(cell(AnatomyClass::wing).ap == 1.0);
  CHECK(cell(AnatomyClass::leg).ap == 0.0);
  CHECK(report.map[0] ==
        doctest::Approx((1.0 + 51.0 / 101.0 + 1.0 + 0.0) / 4.0).epsilon(1e-12));
}

TEST_CASE("reports are deterministic") {
  const AnnotatedDataset ds = helpers::test_set_fixture();
  std::vector<Detection> dets;
  Rng rng(101);
  for (const AnnotatedImage& img : ds.images()) {
    for (const AnnotatedRegion& region : img.regions()) {
      if (!rng.bernoulli(0.7)) continue;
      const auto& vs = region.polygon.vertices();
      dets.push_back(det(img.id(), region.cls, rng.uniform01(),
                         BoundingBox(vs[0].x + rng.uniform_int(0, 3), vs[0].y,
                                     vs[2].x - vs[0].x, vs[2].y - vs[0].y)));
    }
  }
  const std::vector<double> thresholds = {0.3, 0.5, 0.7};
  const EvaluationReport a = build_report(ds, dets, thresholds, IouKind::box);
  const EvaluationReport b = build_report(ds, dets, thresholds, IouKind::box);
  CHECK(render_report(a, ReportFormat::json) == render_report(b, ReportFormat::json));
  CHECK(render_report(a, ReportFormat::csv) == render_report(b, ReportFormat::csv));
  CHECK(render_report(a, ReportFormat::markdown) == render_report(b, ReportFormat::markdown));
}

TEST_CASE("markdown renderer reproduces the fixture table rows") {
  EvaluationReport report;
  report.thresholds = {0.30, 0.50, 0.70};
  report.kind = IouKind::mask;
  const auto set_row = [&](AnatomyClass cls, std::array<double, 6> values) {
    auto& cells = report.cells[static_cast<std::size_t>(cls)];
    for (int t = 0; t < 3; ++t) {
      cells.push_back({{values[static_cast<std::size_t>(2 * t)],
                        values[static_cast<std::size_t>(2 * t + 1)]},
                       0.0});
    }
  };
  set_row(AnatomyClass::thorax, {0.96, 0.96, 1.00, 0.875, 1.00, 0.52});
  set_row(AnatomyClass::abdomen, {0.9523, 0.9523, 1.00, 0.8571, 1.00, 0.6190});
  set_row(AnatomyClass::wing, {1.00, 0.8836, 1.00, 0.8181, 1.00, 0.6136});
  set_row(AnatomyClass::leg, {0.9546, 0.3576, 1.00, 0.2140, 1.00, 0.1925});
  report.map = {0.5349, 0.5238, 0.4120};

  const std::string md = render_report(report, ReportFormat::markdown);
  CHECK(md.find("| Thorax | 96 | 96 | 100 | 87.50 | 100 | 52 |") != std::string::npos);
  CHECK(md.find("| Abdomen | 95.23 | 95.23 | 100 | 85.71 | 100 | 61.90 |") != std::string::npos);
  CHECK(md.find("| Wing | 100 | 88.36 | 100 | 81.81 | 100 | 61.36 |") != std::string::npos);
  CHECK(md.find("| Leg | 95.46 | 35.76 | 100 | 21.40 | 100 | 19.25 |") != std::string::npos);
  CHECK(md.find("IoU kind: mask") != std::string::npos);
}

TEST_CASE("format_percent trims exact-integer percentages only") {
  CHECK(format_percent(1.0) == "100");
  CHECK(format_percent(0.96) == "96");
  CHECK(format_percent(0.875) == "87.50");
  CHECK(format_percent(0.52) == "52");
  CHECK(format_percent(0.0) == "0");
  CHECK(format_percent(0.8181) == "81.81");
}

TEST_CASE("csv renderer emits one row per class and threshold") {
  const AnnotatedDataset ds({helpers::image_with(
      "a", GridDims(64, 64), {{AnatomyClass::thorax, helpers::rect_polygon(0, 0, 10, 10)}})});
  const std::vector<double> thresholds = {0.3, 0.5};
  const EvaluationReport report = build_report(ds, {}, thresholds, IouKind::box);
  const std::string csv = render_report(report, ReportFormat::csv);
  CHECK(csv.rfind("class,iou_threshold,precision,recall,ap\n", 0) == 0);
  std::size_t rows = 0;
  for (const char c : csv) rows += c == '\n' ? 1 : 0;
  CHECK(rows == 1 + 4 * 2);
  CHECK(csv.find("thorax,0.30,1.000000,0.000000,0.000000") != std::string::npos);
}

TEST_SUITE_END();
