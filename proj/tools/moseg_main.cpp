// moseg: batch evaluation toolkit for insect-anatomy instance segmentation.
//
// Subcommands: validate, stats, evaluate, augment, anchors, losscheck.
// Exit codes: 0 success, 1 domain/validation failure, 2 I/O or usage failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "moseg/anchors.hpp"
#include "moseg/dataset.hpp"
#include "moseg/losses.hpp"
#include "moseg/metrics.hpp"
#include "moseg/predictions.hpp"
#include "moseg/report.hpp"
#include "moseg/rng.hpp"
#include "moseg/transforms.hpp"
#include "moseg/via.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw moseg::IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw moseg::IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw moseg::IoError("failed writing '" + path + "'");
}

struct CommonOptions {
  std::string class_key = "anatomy";
  std::string format = "json";
};

moseg::AnnotatedDataset load_ground_truth(const std::string& path,
                                          const std::string& class_key) {
  return moseg::parse_via(read_file(path), {class_key});
}

std::string fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

// ---- validate --------------------------------------------------------------

int cmd_validate(const std::string& gt_path, const std::string& class_key) {
  const std::string doc = read_file(gt_path);
  const auto diagnostics = moseg::validate_via(doc, {class_key});
  if (diagnostics.empty()) {
    std::cout << "0 errors\n";
    return kExitOk;
  }
  for (const auto& d : diagnostics) {
    std::cout << (d.image_id.empty() ? std::string("<document>") : d.image_id)
              << ": " << d.message << "\n";
  }
  std::cout << diagnostics.size() << " error" << (diagnostics.size() == 1 ? "" : "s")
            << "\n";
  return kExitValidation;
}

// ---- stats -----------------------------------------------------------------

int cmd_stats(const std::string& gt_path, const CommonOptions& common,
              const std::string& out_path) {
  const moseg::ClassCounts counts =
      moseg::dataset_stats(load_ground_truth(gt_path, common.class_key));

  std::string rendered;
  if (common.format == "json") {
    json root;
    root["images"] = counts.images;
    for (const auto cls : moseg::kAnatomyClasses) {
      root["regions"][std::string(moseg::class_name(cls))] = counts[cls];
    }
    rendered = root.dump(2) + "\n";
  } else if (common.format == "csv") {
    rendered = "images,thorax,abdomen,wing,leg\n" + std::to_string(counts.images);
    for (const auto cls : moseg::kAnatomyClasses) {
      rendered += "," + std::to_string(counts[cls]);
    }
    rendered += "\n";
  } else {
    rendered = "| Class | Count |\n|---|---|\n";
    for (const auto cls : moseg::kAnatomyClasses) {
      rendered += "| " + std::string(moseg::class_display_name(cls)) + " | " +
                  std::to_string(counts[cls]) + " |\n";
    }
    rendered += "\nImages: " + std::to_string(counts.images) + "\n";
  }
  if (!out_path.empty()) {
    write_file(out_path, rendered);
  }
  std::cout << rendered;
  return kExitOk;
}

// ---- evaluate ----------------------------------------------------------------

int cmd_evaluate(const std::string& gt_path, const std::string& pred_path,
                 const CommonOptions& common, const std::string& out_path,
                 const std::vector<double>& thresholds, const std::string& kind_name) {
  const moseg::AnnotatedDataset ds = load_ground_truth(gt_path, common.class_key);
  const std::vector<moseg::Detection> dets =
      moseg::parse_predictions(read_file(pred_path));
  const moseg::IouKind kind =
      kind_name == "mask" ? moseg::IouKind::mask : moseg::IouKind::box;

  const moseg::EvaluationReport report =
      moseg::build_report(ds, dets, thresholds, kind);
  const std::string rendered =
      moseg::render_report(report, moseg::parse_report_format(common.format));
  if (!out_path.empty()) {
    write_file(out_path, rendered);
  } else {
    std::cout << rendered;
  }
  for (std::size_t t = 0; t < report.thresholds.size(); ++t) {
    std::cout << "mAP@" << fixed(report.thresholds[t], 2) << " = "
              << fixed(report.map[t], 6) << "\n";
  }
  return kExitOk;
}

// ---- augment -----------------------------------------------------------------

int cmd_augment(const std::string& gt_path, const std::string& out_path,
                const CommonOptions& common, const moseg::AugmentConfig& cfg) {
  const moseg::AnnotatedDataset ds = load_ground_truth(gt_path, common.class_key);
  const moseg::AnnotatedDataset augmented = moseg::augment(ds, cfg);
  const std::string rendered = moseg::serialize_via(augmented, {common.class_key});
  if (out_path.empty()) {
    std::cout << rendered;
  } else {
    write_file(out_path, rendered);
    std::cout << augmented.images().size() << " images written to " << out_path
              << "\n";
  }
  return kExitOk;
}

// ---- anchors -----------------------------------------------------------------

json anchor_to_json(const moseg::Anchor& a) {
  return {{"x", a.box.x}, {"y", a.box.y}, {"w", a.box.w}, {"h", a.box.h},
          {"level", a.level}};
}

int cmd_anchors(const moseg::AnchorConfig& cfg, moseg::GridDims dims,
                const std::string& gt_path, const std::string& image_id,
                const CommonOptions& common, const std::string& out_path) {
  const std::vector<moseg::Anchor> anchors = moseg::generate_anchors(cfg, dims);

  json root;
  root["image"] = {{"width", dims.width}, {"height", dims.height}};
  json anchor_rows = json::array();
  for (const moseg::Anchor& a : anchors) anchor_rows.push_back(anchor_to_json(a));
  root["anchors"] = std::move(anchor_rows);

  if (!gt_path.empty()) {
    const moseg::AnnotatedDataset ds = load_ground_truth(gt_path, common.class_key);
    if (ds.images().empty()) {
      throw moseg::ValidationError("ground-truth file has no images");
    }
    const moseg::AnnotatedImage* img =
        image_id.empty() ? &ds.images()[0] : ds.find(image_id);
    if (img == nullptr) {
      throw moseg::ValidationError("image id '" + image_id + "' not in ground truth");
    }

    std::vector<moseg::BoundingBox> gt_boxes;
    moseg::BitMask gt_mask(img->dims());
    for (const moseg::AnnotatedRegion& region : img->regions()) {
      const auto& vs = region.polygon.vertices();
      double min_x = vs[0].x, max_x = vs[0].x, min_y = vs[0].y, max_y = vs[0].y;
      for (const moseg::Point& p : vs) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
      }
      gt_boxes.emplace_back(min_x, min_y, max_x - min_x, max_y - min_y);
      const moseg::BitMask region_mask =
          moseg::rasterize_polygon(region.polygon, img->dims());
      for (int y = 0; y < img->dims().height; ++y) {
        for (int x = 0; x < img->dims().width; ++x) {
          if (region_mask.test(x, y)) gt_mask.set(x, y);
        }
      }
    }

    const auto labels = moseg::match_anchors(anchors, gt_boxes, cfg.positive_iou,
                                             cfg.negative_iou);
    root["image"]["id"] = img->id();
    json label_rows = json::array();
    for (std::size_t a = 0; a < anchors.size(); ++a) {
      json row;
      switch (labels[a].kind) {
        case moseg::MatchLabel::Kind::positive: row["label"] = "positive"; break;
        case moseg::MatchLabel::Kind::negative: row["label"] = "negative"; break;
        case moseg::MatchLabel::Kind::ignore: row["label"] = "ignore"; break;
      }
      if (labels[a].kind == moseg::MatchLabel::Kind::positive) {
        row["gt"] = labels[a].gt_index;
        const moseg::RegressionTarget t = moseg::encode_box(
            anchors[a], gt_boxes[static_cast<std::size_t>(labels[a].gt_index)]);
        row["target"] = {{"tx", t.tx}, {"ty", t.ty}, {"tw", t.tw}, {"th", t.th}};
        try {
          const moseg::PixelCounts counts = moseg::fg_bg_ratio(anchors[a], gt_mask);
          row["foreground"] = counts.foreground;
          row["background"] = counts.background;
        } catch (const moseg::ValidationError&) {
          // anchor entirely off-grid; counts omitted
        }
      }
      label_rows.push_back(std::move(row));
    }
    root["labels"] = std::move(label_rows);
  }

  const std::string rendered = root.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << rendered;
  } else {
    write_file(out_path, rendered);
  }
  return kExitOk;
}

// ---- losscheck -----------------------------------------------------------------

double central_diff(const std::function<double(double)>& f, double x) {
  const double h = 1e-6;
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

double relative_error(double reference, double candidate) {
  const double scale = std::max({std::abs(reference), std::abs(candidate), 1e-12});
  return std::abs(reference - candidate) / scale;
}

int cmd_losscheck(double gamma, int samples, std::uint64_t seed) {
  const moseg::FocalConfig focal_cfg{gamma};
  focal_cfg.validate();
  moseg::Rng rng(seed);

  struct Kernel {
    std::string name;
    std::function<double()> run;  // returns max relative error over `samples`
  };

  const auto sweep = [&](auto&& value_of, auto&& grad_of, double lo, double hi,
                         auto&& admit) {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      double x = rng.uniform(lo, hi);
      if (!admit(x)) continue;
      const double fd = central_diff(value_of, x);
      worst = std::max(worst, relative_error(fd, grad_of(x)));
    }
    return worst;
  };

  const auto admit_all = [](double) { return true; };
  std::vector<std::pair<std::string, double>> results;
  results.emplace_back("cce", sweep([](double p) { return moseg::cce(p).value; },
                                    [](double p) { return moseg::cce(p).grad; },
                                    0.02, 0.98, admit_all));
  results.emplace_back("bce",
                       sweep([](double p) { return moseg::bce(p, 0).value; },
                             [](double p) { return moseg::bce(p, 0).grad; },
                             0.02, 0.98, admit_all));
  results.emplace_back(
      "focal",
      sweep([&](double p) { return moseg::focal(p, focal_cfg).value; },
            [&](double p) { return moseg::focal(p, focal_cfg).grad; }, 0.02,
            0.98, admit_all));
  results.emplace_back(
      "smooth_l1",
      sweep([](double x) { return moseg::smooth_l1(x).value; },
            [](double x) { return moseg::smooth_l1(x).grad; }, -3.0, 3.0,
            [](double x) { return std::abs(std::abs(x) - 1.0) > 0.01; }));

  double worst_reg = 0.0;
  for (int i = 0; i < samples; ++i) {
    moseg::RegressionTarget pred{rng.uniform(-2, 2), rng.uniform(-2, 2),
                                 rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const moseg::RegressionTarget target{rng.uniform(-2, 2), rng.uniform(-2, 2),
                                         rng.uniform(-2, 2), rng.uniform(-2, 2)};
    if (std::abs(std::abs(target.tx - pred.tx) - 1.0) < 0.01) continue;
    const double analytic = moseg::regressor_loss(pred, target).grad[0];
    const double fd = central_diff(
        [&](double v) {
          moseg::RegressionTarget probe = pred;
          probe.tx = v;
          return moseg::regressor_loss(probe, target).value;
        },
        pred.tx);
    worst_reg = std::max(worst_reg, relative_error(fd, analytic));
  }
  results.emplace_back("regressor_loss", worst_reg);

  double worst_mask = 0.0;
  for (int i = 0; i < std::max(1, samples / 50); ++i) {
    moseg::BitMask gt(moseg::GridDims(5, 5));
    moseg::FloatGrid pred(moseg::GridDims(5, 5), 0.0);
    for (int y = 0; y < 5; ++y) {
      for (int x = 0; x < 5; ++x) {
        if (rng.bernoulli(0.5)) gt.set(x, y);
        pred.at(x, y) = rng.uniform(0.05, 0.95);
      }
    }
    const moseg::MaskLoss loss = moseg::mask_loss(pred, gt, focal_cfg);
    for (int probe = 0; probe < 10; ++probe) {
      const int x = static_cast<int>(rng.uniform_int(0, 4));
      const int y = static_cast<int>(rng.uniform_int(0, 4));
      const double fd = central_diff(
          [&](double v) {
            moseg::FloatGrid grid = pred;
            grid.at(x, y) = v;
            return moseg::mask_loss(grid, gt, focal_cfg).value;
          },
          pred.at(x, y));
      worst_mask = std::max(worst_mask, relative_error(fd, loss.grad.at(x, y)));
    }
  }
  results.emplace_back("mask_loss", worst_mask);

  constexpr double kTolerance = 1e-5;
  bool ok = true;
  std::string worst_name;
  double worst_value = -1.0;
  for (const auto& [name, error] : results) {
    std::cout << name << ": max relative gradient error " << fixed(error, 10)
              << (error < kTolerance ? "" : "  FAIL") << "\n";
    if (error >= kTolerance) ok = false;
    if (error > worst_value) {
      worst_value = error;
      worst_name = name;
    }
  }
  if (gamma == 0.0) {
    // Definitional identity worth asserting: the modulating factor is 1.
    bool identical = true;
    for (int i = 0; i < samples; ++i) {
      const double p = rng.uniform(0.02, 1.0);
      const auto f = moseg::focal(p, focal_cfg);
      const auto c = moseg::cce(p);
      identical = identical && f.value == c.value && f.grad == c.grad;
    }
    std::cout << "focal(gamma=0) == cce: " << (identical ? "yes" : "NO") << "\n";
    if (!identical) ok = false;
  }
  std::cout << (ok ? "losscheck passed" : "losscheck FAILED (worst: " + worst_name + ")")
            << "\n";
  return ok ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Instance-segmentation geometry, loss and evaluation toolkit"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string gt_path;
  std::string pred_path;
  std::string out_path;
  std::string iou_kind = "box";
  std::vector<double> thresholds = {0.3, 0.5, 0.7};
  double gamma = 2.0;
  std::uint64_t seed = 0;

  auto* validate = app.add_subcommand("validate", "Check a VIA ground-truth file");
  validate->add_option("--gt", gt_path, "VIA ground-truth JSON")->required();
  validate->add_option("--class-key", common.class_key, "region_attributes label key");

  auto* stats = app.add_subcommand("stats", "Per-class region counts");
  stats->add_option("--gt", gt_path, "VIA ground-truth JSON")->required();
  stats->add_option("--out", out_path, "also write the rendering here");
  stats->add_option("--format", common.format, "json|csv|md")
      ->check(CLI::IsMember({"json", "csv", "md"}));
  stats->add_option("--class-key", common.class_key, "region_attributes label key");

  auto* evaluate = app.add_subcommand("evaluate", "Match predictions and report P/R/AP/mAP");
  evaluate->add_option("--gt", gt_path, "VIA ground-truth JSON")->required();
  evaluate->add_option("--pred", pred_path, "predictions JSON")->required();
  evaluate->add_option("--out", out_path, "report file (stdout when omitted)");
  evaluate->add_option("--format", common.format, "json|csv|md")
      ->check(CLI::IsMember({"json", "csv", "md"}));
  evaluate->add_option("--iou-kind", iou_kind, "box|mask")
      ->check(CLI::IsMember({"box", "mask"}));
  evaluate->add_option("--thresholds", thresholds, "IoU thresholds")->delimiter(',');
  evaluate->add_option("--class-key", common.class_key, "region_attributes label key");

  moseg::AugmentConfig aug_cfg;
  auto* augment = app.add_subcommand("augment", "Write a deterministic augmented dataset");
  augment->add_option("--gt", gt_path, "VIA ground-truth JSON")->required();
  augment->add_option("--out", out_path, "output VIA JSON (stdout when omitted)");
  augment->add_option("--seed", seed, "random seed");
  augment->add_option("--copies", aug_cfg.copies, "augmented copies per image")
      ->check(CLI::NonNegativeNumber);
  augment->add_option("--flip-prob", aug_cfg.flip_prob, "horizontal flip probability")
      ->check(CLI::Range(0.0, 1.0));
  augment->add_option("--sigma-min", aug_cfg.sigma_min, "blur sigma range start");
  augment->add_option("--sigma-max", aug_cfg.sigma_max, "blur sigma range end");
  augment->add_option("--class-key", common.class_key, "region_attributes label key");

  moseg::AnchorConfig anchor_cfg;
  int width = 1024;
  int height = 1024;
  std::string image_id;
  auto* anchors = app.add_subcommand("anchors", "Dump anchors, labels and targets as JSON");
  anchors->add_option("--width", width, "image width")->check(CLI::PositiveNumber);
  anchors->add_option("--height", height, "image height")->check(CLI::PositiveNumber);
  anchors->add_option("--strides", anchor_cfg.strides, "per-level strides")->delimiter(',');
  anchors->add_option("--scales", anchor_cfg.scales, "anchor scales")->delimiter(',');
  anchors->add_option("--ratios", anchor_cfg.ratios, "aspect ratios")->delimiter(',');
  anchors->add_flag("--clip", anchor_cfg.clip_to_image, "clip anchors to the image");
  anchors->add_option("--pos-thr", anchor_cfg.positive_iou, "positive IoU threshold");
  anchors->add_option("--neg-thr", anchor_cfg.negative_iou, "negative IoU threshold");
  anchors->add_option("--gt", gt_path, "optional VIA file for matching");
  anchors->add_option("--image", image_id, "image id inside --gt (default: first)");
  anchors->add_option("--out", out_path, "output JSON (stdout when omitted)");
  anchors->add_option("--class-key", common.class_key, "region_attributes label key");

  int samples = 1000;
  auto* losscheck = app.add_subcommand("losscheck", "Analytic vs finite-difference gradients");
  losscheck->add_option("--gamma", gamma, "focal gamma");
  losscheck->add_option("--samples", samples, "points per kernel")
      ->check(CLI::PositiveNumber);
  losscheck->add_option("--seed", seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage problems are I/O-class failures; --help exits 0.
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitIo;
  }

  try {
    if (validate->parsed()) return cmd_validate(gt_path, common.class_key);
    if (stats->parsed()) return cmd_stats(gt_path, common, out_path);
    if (evaluate->parsed()) {
      return cmd_evaluate(gt_path, pred_path, common, out_path, thresholds, iou_kind);
    }
    if (augment->parsed()) {
      aug_cfg.seed = seed;
      return cmd_augment(gt_path, out_path, common, aug_cfg);
    }
    if (anchors->parsed()) {
      return cmd_anchors(anchor_cfg, moseg::GridDims(width, height), gt_path,
                         image_id, common, out_path);
    }
    if (losscheck->parsed()) return cmd_losscheck(gamma, samples, seed);
  } catch (const moseg::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const moseg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitIo;
}
