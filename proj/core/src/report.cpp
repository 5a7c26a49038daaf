#include "moseg/report.hpp"

#include <cstdio>

#include <json.hpp>

namespace moseg {

namespace {

using json = nlohmann::ordered_json;

std::string fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

std::string render_json(const EvaluationReport& report) {
  json root;
  root["iou_kind"] = std::string(iou_kind_name(report.kind));
  root["thresholds"] = report.thresholds;
  json classes = json::object();
  for (const AnatomyClass cls : kAnatomyClasses) {
    json rows = json::array();
    const auto& cells = report.cells[static_cast<std::size_t>(cls)];
    for (std::size_t t = 0; t < report.thresholds.size(); ++t) {
      rows.push_back({{"iou_threshold", report.thresholds[t]},
                      {"precision", cells[t].pr.precision},
                      {"recall", cells[t].pr.recall},
                      {"ap", cells[t].ap}});
    }
    classes[std::string(class_name(cls))] = std::move(rows);
  }
  root["classes"] = std::move(classes);
  json map_rows = json::array();
  for (std::size_t t = 0; t < report.thresholds.size(); ++t) {
    map_rows.push_back(
        {{"iou_threshold", report.thresholds[t]}, {"map", report.map[t]}});
  }
  root["map"] = std::move(map_rows);
  return root.dump(2) + "\n";
}

std::string render_csv(const EvaluationReport& report) {
  std::string out = "class,iou_threshold,precision,recall,ap\n";
  for (const AnatomyClass cls : kAnatomyClasses) {
    const auto& cells = report.cells[static_cast<std::size_t>(cls)];
    for (std::size_t t = 0; t < report.thresholds.size(); ++t) {
      out += std::string(class_name(cls)) + "," + fixed(report.thresholds[t], 2) +
             "," + fixed(cells[t].pr.precision, 6) + "," +
             fixed(cells[t].pr.recall, 6) + "," + fixed(cells[t].ap, 6) + "\n";
    }
  }
  return out;
}

std::string render_markdown(const EvaluationReport& report) {
  std::string out = "| Anatomy |";
  std::string rule = "|---|";
  for (const double thr : report.thresholds) {
    out += " Precision (%) @" + fixed(thr, 2) + " | Recall (%) @" + fixed(thr, 2) + " |";
    rule += "---|---|";
  }
  out += "\n" + rule + "\n";
  for (const AnatomyClass cls : kAnatomyClasses) {
    const auto& cells = report.cells[static_cast<std::size_t>(cls)];
    out += "| " + std::string(class_display_name(cls)) + " |";
    for (std::size_t t = 0; t < report.thresholds.size(); ++t) {
      out += " " + format_percent(cells[t].pr.precision) + " | " +
             format_percent(cells[t].pr.recall) + " |";
    }
    out += "\n";
  }
  out += "\nIoU kind: " + std::string(iou_kind_name(report.kind)) + "\n";
  out += "\n| IoU Ratio | mAP (%) |\n|---|---|\n";
  for (std::size_t t = 0; t < report.thresholds.size(); ++t) {
    out += "| " + fixed(report.thresholds[t], 2) + " | " +
           format_percent(report.map[t]) + " |\n";
  }
  return out;
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  if (name == "md" || name == "markdown") return ReportFormat::markdown;
  throw ValidationError("unknown report format '" + std::string(name) + "'");
}

std::string format_percent(double ratio) {
  std::string text = fixed(ratio * 100.0, 2);
  if (text.size() > 3 && text.compare(text.size() - 3, 3, ".00") == 0) {
    text.resize(text.size() - 3);
  }
  return text;
}

std::string render_report(const EvaluationReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::json: return render_json(report);
    case ReportFormat::csv: return render_csv(report);
    case ReportFormat::markdown: return render_markdown(report);
  }
  throw ValidationError("unhandled report format");
}

}  // namespace moseg
