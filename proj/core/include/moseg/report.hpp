#pragma once

#include <string>

#include "moseg/metrics.hpp"

namespace moseg {

enum class ReportFormat { json, csv, markdown };

/// Parses "json" / "csv" / "md" (or "markdown"); throws ValidationError
/// otherwise.
ReportFormat parse_report_format(std::string_view name);

/// Percentage with two decimals, ".00" trimmed: 0.96 -> "96", 0.875 -> "87.50".
std::string format_percent(double ratio);

/// Renders a report:
///  - json: machine-readable, full precision;
///  - csv: header plus one row per class x threshold;
///  - markdown: one table row per class with Precision/Recall column pairs per
///    threshold, followed by an AP/mAP table.
std::string render_report(const EvaluationReport& report, ReportFormat format);

}  // namespace moseg
