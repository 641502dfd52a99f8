#pragma once

#include <string>
#include <vector>

#include "fastrec/simulator.hpp"

namespace fastrec {

/// Joins several metric logs into a per-strategy summary: final-round
/// variance and cumulative total quality over the aligned round range.
struct ReportRow {
  std::string strategy;
  int rounds = 0;
  double final_variance = 0.0;
  double cumulative_quality = 0.0;
};

struct Report {
  int aligned_rounds = 0;   // shortest log length
  bool truncated = false;   // logs had mismatched round counts
  std::vector<ReportRow> rows;
};

Report summarize_logs(const std::vector<MetricsLog>& logs);
std::string format_report_table(const Report& report);

/// Per-round line chart of one metric across logs, as a self-contained SVG.
/// metric is one of: variance, total_quality, mean_quality, tracked_user_F.
std::string render_chart_svg(const std::vector<MetricsLog>& logs,
                             const std::string& metric);

}  // namespace fastrec
