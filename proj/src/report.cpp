#include "fastrec/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace fastrec {

Report summarize_logs(const std::vector<MetricsLog>& logs) {
  Report report;
  if (logs.empty()) return report;
  size_t aligned = std::numeric_limits<size_t>::max();
  for (const auto& log : logs) aligned = std::min(aligned, log.rows.size());
  report.aligned_rounds = static_cast<int>(aligned);
  for (const auto& log : logs) {
    report.truncated |= log.rows.size() != aligned;
    ReportRow row;
    row.strategy = log.strategy;
    row.rounds = static_cast<int>(aligned);
    if (aligned > 0) {
      row.final_variance = log.rows[aligned - 1].variance;
      for (size_t k = 0; k < aligned; ++k) {
        row.cumulative_quality += log.rows[k].total_quality;
      }
    }
    report.rows.push_back(row);
  }
  return report;
}

std::string format_report_table(const Report& report) {
  std::ostringstream out;
  char buf[128];
  out << "strategy      rounds  final_variance  cumulative_quality\n";
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof buf, "%-12s  %6d  %14.6g  %18.6g\n",
                  row.strategy.c_str(), row.rounds, row.final_variance,
                  row.cumulative_quality);
    out << buf;
  }
  return out.str();
}

namespace {

double metric_value(const MetricsRow& row, const std::string& metric) {
  if (metric == "variance") return row.variance;
  if (metric == "total_quality") return row.total_quality;
  if (metric == "mean_quality") return row.mean_quality;
  if (metric == "tracked_user_F") return row.tracked_fairness.value_or(0.0);
  throw DataError("unknown chart metric '" + metric + "'");
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b"};

}  // namespace

std::string render_chart_svg(const std::vector<MetricsLog>& logs,
                             const std::string& metric) {
  const int width = 640, height = 400, margin = 50;
  double lo = 0.0, hi = 1e-12;
  int max_round = 1;
  for (const auto& log : logs) {
    for (const auto& row : log.rows) {
      const double v = metric_value(row, metric);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      max_round = std::max(max_round, row.round);
    }
  }
  const double xscale = (width - 2.0 * margin) / max_round;
  const double yscale = (height - 2.0 * margin) / (hi - lo);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\">"
      << metric << " per round</text>\n";
  // axes
  svg << "<line x1=\"" << margin << "\" y1=\"" << height - margin
      << "\" x2=\"" << width - margin << "\" y2=\"" << height - margin
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\""
      << margin << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", hi);
  svg << "<text x=\"5\" y=\"" << margin << "\" font-size=\"11\">" << buf
      << "</text>\n";
  std::snprintf(buf, sizeof buf, "%.4g", lo);
  svg << "<text x=\"5\" y=\"" << height - margin << "\" font-size=\"11\">"
      << buf << "</text>\n";
  svg << "<text x=\"" << width - margin << "\" y=\"" << height - margin + 20
      << "\" font-size=\"11\" text-anchor=\"end\">round " << max_round
      << "</text>\n";

  for (size_t i = 0; i < logs.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& row : logs[i].rows) {
      const double x = margin + row.round * xscale;
      const double y =
          height - margin - (metric_value(row, metric) - lo) * yscale;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", x, y);
      svg << buf;
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << width - margin - 5 << "\" y=\""
        << margin + 15 * (i + 1) << "\" fill=\"" << color
        << "\" font-size=\"12\" text-anchor=\"end\">" << logs[i].strategy
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace fastrec
