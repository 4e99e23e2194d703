#pragma once

#include <string>
#include <vector>

namespace eierl {

/// One test-phase row; the row type of every CSV this project writes.
struct EpochMetrics {
  int epoch = 0;
  double success_rate = 0.0;
  double avg_reward = 0.0;
  double avg_turns = 0.0;
};

/// Writes `epoch,success_rate,avg_reward,avg_turns` plus one row per epoch.
/// Throws std::runtime_error with the path on I/O failure.
void write_metrics_csv(const std::string& path,
                       const std::vector<EpochMetrics>& rows);

/// Per-epoch arithmetic mean across seeds. All curves must have equal length.
std::vector<EpochMetrics> mean_curve(
    const std::vector<std::vector<EpochMetrics>>& per_seed);

struct CurveSeries {
  std::string label;
  std::vector<EpochMetrics> rows;
};

/// Success-rate-vs-epoch polyline chart, one polyline per series.
void write_learning_curve_svg(const std::string& path,
                              const std::vector<CurveSeries>& series);

}  // namespace eierl
