#include "eierl/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eierl {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void open_or_throw(std::ofstream& out, const std::string& path) {
  out.open(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
}

}  // namespace

void write_metrics_csv(const std::string& path,
                       const std::vector<EpochMetrics>& rows) {
  if (rows.empty())
    throw std::invalid_argument("write_metrics_csv: no rows for " + path);
  std::ofstream out;
  open_or_throw(out, path);
  out << "epoch,success_rate,avg_reward,avg_turns\n";
  for (const EpochMetrics& r : rows) {
    out << r.epoch << ',' << fmt(r.success_rate) << ',' << fmt(r.avg_reward)
        << ',' << fmt(r.avg_turns) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<EpochMetrics> mean_curve(
    const std::vector<std::vector<EpochMetrics>>& per_seed) {
  if (per_seed.empty())
    throw std::invalid_argument("mean_curve: no seed curves");
  const std::size_t epochs = per_seed.front().size();
  for (const auto& curve : per_seed) {
    if (curve.size() != epochs)
      throw std::invalid_argument("mean_curve: curve lengths differ");
  }
  std::vector<EpochMetrics> out(epochs);
  const double inv = 1.0 / static_cast<double>(per_seed.size());
  for (std::size_t e = 0; e < epochs; ++e) {
    EpochMetrics& row = out[e];
    row.epoch = per_seed.front()[e].epoch;
    for (const auto& curve : per_seed) {
      row.success_rate += curve[e].success_rate * inv;
      row.avg_reward += curve[e].avg_reward * inv;
      row.avg_turns += curve[e].avg_turns * inv;
    }
  }
  return out;
}

void write_learning_curve_svg(const std::string& path,
                              const std::vector<CurveSeries>& series) {
  if (series.empty())
    throw std::invalid_argument("write_learning_curve_svg: no series");
  for (const CurveSeries& s : series) {
    if (s.rows.empty())
      throw std::invalid_argument("write_learning_curve_svg: empty series '" +
                                  s.label + "'");
  }

  constexpr int kW = 720, kH = 440;
  constexpr double kLeft = 60, kRight = 20, kTop = 24, kBottom = 48;
  const double plot_w = kW - kLeft - kRight;
  const double plot_h = kH - kTop - kBottom;

  int max_epoch = 1;
  for (const CurveSeries& s : series)
    for (const EpochMetrics& r : s.rows) max_epoch = std::max(max_epoch, r.epoch);

  const auto x_of = [&](double epoch) {
    return kLeft + plot_w * (epoch / static_cast<double>(max_epoch));
  };
  const auto y_of = [&](double success) {
    return kTop + plot_h * (1.0 - success);
  };

  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#ff7f0e", "#9467bd", "#8c564b"};
  constexpr std::size_t kPaletteSize = 6;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH
      << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kW << "\" height=\"" << kH
      << "\" fill=\"white\"/>\n";

  // Axes and gridlines.
  for (int i = 0; i <= 10; i += 2) {
    const double y = y_of(i / 10.0);
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\""
        << kW - kRight << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4
        << "\" font-size=\"12\" text-anchor=\"end\" fill=\"#333333\">0."
        << i << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const int epoch = max_epoch * i / 4;
    const double x = x_of(epoch);
    svg << "<text x=\"" << x << "\" y=\"" << kH - kBottom + 18
        << "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#333333\">"
        << epoch << "</text>\n";
  }
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kH - kBottom
      << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\""
      << kW - kRight << "\" y2=\"" << kH - kBottom
      << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kH - 12
      << "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#333333\">epoch"
      << "</text>\n";
  svg << "<text x=\"16\" y=\"" << kTop + plot_h / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#333333\" "
      << "transform=\"rotate(-90 16 " << kTop + plot_h / 2
      << ")\">success rate</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % kPaletteSize];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (const EpochMetrics& r : series[i].rows) {
      svg << x_of(r.epoch) << ',' << y_of(r.success_rate) << ' ';
    }
    svg << "\"/>\n";
    const double ly = kTop + 16.0 * static_cast<double>(i + 1);
    svg << "<line x1=\"" << kW - kRight - 150 << "\" y1=\"" << ly << "\" x2=\""
        << kW - kRight - 126 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kW - kRight - 120 << "\" y=\"" << ly + 4
        << "\" font-size=\"12\" fill=\"#333333\">" << series[i].label
        << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream out;
  open_or_throw(out, path);
  out << svg.str();
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace eierl
