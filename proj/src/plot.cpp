#include "cliffmem/plot.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "cliffmem/stats.hpp"

namespace cliffmem {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 560.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 770.0;
constexpr double kTop = 60.0;
constexpr double kBottom = 500.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

// Fixed-point coordinate text keeps the output byte-stable.
std::string fx(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << v;
  std::string s = out.str();
  if (s == "-0.00") {
    s = "0.00";
  }
  return s;
}

std::string label_number(double v) {
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

struct Frame {
  double x_min, x_max, y_min, y_max;

  double px(double x) const {
    return kLeft + (x - x_min) / (x_max - x_min) * (kRight - kLeft);
  }
  double py(double y) const {
    return kBottom - (y - y_min) / (y_max - y_min) * (kBottom - kTop);
  }
};

void pad_degenerate(double& lo, double& hi, double pad) {
  if (hi - lo < 1e-12) {
    lo -= pad;
    hi += pad;
  }
}

void open_svg(std::ostringstream& svg, const std::string& title) {
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fx((kLeft + kRight) / 2) << "\" y=\"28\" "
      << "text-anchor=\"middle\" font-family=\"monospace\" font-size=\"16\">"
      << title << "</text>\n";
}

void draw_axes(std::ostringstream& svg, const std::string& x_label,
               const std::string& y_label) {
  svg << "<line x1=\"" << fx(kLeft) << "\" y1=\"" << fx(kBottom) << "\" x2=\""
      << fx(kRight) << "\" y2=\"" << fx(kBottom)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "<line x1=\"" << fx(kLeft) << "\" y1=\"" << fx(kTop) << "\" x2=\""
      << fx(kLeft) << "\" y2=\"" << fx(kBottom)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "<text x=\"" << fx((kLeft + kRight) / 2) << "\" y=\""
      << fx(kBottom + 40) << "\" text-anchor=\"middle\" "
      << "font-family=\"monospace\" font-size=\"13\">" << x_label
      << "</text>\n";
  svg << "<text x=\"20\" y=\"" << fx((kTop + kBottom) / 2)
      << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"13\" "
      << "transform=\"rotate(-90 20 " << fx((kTop + kBottom) / 2) << ")\">"
      << y_label << "</text>\n";
}

void draw_x_ticks(std::ostringstream& svg, const Frame& frame) {
  for (int i = 0; i <= 5; ++i) {
    const double x = frame.x_min + (frame.x_max - frame.x_min) * i / 5.0;
    const double px = frame.px(x);
    svg << "<line x1=\"" << fx(px) << "\" y1=\"" << fx(kBottom) << "\" x2=\""
        << fx(px) << "\" y2=\"" << fx(kBottom + 5)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << fx(px) << "\" y=\"" << fx(kBottom + 20)
        << "\" text-anchor=\"middle\" font-family=\"monospace\" "
        << "font-size=\"11\">" << label_number(x) << "</text>\n";
  }
}

void draw_legend(std::ostringstream& svg,
                 const std::vector<std::string>& labels) {
  double y = kTop + 6;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    svg << "<line x1=\"" << fx(kRight - 180) << "\" y1=\"" << fx(y)
        << "\" x2=\"" << fx(kRight - 156) << "\" y2=\"" << fx(y)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fx(kRight - 150) << "\" y=\"" << fx(y + 4)
        << "\" font-family=\"monospace\" font-size=\"11\">" << labels[i]
        << "</text>\n";
    y += 16;
  }
}

std::string render_survival_vs_depth(const std::vector<SweepRow>& rows) {
  // Series per (family, n, gamma), canonical order.
  std::map<std::tuple<std::string, std::size_t, double>, std::vector<SweepRow>>
      series;
  for (const SweepRow& row : rows) {
    series[{row.family, row.n, row.gamma}].push_back(row);
  }
  for (auto& [key, members] : series) {
    std::sort(members.begin(), members.end(),
              [](const SweepRow& a, const SweepRow& b) {
                return a.depth < b.depth;
              });
  }

  // Log-scale range over everything positive; zero rows cannot be drawn on
  // a log axis and are dropped from their polylines.
  double min_log = 0.0;
  bool any_positive = false;
  double x_lo = 0.0, x_hi = 0.0;
  bool first_row = true;
  for (const SweepRow& row : rows) {
    const double d = double(row.depth);
    if (first_row) {
      x_lo = x_hi = d;
      first_row = false;
    } else {
      x_lo = std::min(x_lo, d);
      x_hi = std::max(x_hi, d);
    }
    if (row.p_hat > 0.0) {
      any_positive = true;
      min_log = std::min(min_log, std::log10(row.p_hat));
      if (row.ci_lo > 0.0) {
        min_log = std::min(min_log, std::log10(row.ci_lo));
      }
    }
  }
  if (!any_positive) {
    min_log = -4.0;
  }
  Frame frame{x_lo, x_hi, std::floor(min_log) - 0.2, 0.05};
  pad_degenerate(frame.x_min, frame.x_max, 1.0);

  std::ostringstream svg;
  open_svg(svg, "survival probability vs depth");
  draw_axes(svg, "depth", "survival probability (log scale)");
  draw_x_ticks(svg, frame);
  for (int e = 0; e >= int(std::floor(min_log)); --e) {
    const double py = frame.py(double(e));
    svg << "<line x1=\"" << fx(kLeft - 5) << "\" y1=\"" << fx(py) << "\" x2=\""
        << fx(kLeft) << "\" y2=\"" << fx(py)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<line x1=\"" << fx(kLeft) << "\" y1=\"" << fx(py) << "\" x2=\""
        << fx(kRight) << "\" y2=\"" << fx(py)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << fx(kLeft - 8) << "\" y=\"" << fx(py + 4)
        << "\" text-anchor=\"end\" font-family=\"monospace\" "
        << "font-size=\"11\">1e" << e << "</text>\n";
  }

  std::vector<std::string> labels;
  std::size_t series_index = 0;
  for (const auto& [key, members] : series) {
    const char* color = kPalette[series_index % std::size(kPalette)];
    const auto& [family, n, gamma] = key;
    {
      std::ostringstream label;
      label << family << " n=" << n << " gamma=" << label_number(gamma);
      labels.push_back(label.str());
    }

    // Confidence band: ci_hi forward, ci_lo (clamped to the axis floor)
    // backward.
    std::ostringstream band;
    bool band_any = false;
    for (const SweepRow& row : members) {
      if (row.ci_hi <= 0.0) {
        continue;
      }
      band << (band_any ? " " : "") << fx(frame.px(double(row.depth))) << ","
           << fx(frame.py(std::log10(row.ci_hi)));
      band_any = true;
    }
    for (auto it = members.rbegin(); it != members.rend(); ++it) {
      if (it->ci_hi <= 0.0) {
        continue;
      }
      const double lo = it->ci_lo > 0.0 ? std::log10(it->ci_lo) : frame.y_min;
      band << " " << fx(frame.px(double(it->depth))) << ","
           << fx(frame.py(std::max(lo, frame.y_min)));
    }
    if (band_any) {
      svg << "<polygon points=\"" << band.str() << "\" fill=\"" << color
          << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    }

    std::ostringstream line;
    bool line_any = false;
    for (const SweepRow& row : members) {
      if (row.p_hat <= 0.0) {
        continue;
      }
      const double px = frame.px(double(row.depth));
      const double py = frame.py(std::log10(row.p_hat));
      line << (line_any ? " " : "") << fx(px) << "," << fx(py);
      line_any = true;
      svg << "<circle cx=\"" << fx(px) << "\" cy=\"" << fx(py)
          << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    if (line_any) {
      svg << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\""
          << color << "\" stroke-width=\"1.5\"/>\n";
    }
    ++series_index;
  }
  draw_legend(svg, labels);
  svg << "</svg>\n";
  return svg.str();
}

std::string render_dstar_vs_n(const std::vector<SweepRow>& rows,
                              double epsilon) {
  // One fitted memory-loss depth per (family, gamma, n).
  std::map<std::tuple<std::string, double>,
           std::map<std::size_t, std::vector<DepthSample>>>
      groups;
  for (const SweepRow& row : rows) {
    groups[{row.family, row.gamma}][row.n].push_back(
        {double(row.depth), row.p_hat, row.survivors});
  }

  struct SeriesData {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (n, d*)
  };
  std::vector<SeriesData> series;
  for (auto& [key, by_n] : groups) {
    SeriesData data;
    {
      std::ostringstream label;
      label << std::get<0>(key) << " gamma=" << label_number(std::get<1>(key));
      data.label = label.str();
    }
    for (auto& [n, samples] : by_n) {
      std::sort(samples.begin(), samples.end(),
                [](const DepthSample& a, const DepthSample& b) {
                  return a.depth < b.depth;
                });
      DecayFit fit;
      try {
        fit = fit_decay(samples, epsilon);
      } catch (const std::invalid_argument&) {
        continue;  // too few usable rows at this n; skip, don't abort
      }
      if (std::isfinite(fit.d_star_hat) && fit.d_star_hat > 0.0) {
        data.points.push_back({double(n), fit.d_star_hat});
      }
    }
    if (!data.points.empty()) {
      series.push_back(std::move(data));
    }
  }
  if (series.empty()) {
    throw std::invalid_argument(
        "no series produced a finite memory-loss depth to plot");
  }

  double x_lo = series[0].points[0].first, x_hi = x_lo;
  double y_lo = series[0].points[0].second, y_hi = y_lo;
  for (const SeriesData& data : series) {
    for (const auto& [n, dstar] : data.points) {
      x_lo = std::min(x_lo, n);
      x_hi = std::max(x_hi, n);
      y_lo = std::min(y_lo, dstar);
      y_hi = std::max(y_hi, dstar);
    }
  }
  pad_degenerate(x_lo, x_hi, 1.0);
  pad_degenerate(y_lo, y_hi, 1.0);
  Frame frame{x_lo, x_hi, 0.0, y_hi * 1.1};

  std::ostringstream svg;
  open_svg(svg, "memory-loss depth vs qubit count");
  draw_axes(svg, "n (qubits)", "fitted d* at epsilon");
  draw_x_ticks(svg, frame);
  for (int i = 0; i <= 5; ++i) {
    const double y = frame.y_min + (frame.y_max - frame.y_min) * i / 5.0;
    const double py = frame.py(y);
    svg << "<line x1=\"" << fx(kLeft - 5) << "\" y1=\"" << fx(py) << "\" x2=\""
        << fx(kLeft) << "\" y2=\"" << fx(py)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << fx(kLeft - 8) << "\" y=\"" << fx(py + 4)
        << "\" text-anchor=\"end\" font-family=\"monospace\" "
        << "font-size=\"11\">" << label_number(std::round(y * 100) / 100)
        << "</text>\n";
  }

  std::vector<std::string> labels;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    labels.push_back(series[s].label);
    std::ostringstream line;
    for (std::size_t i = 0; i < series[s].points.size(); ++i) {
      const auto& [n, dstar] = series[s].points[i];
      const double px = frame.px(n);
      const double py = frame.py(dstar);
      line << (i ? " " : "") << fx(px) << "," << fx(py);
      svg << "<circle cx=\"" << fx(px) << "\" cy=\"" << fx(py)
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    svg << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\""
        << color << "\" stroke-width=\"1.5\"/>\n";

    // Dashed squared-log reference anchored at the first point, the shape
    // the polylog scaling verdict compares against.
    const auto& [n0, d0] = series[s].points[0];
    if (n0 > 1.0) {
      const double scale = d0 / (std::log(n0) * std::log(n0));
      std::ostringstream ref;
      for (int i = 0; i <= 40; ++i) {
        const double n = x_lo + (x_hi - x_lo) * i / 40.0;
        if (n <= 1.0) {
          continue;
        }
        const double y = scale * std::log(n) * std::log(n);
        if (y > frame.y_max) {
          continue;
        }
        ref << (ref.tellp() > 0 ? " " : "") << fx(frame.px(n)) << ","
            << fx(frame.py(y));
      }
      svg << "<polyline points=\"" << ref.str() << "\" fill=\"none\" stroke=\""
          << color << "\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
    }
  }
  draw_legend(svg, labels);
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

std::optional<PlotKind> plot_kind_from_name(std::string_view name) {
  if (name == "survival-vs-depth") {
    return PlotKind::kSurvivalVsDepth;
  }
  if (name == "dstar-vs-n") {
    return PlotKind::kDstarVsN;
  }
  return std::nullopt;
}

std::string_view plot_kind_name(PlotKind kind) {
  switch (kind) {
    case PlotKind::kSurvivalVsDepth:
      return "survival-vs-depth";
    case PlotKind::kDstarVsN:
      return "dstar-vs-n";
  }
  return "unknown";
}

std::string render_plot(const std::vector<SweepRow>& rows, PlotKind kind,
                        double epsilon) {
  if (rows.empty()) {
    throw std::invalid_argument("cannot plot an empty table");
  }
  switch (kind) {
    case PlotKind::kSurvivalVsDepth:
      return render_survival_vs_depth(rows);
    case PlotKind::kDstarVsN:
      return render_dstar_vs_n(rows, epsilon);
  }
  throw std::invalid_argument("unknown plot kind");
}

}  // namespace cliffmem
