#include "trajpred/plot.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include <fmt/format.h>

namespace trajpred {

namespace {

constexpr double kPanelWidth = 480.0;
constexpr double kPanelHeight = 320.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 16.0;
constexpr double kMarginTop = 32.0;
constexpr double kMarginBottom = 40.0;

struct Frame {
  double t_lo, t_hi, v_lo, v_hi;
  double origin_x;

  double px(double t) const {
    return origin_x + kMarginLeft + (t - t_lo) / (t_hi - t_lo) * (kPanelWidth - kMarginLeft - kMarginRight);
  }
  double py(double v) const {
    return kMarginTop + (v_hi - v) / (v_hi - v_lo) * (kPanelHeight - kMarginTop - kMarginBottom);
  }
};

std::string num(double v) { return fmt::format("{:.2f}", v); }

void write_panel(std::ostream& out, double origin_x, const AxisSeries& full, const AxisSeries& windowed,
                 const FitResult& fit, double t_target, double predicted) {
  const double t_start = windowed.samples.front().t;

  std::vector<Sample> curve;
  for (double t = std::ceil(t_start); t <= t_target; t += 1.0) curve.push_back({t, predict(fit, t)});
  if (curve.empty() || curve.back().t != t_target) curve.push_back({t_target, predicted});

  std::vector<Sample> shown;
  for (const auto& s : full.samples) {
    if (s.t >= t_start && s.t <= t_target) shown.push_back(s);
  }

  Frame f{t_start, t_target, predicted, predicted, origin_x};
  for (const auto& s : shown) {
    f.v_lo = std::min(f.v_lo, s.v);
    f.v_hi = std::max(f.v_hi, s.v);
  }
  for (const auto& s : curve) {
    f.v_lo = std::min(f.v_lo, s.v);
    f.v_hi = std::max(f.v_hi, s.v);
  }
  if (f.v_hi - f.v_lo < 1e-9) {
    f.v_lo -= 1.0;
    f.v_hi += 1.0;
  }
  const double pad = 0.05 * (f.v_hi - f.v_lo);
  f.v_lo -= pad;
  f.v_hi += pad;
  if (f.t_hi <= f.t_lo) f.t_hi = f.t_lo + 1.0;

  const char* name = to_string(full.axis);
  const double left = origin_x + kMarginLeft;
  const double right = origin_x + kPanelWidth - kMarginRight;
  const double bottom = kPanelHeight - kMarginBottom;

  out << fmt::format("  <g class=\"panel\" id=\"panel-{}\">\n", name);
  out << fmt::format("    <text x=\"{}\" y=\"20\" text-anchor=\"middle\">{}(t), {} fit</text>\n",
                     num(origin_x + kPanelWidth / 2), name, fit.kind.name());
  out << fmt::format(
      "    <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>\n", num(left),
      num(kMarginTop), num(right - left), num(bottom - kMarginTop));
  out << fmt::format("    <text x=\"{}\" y=\"{}\" text-anchor=\"start\">{}</text>\n", num(left),
                     num(bottom + 16), num(f.t_lo));
  out << fmt::format("    <text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", num(right),
                     num(bottom + 16), num(f.t_hi));
  out << fmt::format("    <text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", num(left - 4),
                     num(kMarginTop + 4), num(f.v_hi));
  out << fmt::format("    <text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", num(left - 4),
                     num(bottom), num(f.v_lo));

  const double cutoff = windowed.samples.back().t;
  for (const auto& s : shown) {
    const bool fitted = s.t <= cutoff;
    out << fmt::format("    <circle class=\"{}\" cx=\"{}\" cy=\"{}\" r=\"2\" fill=\"{}\"/>\n",
                       fitted ? "observed" : "later", num(f.px(s.t)), num(f.py(s.v)),
                       fitted ? "#1f77b4" : "#bbbbbb");
  }

  out << "    <polyline class=\"fit\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (i) out << ' ';
    out << num(f.px(curve[i].t)) << ',' << num(f.py(curve[i].v));
  }
  out << "\"/>\n";

  out << fmt::format(
      "    <circle class=\"prediction\" cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"red\" stroke=\"black\"/>\n",
      num(f.px(t_target)), num(f.py(predicted)));
  out << "  </g>\n";
}

}  // namespace

void write_prediction_svg(std::ostream& out, const AxisSeries& xs, const AxisSeries& ys,
                          const AxisFits& fits, const PredictedEndpoint& prediction) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n",
      num(2 * kPanelWidth), num(kPanelHeight));
  out << fmt::format("  <desc>t_target={} x={} y={} defect={}</desc>\n", fmt::format("{:.6f}", prediction.t_target),
                     fmt::format("{:.6f}", prediction.x), fmt::format("{:.6f}", prediction.y),
                     prediction.defect ? "true" : "false");
  write_panel(out, 0.0, xs, fits.x_window, fits.x_fit, prediction.t_target, prediction.x);
  write_panel(out, kPanelWidth, ys, fits.y_window, fits.y_fit, prediction.t_target, prediction.y);
  out << "</svg>\n";
}

}  // namespace trajpred
