#include "trajpred/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "trajpred/error.hpp"

namespace trajpred {

Region::Region(double x_min, double y_min, double x_max, double y_max)
    : x_min_(x_min), y_min_(y_min), x_max_(x_max), y_max_(y_max) {
  if (!(x_min < x_max) || !(y_min < y_max)) {
    throw Error(ErrorCode::Config, "region needs x_min < x_max and y_min < y_max");
  }
}

void WindowConfig::validate() const {
  if (horizon < 1) {
    throw Error(ErrorCode::Config, "horizon must be >= 1, got " + std::to_string(horizon));
  }
  if (length && *length < 2) {
    throw Error(ErrorCode::Config, "window length must be >= 2, got " + std::to_string(*length));
  }
}

AxisSeries window(const AxisSeries& series, const WindowConfig& config, double cutoff_t) {
  AxisSeries out{series.axis, {}};
  auto end = std::find_if(series.samples.begin(), series.samples.end(),
                          [cutoff_t](const Sample& s) { return !(s.t <= cutoff_t); });
  auto begin = series.samples.begin();
  const auto kept = static_cast<std::size_t>(end - begin);
  if (config.length && kept > *config.length) begin = end - static_cast<std::ptrdiff_t>(*config.length);
  out.samples.assign(begin, end);
  return out;
}

bool gate(Point point, const Region& region) {
  return point.x < region.x_min() || point.x > region.x_max() || point.y < region.y_min() ||
         point.y > region.y_max();
}

namespace {

FitResult fit_labeled(const AxisSeries& series, ModelKind kind, FitOptions options) {
  try {
    return fit_model(series, kind, options);
  } catch (const Error& e) {
    throw Error(e.code(), std::string(to_string(series.axis)) + "-axis: " + e.what());
  }
}

double predict_labeled(const FitResult& fit, Axis axis, double t) {
  try {
    return predict(fit, t);
  } catch (const Error& e) {
    throw Error(e.code(), std::string(to_string(axis)) + "-axis: " + e.what());
  }
}

}  // namespace

AxisFits fit_axes(const AxisSeries& xs, const AxisSeries& ys, ModelKind kind,
                  const WindowConfig& config, double cutoff_t, FitOptions options) {
  config.validate();
  AxisFits fits;
  fits.x_window = window(xs, config, cutoff_t);
  fits.y_window = window(ys, config, cutoff_t);
  fits.x_fit = fit_labeled(fits.x_window, kind, options);
  fits.y_fit = fit_labeled(fits.y_window, kind, options);
  return fits;
}

PredictedEndpoint predict_endpoint(const AxisSeries& xs, const AxisSeries& ys, ModelKind kind,
                                   const WindowConfig& config, double cutoff_t,
                                   const std::optional<Region>& region, FitOptions options) {
  const auto fits = fit_axes(xs, ys, kind, config, cutoff_t, options);
  PredictedEndpoint out;
  out.t_target = cutoff_t + config.horizon;
  out.x = predict_labeled(fits.x_fit, Axis::X, out.t_target);
  out.y = predict_labeled(fits.y_fit, Axis::Y, out.t_target);
  out.defect = region ? gate({out.x, out.y}, *region) : false;
  return out;
}

}  // namespace trajpred
