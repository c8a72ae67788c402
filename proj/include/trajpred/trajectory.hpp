#pragma once

#include <cstddef>
#include <optional>

#include "trajpred/detection.hpp"
#include "trajpred/regression.hpp"

namespace trajpred {

/// Axis-aligned rectangle in pixel space. The boundary counts as inside.
class Region {
 public:
  Region(double x_min, double y_min, double x_max, double y_max);

  double x_min() const noexcept { return x_min_; }
  double y_min() const noexcept { return y_min_; }
  double x_max() const noexcept { return x_max_; }
  double y_max() const noexcept { return y_max_; }

 private:
  double x_min_, y_min_, x_max_, y_max_;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct PredictedEndpoint {
  double t_target = 0.0;
  double x = 0.0;
  double y = 0.0;
  bool defect = false;

  friend bool operator==(const PredictedEndpoint&, const PredictedEndpoint&) = default;
};

inline constexpr int kDefaultHorizon = 60;

struct WindowConfig {
  /// Frames of history kept for fitting; nullopt keeps everything.
  std::optional<std::size_t> length;
  int horizon = kDefaultHorizon;

  /// Throws a config error unless horizon >= 1 and a finite length is >= 2.
  void validate() const;
};

/// Samples with t <= cutoff_t, keeping only the last `config.length`.
AxisSeries window(const AxisSeries& series, const WindowConfig& config, double cutoff_t);

/// True when the point lies strictly outside the region.
bool gate(Point point, const Region& region);

/// Both per-axis fits on their windows, as used by prediction and plotting.
struct AxisFits {
  AxisSeries x_window;
  AxisSeries y_window;
  FitResult x_fit;
  FitResult y_fit;
};

/// Fits `kind` independently on each windowed axis. Failures are rethrown with
/// the failing axis named in the message.
AxisFits fit_axes(const AxisSeries& xs, const AxisSeries& ys, ModelKind kind,
                  const WindowConfig& config, double cutoff_t, FitOptions options = {});

PredictedEndpoint predict_endpoint(const AxisSeries& xs, const AxisSeries& ys, ModelKind kind,
                                   const WindowConfig& config, double cutoff_t,
                                   const std::optional<Region>& region, FitOptions options = {});

}  // namespace trajpred
