#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trajpred/detection.hpp"
#include "trajpred/regression.hpp"
#include "trajpred/trajectory.hpp"

namespace trajpred {

/// |predicted - actual| / |actual| * 100. Throws an undefined-reference error
/// when actual is zero.
double error_rate(double predicted, double actual);

/// One scored row of a model comparison. Error fields are empty when the fit
/// or the prediction failed; `failure` then holds the reason.
struct ErrorReport {
  ModelKind kind = ModelKind::linear();
  std::optional<double> err_x_pct;
  std::optional<double> err_y_pct;
  double t_target = 0.0;
  std::optional<Point> predicted;
  Point actual;
  std::string failure;

  bool available() const noexcept { return err_x_pct.has_value() && err_y_pct.has_value(); }

  friend bool operator==(const ErrorReport&, const ErrorReport&) = default;
};

/// Predicts from samples with t <= cutoff_t and scores against the samples at
/// exactly cutoff_t + horizon. A missing truth sample throws.
ErrorReport evaluate(const AxisSeries& xs, const AxisSeries& ys, ModelKind kind, double cutoff_t,
                     const WindowConfig& config, FitOptions options = {});

/// evaluate() for each kind, in order. A failing kind yields an unavailable
/// row; a missing truth sample aborts the whole table.
std::vector<ErrorReport> compare(const AxisSeries& xs, const AxisSeries& ys,
                                 const std::vector<ModelKind>& kinds, double cutoff_t,
                                 const WindowConfig& config, FitOptions options = {});

inline constexpr const char* kComparisonCsvHeader =
    "model,err_x_pct,err_y_pct,t_target,pred_x,pred_y,actual_x,actual_y";

void write_comparison_csv(std::ostream& out, const std::vector<ErrorReport>& reports);
/// Aligned text table with columns Regression, x-error %, y-error %.
void write_comparison_text(std::ostream& out, const std::vector<ErrorReport>& reports);

enum class SyntheticVariant { PureExponential, SinExponential };

/// Seeded generator parameters for oracle trajectories.
struct SyntheticSpec {
  double a_x = 0.0;
  double b_x = 0.0;
  double a_y = 0.0;
  double b_y = 0.0;
  SyntheticVariant variant = SyntheticVariant::PureExponential;
  std::int64_t n_frames = 0;
  double noise_sigma = 0.0;
  double shake_prob = 0.0;
  double shake_scale = 0.0;
  std::uint64_t seed = 0;

  void validate() const;

  friend bool operator==(const SyntheticSpec&, const SyntheticSpec&) = default;
};

/// Reads `key = value` lines. Keys are the SyntheticSpec field names; a_x, b_x,
/// a_y, b_y and n_frames are required, the rest default as above. Blank lines
/// and lines starting with '#' are ignored.
SyntheticSpec parse_synthetic_spec(std::istream& in);
void write_synthetic_spec(std::ostream& out, const SyntheticSpec& spec);

/// Samples t = 0..n_frames-1 on both axes. Per axis and frame:
///   base  = exp(a t + b)            (PureExponential)
///         = exp(a t + b) + sin(a)   (SinExponential)
///   value = base * exp(noise_sigma * z), z ~ N(0, 1)
///   value += U(-shake_scale, shake_scale) with probability shake_prob
/// The X axis draws from the first stream derived from `seed`, Y from the
/// second (see random.hpp). Every frame consumes four draws per axis whatever
/// the settings, so toggling noise or shake never shifts later frames.
std::pair<AxisSeries, AxisSeries> synthesize(const SyntheticSpec& spec);

/// Batch scoring: synthesize each spec and compare `kinds` on it. With more
/// than one thread the trajectories are scored concurrently; the result is
/// identical to sequential execution.
std::vector<std::vector<ErrorReport>> run_harness(const std::vector<SyntheticSpec>& specs,
                                                  const std::vector<ModelKind>& kinds, double cutoff_t,
                                                  const WindowConfig& config, unsigned threads = 1);

/// Comparison CSV with a leading `trajectory` index column.
void write_harness_csv(std::ostream& out, const std::vector<std::vector<ErrorReport>>& results);

}  // namespace trajpred
