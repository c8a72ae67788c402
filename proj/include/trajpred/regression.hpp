#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trajpred/detection.hpp"

namespace trajpred {

enum class ModelFamily { Linear, Exponential, SinExponential, CosExponential, Polynomial };

/// Model selector. `degree` is meaningful only for Polynomial and must be >= 1.
class ModelKind {
 public:
  static ModelKind linear() { return ModelKind(ModelFamily::Linear, 0); }
  static ModelKind exponential() { return ModelKind(ModelFamily::Exponential, 0); }
  static ModelKind sin_exponential() { return ModelKind(ModelFamily::SinExponential, 0); }
  static ModelKind cos_exponential() { return ModelKind(ModelFamily::CosExponential, 0); }
  static ModelKind polynomial(int degree);

  /// Accepts linear, exp, sinexp, cosexp, poly (with `default_degree`) and polyN.
  static ModelKind parse(std::string_view name, int default_degree = 2);

  ModelFamily family() const noexcept { return family_; }
  int degree() const noexcept { return degree_; }
  bool is_exponential_family() const noexcept {
    return family_ == ModelFamily::Exponential || family_ == ModelFamily::SinExponential ||
           family_ == ModelFamily::CosExponential;
  }
  std::size_t min_points() const noexcept {
    return family_ == ModelFamily::Polynomial ? static_cast<std::size_t>(degree_) + 1 : 2;
  }
  /// Short name: linear, exp, sinexp, cosexp, polyN.
  std::string name() const;

  friend bool operator==(const ModelKind&, const ModelKind&) = default;

 private:
  ModelKind(ModelFamily family, int degree) : family_(family), degree_(degree) {}

  ModelFamily family_;
  int degree_;
};

/// Row order of the four-model comparison table.
std::vector<ModelKind> default_comparison_kinds();

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// A fitted model. For the exponential family `a` is the growth rate of the
/// log-linear fit and `b` the intercept after the sin/cos correction; for
/// Polynomial only `coefficients` (ascending powers) is used.
struct FitResult {
  ModelKind kind = ModelKind::linear();
  double a = 0.0;
  double b = 0.0;
  std::vector<double> coefficients;
  std::size_t n_points = 0;
  double rmse = 0.0;

  friend bool operator==(const FitResult&, const FitResult&) = default;
};

struct FitOptions {
  /// Replace v <= 0 by kClampFloor before taking logs instead of failing.
  bool clamp_nonpositive = false;
};

inline constexpr double kClampFloor = 1e-9;
/// Relative determinant threshold of the polynomial normal equations.
inline constexpr double kConditioningFloor = 1e-12;

/// Ordinary least squares line through (t, v) pairs.
LinearFit fit_linear(std::span<const Sample> pairs);

FitResult fit_model(const AxisSeries& series, ModelKind kind, FitOptions options = {});

/// Evaluates the fitted closed form at t. Throws a range error when the result
/// is not finite.
double predict(const FitResult& fit, double t);

/// Root-mean-square of predict(fit, t_i) - v_i over the series.
double residual_rmse(const FitResult& fit, const AxisSeries& series);

}  // namespace trajpred
