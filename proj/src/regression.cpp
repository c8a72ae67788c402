#include "trajpred/regression.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "trajpred/error.hpp"

namespace trajpred {

ModelKind ModelKind::polynomial(int degree) {
  if (degree < 1) {
    throw Error(ErrorCode::Config, "polynomial degree must be >= 1, got " + std::to_string(degree));
  }
  return ModelKind(ModelFamily::Polynomial, degree);
}

ModelKind ModelKind::parse(std::string_view name, int default_degree) {
  if (name == "linear") return linear();
  if (name == "exp") return exponential();
  if (name == "sinexp") return sin_exponential();
  if (name == "cosexp") return cos_exponential();
  if (name == "poly") return polynomial(default_degree);
  if (name.size() > 4 && name.substr(0, 4) == "poly") {
    int degree = 0;
    auto digits = name.substr(4);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), degree);
    if (ec == std::errc() && ptr == digits.data() + digits.size()) return polynomial(degree);
  }
  throw Error(ErrorCode::Config, "unknown model '" + std::string(name) +
                                     "' (expected linear, exp, sinexp, cosexp, poly or polyN)");
}

std::string ModelKind::name() const {
  switch (family_) {
    case ModelFamily::Linear: return "linear";
    case ModelFamily::Exponential: return "exp";
    case ModelFamily::SinExponential: return "sinexp";
    case ModelFamily::CosExponential: return "cosexp";
    case ModelFamily::Polynomial: return "poly" + std::to_string(degree_);
  }
  return "unknown";
}

std::vector<ModelKind> default_comparison_kinds() {
  return {ModelKind::sin_exponential(), ModelKind::cos_exponential(), ModelKind::exponential(),
          ModelKind::polynomial(2)};
}

LinearFit fit_linear(std::span<const Sample> pairs) {
  const std::size_t n = pairs.size();
  if (n < 2) {
    throw Error(ErrorCode::InsufficientData,
                "linear fit needs at least 2 samples, got " + std::to_string(n));
  }
  double t_mean = 0.0;
  double v_mean = 0.0;
  for (const auto& p : pairs) {
    t_mean += p.t;
    v_mean += p.v;
  }
  t_mean /= static_cast<double>(n);
  v_mean /= static_cast<double>(n);

  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : pairs) {
    const double dt = p.t - t_mean;
    sxx += dt * dt;
    sxy += dt * (p.v - v_mean);
  }
  if (sxx == 0.0) {
    throw Error(ErrorCode::DegenerateAbscissa, "all " + std::to_string(n) + " samples share t");
  }
  const double slope = sxy / sxx;
  return {slope, v_mean - slope * t_mean};
}

namespace {

std::string describe_sample(const AxisSeries& series, std::size_t i) {
  const auto& s = series.samples[i];
  char t_buf[32];
  char v_buf[32];
  auto t_end = std::to_chars(t_buf, t_buf + sizeof t_buf, s.t).ptr;
  auto v_end = std::to_chars(v_buf, v_buf + sizeof v_buf, s.v).ptr;
  return std::string(to_string(series.axis)) + "-sample " + std::to_string(i) + " (t=" +
         std::string(t_buf, t_end) + ", v=" + std::string(v_buf, v_end) + ")";
}

// Least-squares polynomial via normal equations. The abscissa is mapped onto
// [-1, 1] before forming the Gram matrix and the solution is expanded back to
// ascending powers of t.
std::vector<double> fit_polynomial(const AxisSeries& series, int degree) {
  const std::size_t n = series.size();
  const std::size_t m = static_cast<std::size_t>(degree) + 1;

  double t_min = series.samples.front().t;
  double t_max = t_min;
  for (const auto& s : series.samples) {
    t_min = std::min(t_min, s.t);
    t_max = std::max(t_max, s.t);
  }
  if (t_min == t_max) {
    throw Error(ErrorCode::DegenerateAbscissa, "all " + std::to_string(n) + " samples share t");
  }
  const double center = 0.5 * (t_min + t_max);
  const double scale = 0.5 * (t_max - t_min);

  // Gram matrix augmented with the right-hand side.
  std::vector<std::vector<double>> sys(m, std::vector<double>(m + 1, 0.0));
  std::vector<double> powers(2 * m - 1);
  for (const auto& s : series.samples) {
    const double u = (s.t - center) / scale;
    powers[0] = 1.0;
    for (std::size_t k = 1; k < powers.size(); ++k) powers[k] = powers[k - 1] * u;
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) sys[r][c] += powers[r + c];
      sys[r][m] += powers[r] * s.v;
    }
  }

  // Hadamard bound on |det| for the conditioning guard.
  double hadamard = 1.0;
  for (std::size_t r = 0; r < m; ++r) {
    double norm2 = 0.0;
    for (std::size_t c = 0; c < m; ++c) norm2 += sys[r][c] * sys[r][c];
    hadamard *= std::sqrt(norm2);
  }

  double det = 1.0;
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::abs(sys[r][col]) > std::abs(sys[pivot][col])) pivot = r;
    }
    if (pivot != col) {
      std::swap(sys[pivot], sys[col]);
      det = -det;
    }
    det *= sys[col][col];
    if (sys[col][col] == 0.0) break;
    for (std::size_t r = col + 1; r < m; ++r) {
      const double f = sys[r][col] / sys[col][col];
      for (std::size_t c = col; c <= m; ++c) sys[r][c] -= f * sys[col][c];
    }
  }
  if (!(std::abs(det) >= kConditioningFloor * hadamard)) {
    throw Error(ErrorCode::IllConditioned,
                "degree-" + std::to_string(degree) + " normal equations are singular or ill-conditioned (" +
                    std::to_string(n) + " samples)");
  }

  std::vector<double> scaled(m);
  for (std::size_t r = m; r-- > 0;) {
    double acc = sys[r][m];
    for (std::size_t c = r + 1; c < m; ++c) acc -= sys[r][c] * scaled[c];
    scaled[r] = acc / sys[r][r];
  }

  // p(t) = sum_k d_k ((t - center) / scale)^k expanded by the binomial theorem.
  std::vector<double> coefficients(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const double dk = scaled[k] / std::pow(scale, static_cast<double>(k));
    double binom = 1.0;
    for (std::size_t j = 0; j <= k; ++j) {
      if (j > 0) binom = binom * static_cast<double>(k - j + 1) / static_cast<double>(j);
      coefficients[j] += dk * binom * std::pow(-center, static_cast<double>(k - j));
    }
  }
  return coefficients;
}

}  // namespace

FitResult fit_model(const AxisSeries& series, ModelKind kind, FitOptions options) {
  const std::size_t n = series.size();
  if (n < kind.min_points()) {
    throw Error(ErrorCode::InsufficientData, kind.name() + " fit on " + to_string(series.axis) +
                                                 "-series needs at least " +
                                                 std::to_string(kind.min_points()) + " samples, got " +
                                                 std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(series.samples[i].t) || !std::isfinite(series.samples[i].v)) {
      throw Error(ErrorCode::Domain, describe_sample(series, i) + " is not finite");
    }
  }

  FitResult fit;
  fit.kind = kind;
  fit.n_points = n;

  switch (kind.family()) {
    case ModelFamily::Linear: {
      const auto line = fit_linear(series.samples);
      fit.a = line.slope;
      fit.b = line.intercept;
      break;
    }
    case ModelFamily::Exponential:
    case ModelFamily::SinExponential:
    case ModelFamily::CosExponential: {
      std::vector<Sample> logged;
      logged.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        double v = series.samples[i].v;
        if (v <= 0.0) {
          if (!options.clamp_nonpositive) {
            throw Error(ErrorCode::Domain, describe_sample(series, i) + " is not positive; " +
                                               kind.name() + " fits need v > 0");
          }
          v = kClampFloor;
        }
        logged.push_back({series.samples[i].t, std::log(v)});
      }
      const auto line = fit_linear(logged);
      fit.a = line.slope;
      fit.b = line.intercept;
      if (kind.family() == ModelFamily::SinExponential) fit.b -= std::sin(fit.a);
      if (kind.family() == ModelFamily::CosExponential) fit.b -= std::cos(fit.a);
      break;
    }
    case ModelFamily::Polynomial:
      fit.coefficients = fit_polynomial(series, kind.degree());
      break;
  }

  fit.rmse = residual_rmse(fit, series);
  return fit;
}

double predict(const FitResult& fit, double t) {
  double value = 0.0;
  switch (fit.kind.family()) {
    case ModelFamily::Linear: value = fit.a * t + fit.b; break;
    case ModelFamily::Exponential: value = std::exp(fit.a * t + fit.b); break;
    case ModelFamily::SinExponential: value = std::exp(fit.a * t + fit.b) + std::sin(fit.a); break;
    case ModelFamily::CosExponential: value = std::exp(fit.a * t + fit.b) + std::cos(fit.a); break;
    case ModelFamily::Polynomial:
      for (auto c = fit.coefficients.rbegin(); c != fit.coefficients.rend(); ++c) value = value * t + *c;
      break;
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::Range, fit.kind.name() + " prediction at t=" + std::to_string(t) +
                                      " is not finite");
  }
  return value;
}

double residual_rmse(const FitResult& fit, const AxisSeries& series) {
  if (series.empty()) throw Error(ErrorCode::InsufficientData, "rmse of an empty series");
  double sum = 0.0;
  for (const auto& s : series.samples) {
    const double r = predict(fit, s.t) - s.v;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(series.size()));
}

}  // namespace trajpred
