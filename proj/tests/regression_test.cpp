#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "trajpred/error.hpp"
#include "trajpred/regression.hpp"

using namespace trajpred;
using testkit::frames;
using testkit::Gen;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected trajpred::Error";
  return ErrorCode::Io;
}

// Independent oracle: 2x2 normal equations solved by Cramer's rule on raw sums.
LinearFit cramer_line(const std::vector<Sample>& pts) {
  double n = 0, st = 0, stt = 0, sv = 0, stv = 0;
  for (const auto& p : pts) {
    n += 1;
    st += p.t;
    stt += p.t * p.t;
    sv += p.v;
    stv += p.t * p.v;
  }
  const double det = n * stt - st * st;
  return {(n * stv - st * sv) / det, (stt * sv - st * stv) / det};
}

// Independent evaluator of the closed forms, written out term by term.
double closed_form(const FitResult& f, double t) {
  switch (f.kind.family()) {
    case ModelFamily::Linear: return f.a * t + f.b;
    case ModelFamily::Exponential: return std::exp(f.a * t + f.b);
    case ModelFamily::SinExponential: return std::exp(f.a * t + f.b) + std::sin(f.a);
    case ModelFamily::CosExponential: return std::exp(f.a * t + f.b) + std::cos(f.a);
    case ModelFamily::Polynomial: {
      double sum = 0;
      for (std::size_t k = 0; k < f.coefficients.size(); ++k) sum += f.coefficients[k] * std::pow(t, double(k));
      return sum;
    }
  }
  return NAN;
}

const double kE = std::numbers::e;

}  // namespace

TEST(ModelKind, NamesAndParsing) {
  EXPECT_EQ(ModelKind::parse("linear"), ModelKind::linear());
  EXPECT_EQ(ModelKind::parse("exp"), ModelKind::exponential());
  EXPECT_EQ(ModelKind::parse("sinexp"), ModelKind::sin_exponential());
  EXPECT_EQ(ModelKind::parse("cosexp"), ModelKind::cos_exponential());
  EXPECT_EQ(ModelKind::parse("poly"), ModelKind::polynomial(2));
  EXPECT_EQ(ModelKind::parse("poly", 3), ModelKind::polynomial(3));
  EXPECT_EQ(ModelKind::parse("poly4"), ModelKind::polynomial(4));
  EXPECT_EQ(ModelKind::polynomial(2).name(), "poly2");
  EXPECT_EQ(code_of([] { ModelKind::parse("spline"); }), ErrorCode::Config);
  EXPECT_EQ(code_of([] { ModelKind::polynomial(0); }), ErrorCode::Config);
  EXPECT_EQ(code_of([] { ModelKind::parse("poly0"); }), ErrorCode::Config);
}

TEST(ModelKind, DefaultComparisonOrder) {
  auto kinds = default_comparison_kinds();
  ASSERT_EQ(kinds.size(), 4u);
  EXPECT_EQ(kinds[0].name(), "sinexp");
  EXPECT_EQ(kinds[1].name(), "cosexp");
  EXPECT_EQ(kinds[2].name(), "exp");
  EXPECT_EQ(kinds[3].name(), "poly2");
}

TEST(FitLinear, TwoPointLine) {
  std::vector<Sample> pts{{0, 1}, {1, 3}};
  auto f = fit_linear(pts);
  EXPECT_DOUBLE_EQ(f.slope, 2.0);
  EXPECT_DOUBLE_EQ(f.intercept, 1.0);
}

TEST(FitLinear, ExactLine) {
  std::vector<Sample> pts{{0, 0}, {1, 1}, {2, 2}};
  auto f = fit_linear(pts);
  EXPECT_DOUBLE_EQ(f.slope, 1.0);
  EXPECT_NEAR(f.intercept, 0.0, 1e-15);
}

TEST(FitLinear, MatchesNormalEquationOracle) {
  std::vector<Sample> pts{{0, 1}, {1, 2}, {2, 2}};
  auto oracle = cramer_line(pts);
  // Frozen from the closed form: slope 1/2, intercept 7/6.
  EXPECT_NEAR(oracle.slope, 0.5, 1e-15);
  EXPECT_NEAR(oracle.intercept, 7.0 / 6.0, 1e-15);
  auto f = fit_linear(pts);
  EXPECT_NEAR(f.slope, 0.5, 1e-14);
  EXPECT_NEAR(f.intercept, 7.0 / 6.0, 1e-14);

  Gen gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Sample> noisy;
    for (double t : gen.distinct_times(gen.integer(2, 40), -50, 50)) noisy.push_back({t, gen.real(-100, 100)});
    auto got = fit_linear(noisy);
    auto want = cramer_line(noisy);
    EXPECT_NEAR(got.slope, want.slope, 1e-9 * (1 + std::abs(want.slope)));
    EXPECT_NEAR(got.intercept, want.intercept, 1e-9 * (1 + std::abs(want.intercept)));
  }
}

TEST(FitLinear, Errors) {
  std::vector<Sample> one{{0, 1}};
  std::vector<Sample> flat{{2, 1}, {2, 5}, {2, 3}};
  EXPECT_EQ(code_of([&] { fit_linear(one); }), ErrorCode::InsufficientData);
  EXPECT_EQ(code_of([] { fit_linear({}); }), ErrorCode::InsufficientData);
  EXPECT_EQ(code_of([&] { fit_linear(flat); }), ErrorCode::DegenerateAbscissa);
}

TEST(FitLinear, ExactRecoveryAndTimeShift) {
  Gen gen(17);
  for (int trial = 0; trial < 300; ++trial) {
    const double slope = gen.real(-10, 10);
    const double intercept = gen.real(-10, 10);
    const auto ts = gen.distinct_times(gen.integer(2, 50), 0, 100);
    std::vector<Sample> pts;
    for (double t : ts) pts.push_back({t, slope * t + intercept});
    auto f = fit_linear(pts);
    EXPECT_NEAR(f.slope, slope, 1e-9);
    EXPECT_NEAR(f.intercept, intercept, 1e-9);

    const double shift = gen.real(-20, 20);
    std::vector<Sample> shifted;
    for (auto p : pts) shifted.push_back({p.t + shift, p.v});
    auto g = fit_linear(shifted);
    EXPECT_NEAR(g.slope, f.slope, 1e-9);
    EXPECT_NEAR(g.intercept, f.intercept - f.slope * shift, 1e-9);
  }
}

TEST(FitModel, ConstantSeriesSinExp) {
  auto s = frames(Axis::X, 0, 9, [](double) { return kE; });
  auto f = fit_model(s, ModelKind::sin_exponential());
  EXPECT_NEAR(f.a, 0.0, 1e-15);
  EXPECT_NEAR(f.b, 1.0, 1e-15);
  EXPECT_EQ(f.n_points, 10u);
}

TEST(FitModel, ExactExponential) {
  auto s = frames(Axis::X, 0, 9, [](double t) { return std::exp(0.2 * t + 0.5); });
  auto f = fit_model(s, ModelKind::exponential());
  EXPECT_NEAR(f.a, 0.2, 1e-12);
  EXPECT_NEAR(f.b, 0.5, 1e-12);
  EXPECT_NEAR(f.rmse, 0.0, 1e-12);
}

TEST(FitModel, ExactExponentialUnderSinAndCosCorrection) {
  auto s = frames(Axis::X, 0, 9, [](double t) { return std::exp(0.2 * t + 0.5); });
  auto sin_fit = fit_model(s, ModelKind::sin_exponential());
  EXPECT_NEAR(sin_fit.a, 0.2, 1e-12);
  EXPECT_NEAR(sin_fit.b, 0.301330669204938784, 1e-12);
  auto cos_fit = fit_model(s, ModelKind::cos_exponential());
  EXPECT_NEAR(cos_fit.b, -0.480066577841241631, 1e-12);
  // The correction makes the fit miss its own generating data.
  EXPECT_GT(sin_fit.rmse, 0.1);
}

TEST(FitModel, LinearWrapsFitLinear) {
  auto s = frames(Axis::Y, 0, 5, [](double t) { return 3 * t - 2; });
  auto f = fit_model(s, ModelKind::linear());
  EXPECT_NEAR(f.a, 3, 1e-12);
  EXPECT_NEAR(f.b, -2, 1e-12);
  EXPECT_TRUE(f.coefficients.empty());
}

TEST(FitModel, DomainErrorNamesSample) {
  auto s = frames(Axis::Y, 0, 5, [](double t) { return t == 3 ? 0.0 : 1.0 + t; });
  for (auto kind : {ModelKind::exponential(), ModelKind::sin_exponential(), ModelKind::cos_exponential()}) {
    try {
      fit_model(s, kind);
      FAIL() << "expected domain error";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::Domain);
      EXPECT_NE(std::string(e.what()).find("y-sample 3"), std::string::npos) << e.what();
      EXPECT_NE(std::string(e.what()).find("t=3"), std::string::npos) << e.what();
    }
  }
  // Linear and polynomial accept non-positive values.
  EXPECT_NO_THROW(fit_model(s, ModelKind::linear()));
  EXPECT_NO_THROW(fit_model(s, ModelKind::polynomial(2)));
}

TEST(FitModel, ClampOnlyWhenRequested) {
  auto s = frames(Axis::X, 0, 4, [](double t) { return t == 0 ? -1.0 : std::exp(t); });
  EXPECT_EQ(code_of([&] { fit_model(s, ModelKind::exponential()); }), ErrorCode::Domain);
  auto f = fit_model(s, ModelKind::exponential(), FitOptions{true});
  auto clamped = s;
  clamped.samples[0].v = kClampFloor;
  std::vector<Sample> logged;
  for (auto p : clamped.samples) logged.push_back({p.t, std::log(p.v)});
  auto line = cramer_line(logged);
  EXPECT_NEAR(f.a, line.slope, 1e-12);
  EXPECT_NEAR(f.b, line.intercept, 1e-12);
}

TEST(FitModel, NonFiniteValueIsDomainError) {
  auto s = frames(Axis::X, 0, 4, [](double t) { return t == 2 ? NAN : 1.0; });
  EXPECT_EQ(code_of([&] { fit_model(s, ModelKind::linear()); }), ErrorCode::Domain);
}

TEST(FitModel, MinimumLengths) {
  auto one = frames(Axis::X, 0, 0, [](double) { return 1.0; });
  auto two = frames(Axis::X, 0, 1, [](double t) { return 1.0 + t; });
  EXPECT_EQ(code_of([&] { fit_model(one, ModelKind::sin_exponential()); }), ErrorCode::InsufficientData);
  EXPECT_NO_THROW(fit_model(two, ModelKind::exponential()));
  EXPECT_EQ(code_of([&] { fit_model(two, ModelKind::polynomial(2)); }), ErrorCode::InsufficientData);
  EXPECT_EQ(code_of([] { fit_model(AxisSeries{}, ModelKind::linear()); }), ErrorCode::InsufficientData);
}

TEST(FitModel, PolynomialDegenerateAndSingular) {
  AxisSeries same{Axis::X, {{1, 1}, {1, 2}, {1, 3}}};
  EXPECT_EQ(code_of([&] { fit_model(same, ModelKind::polynomial(2)); }), ErrorCode::DegenerateAbscissa);
  EXPECT_EQ(code_of([&] { fit_model(same, ModelKind::exponential()); }), ErrorCode::DegenerateAbscissa);
  // Four samples on only two distinct abscissae cannot pin a cubic.
  AxisSeries two_distinct{Axis::X, {{0, 1}, {0, 2}, {1, 3}, {1, 4}}};
  EXPECT_EQ(code_of([&] { fit_model(two_distinct, ModelKind::polynomial(3)); }), ErrorCode::IllConditioned);
}

TEST(FitModel, PolynomialExactRecovery) {
  Gen gen(23);
  for (int trial = 0; trial < 300; ++trial) {
    const int degree = gen.integer(1, 4);
    std::vector<double> coef(degree + 1);
    for (auto& c : coef) c = gen.real(-5, 5);
    const double lo = gen.real(-1000, 900);
    const double hi = std::min(1000.0, lo + gen.real(5, 1000));
    const auto ts = gen.distinct_times(gen.integer(degree + 1, 40), lo, hi);
    auto poly = [&](double t) {
      double v = 0;
      for (int k = degree; k >= 0; --k) v = v * t + coef[k];
      return v;
    };
    auto s = testkit::series_of(Axis::X, ts, poly);
    double scale = 0;
    for (auto p : s.samples) scale = std::max(scale, std::abs(p.v));

    auto f = fit_model(s, ModelKind::polynomial(degree));
    ASSERT_EQ(f.coefficients.size(), static_cast<std::size_t>(degree + 1));
    for (auto p : s.samples) EXPECT_LE(std::abs(predict(f, p.t) - p.v), 1e-6 * scale) << "trial " << trial;
  }
}

TEST(FitModel, QuadraticThroughThreePoints) {
  AxisSeries s{Axis::X, {{0, 0}, {1, 1}, {2, 4}, {3, 9}}};
  auto f = fit_model(s, ModelKind::polynomial(2));
  EXPECT_NEAR(f.coefficients[0], 0, 1e-12);
  EXPECT_NEAR(f.coefficients[1], 0, 1e-12);
  EXPECT_NEAR(f.coefficients[2], 1, 1e-12);
  EXPECT_NEAR(f.rmse, 0, 1e-12);
}

TEST(FitModel, SharedSlopeInvariant) {
  Gen gen(29);
  for (int trial = 0; trial < 200; ++trial) {
    auto ts = gen.distinct_times(gen.integer(2, 60), 0, 200);
    auto s = testkit::series_of(Axis::X, ts, [&](double) { return gen.real(0.01, 500); });
    auto e = fit_model(s, ModelKind::exponential());
    auto si = fit_model(s, ModelKind::sin_exponential());
    auto co = fit_model(s, ModelKind::cos_exponential());
    EXPECT_EQ(e.a, si.a);
    EXPECT_EQ(e.a, co.a);
    EXPECT_NEAR(si.b, e.b - std::sin(e.a), 1e-12);
    EXPECT_NEAR(co.b, e.b - std::cos(e.a), 1e-12);
  }
}

TEST(FitModel, Deterministic) {
  Gen gen(31);
  auto ts = gen.distinct_times(30, 0, 100);
  auto s = testkit::series_of(Axis::Y, ts, [&](double) { return gen.real(1, 50); });
  for (auto kind : {ModelKind::linear(), ModelKind::exponential(), ModelKind::sin_exponential(),
                    ModelKind::cos_exponential(), ModelKind::polynomial(3)}) {
    EXPECT_EQ(fit_model(s, kind), fit_model(s, kind));
  }
}

TEST(Predict, Examples) {
  FitResult f;
  f.kind = ModelKind::sin_exponential();
  f.a = 0;
  f.b = 1;
  EXPECT_NEAR(predict(f, 100), kE, 1e-15);

  f.a = 0.2;
  f.b = 0.3013308;
  EXPECT_NEAR(predict(f, 0), 1.55032572632191065, 1e-14);
  EXPECT_GT(std::abs(predict(f, 0) - std::exp(0.5)), 0.09);

  FitResult p;
  p.kind = ModelKind::polynomial(2);
  p.coefficients = {0, 0, 1};
  EXPECT_DOUBLE_EQ(predict(p, 3), 9);
}

TEST(Predict, OverflowIsRangeError) {
  FitResult f;
  f.kind = ModelKind::exponential();
  f.a = 1.0;
  f.b = 0.0;
  try {
    predict(f, 1e4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Range);
    EXPECT_NE(std::string(e.what()).find("t=10000"), std::string::npos);
  }
}

TEST(Predict, AgreesWithIndependentEvaluator) {
  Gen gen(37);
  const ModelKind kinds[] = {ModelKind::linear(), ModelKind::exponential(), ModelKind::sin_exponential(),
                             ModelKind::cos_exponential(), ModelKind::polynomial(3)};
  for (int trial = 0; trial < 500; ++trial) {
    FitResult f;
    f.kind = kinds[trial % 5];
    f.a = gen.real(-0.1, 0.1);
    f.b = gen.real(-3, 6);
    f.coefficients = {gen.real(0, 5), gen.real(0, 5), gen.real(0, 5), gen.real(0, 5)};
    const double t = gen.real(0, 200);
    EXPECT_LE(testkit::rel_err(predict(f, t), closed_form(f, t)), 1e-12);
  }
}

TEST(ResidualRmse, Examples) {
  AxisSeries two{Axis::X, {{0, 1}, {1, 3}}};
  EXPECT_NEAR(residual_rmse(fit_model(two, ModelKind::linear()), two), 0.0, 1e-15);

  FitResult zero;
  zero.kind = ModelKind::linear();
  AxisSeries s{Axis::X, {{0, 3}, {1, 4}}};
  EXPECT_NEAR(residual_rmse(zero, s), 3.53553390593273762, 1e-14);

  FitResult c;
  c.kind = ModelKind::linear();
  c.b = 5;
  AxisSeries single{Axis::X, {{42, 5}}};
  EXPECT_EQ(residual_rmse(c, single), 0.0);

  EXPECT_EQ(code_of([&] { residual_rmse(c, AxisSeries{}); }), ErrorCode::InsufficientData);
}
