#include "trajpred/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <istream>
#include <map>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "trajpred/error.hpp"
#include "trajpred/random.hpp"

namespace trajpred {

double error_rate(double predicted, double actual) {
  if (actual == 0.0) {
    throw Error(ErrorCode::UndefinedReference, "error rate is undefined for an actual value of 0");
  }
  return std::abs(predicted - actual) / std::abs(actual) * 100.0;
}

namespace {

double truth_at(const AxisSeries& series, double t) {
  auto it = std::find_if(series.samples.begin(), series.samples.end(),
                         [t](const Sample& s) { return s.t == t; });
  if (it == series.samples.end()) {
    throw Error(ErrorCode::MissingTruth, std::string(to_string(series.axis)) +
                                             "-series has no sample at t=" + fmt::format("{}", t));
  }
  return it->v;
}

Point ground_truth(const AxisSeries& xs, const AxisSeries& ys, double t_target) {
  return {truth_at(xs, t_target), truth_at(ys, t_target)};
}

ErrorReport score(const AxisSeries& xs, const AxisSeries& ys, ModelKind kind, double cutoff_t,
                  const WindowConfig& config, FitOptions options, Point actual) {
  ErrorReport report;
  report.kind = kind;
  report.t_target = cutoff_t + config.horizon;
  report.actual = actual;
  PredictedEndpoint p;
  try {
    p = predict_endpoint(xs, ys, kind, config, cutoff_t, std::nullopt, options);
  } catch (const Error& e) {
    report.failure = e.what();
    return report;
  }
  report.predicted = Point{p.x, p.y};
  report.err_x_pct = error_rate(p.x, actual.x);
  report.err_y_pct = error_rate(p.y, actual.y);
  return report;
}

void check_reference(Point actual, double t_target) {
  if (actual.x == 0.0 || actual.y == 0.0) {
    throw Error(ErrorCode::UndefinedReference,
                fmt::format("ground truth at t={} has a zero coordinate", t_target));
  }
}

}  // namespace

ErrorReport evaluate(const AxisSeries& xs, const AxisSeries& ys, ModelKind kind, double cutoff_t,
                     const WindowConfig& config, FitOptions options) {
  config.validate();
  const double t_target = cutoff_t + config.horizon;
  const Point actual = ground_truth(xs, ys, t_target);
  check_reference(actual, t_target);
  return score(xs, ys, kind, cutoff_t, config, options, actual);
}

std::vector<ErrorReport> compare(const AxisSeries& xs, const AxisSeries& ys,
                                 const std::vector<ModelKind>& kinds, double cutoff_t,
                                 const WindowConfig& config, FitOptions options) {
  config.validate();
  const double t_target = cutoff_t + config.horizon;
  const Point actual = ground_truth(xs, ys, t_target);
  check_reference(actual, t_target);
  std::vector<ErrorReport> reports;
  reports.reserve(kinds.size());
  for (const auto& kind : kinds) reports.push_back(score(xs, ys, kind, cutoff_t, config, options, actual));
  return reports;
}

namespace {

std::string fixed(double v) { return fmt::format("{:.6f}", v); }

std::string fixed(const std::optional<double>& v) { return v ? fixed(*v) : std::string(); }

void write_row(std::ostream& out, const ErrorReport& r) {
  out << r.kind.name() << ',' << fixed(r.err_x_pct) << ',' << fixed(r.err_y_pct) << ','
      << fixed(r.t_target) << ',';
  if (r.predicted) {
    out << fixed(r.predicted->x) << ',' << fixed(r.predicted->y);
  } else {
    out << ',';
  }
  out << ',' << fixed(r.actual.x) << ',' << fixed(r.actual.y) << '\n';
}

}  // namespace

void write_comparison_csv(std::ostream& out, const std::vector<ErrorReport>& reports) {
  out << kComparisonCsvHeader << '\n';
  for (const auto& r : reports) write_row(out, r);
}

void write_comparison_text(std::ostream& out, const std::vector<ErrorReport>& reports) {
  auto cell = [](const std::optional<double>& v) { return v ? fixed(*v) : std::string("-"); };
  std::size_t name_width = std::string("Regression").size();
  for (const auto& r : reports) name_width = std::max(name_width, r.kind.name().size());
  out << fmt::format("{:<{}}  {:>12}  {:>12}\n", "Regression", name_width, "x-error %", "y-error %");
  for (const auto& r : reports) {
    out << fmt::format("{:<{}}  {:>12}  {:>12}\n", r.kind.name(), name_width, cell(r.err_x_pct),
                       cell(r.err_y_pct));
  }
}

// ---- synthetic trajectories -----------------------------------------------

void SyntheticSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::Config, "synthetic spec: " + msg); };
  if (!std::isfinite(a_x) || !std::isfinite(b_x) || !std::isfinite(a_y) || !std::isfinite(b_y)) {
    fail("a_x, b_x, a_y, b_y must be finite");
  }
  if (n_frames < 1) fail("n_frames must be positive");
  if (!std::isfinite(noise_sigma) || noise_sigma < 0.0) fail("noise_sigma must be >= 0");
  if (!(shake_prob >= 0.0 && shake_prob <= 1.0)) fail("shake_prob must lie in [0,1]");
  if (!std::isfinite(shake_scale) || shake_scale < 0.0) fail("shake_scale must be >= 0");
}

namespace {

const char* variant_name(SyntheticVariant v) {
  return v == SyntheticVariant::PureExponential ? "PureExponential" : "SinExponential";
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_value(const std::string& key, const std::string& value, std::size_t line) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::Parse, "bad value '" + value + "' for key '" + key + "'", line, key);
  }
  return out;
}

}  // namespace

SyntheticSpec parse_synthetic_spec(std::istream& in) {
  SyntheticSpec spec;
  std::map<std::string, bool> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    const std::string body = trim(text);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Parse, "expected 'key = value'", line);
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (seen.count(key)) throw Error(ErrorCode::Parse, "duplicate key '" + key + "'", line, key);
    seen[key] = true;

    if (key == "a_x") spec.a_x = parse_value<double>(key, value, line);
    else if (key == "b_x") spec.b_x = parse_value<double>(key, value, line);
    else if (key == "a_y") spec.a_y = parse_value<double>(key, value, line);
    else if (key == "b_y") spec.b_y = parse_value<double>(key, value, line);
    else if (key == "n_frames") spec.n_frames = parse_value<std::int64_t>(key, value, line);
    else if (key == "noise_sigma") spec.noise_sigma = parse_value<double>(key, value, line);
    else if (key == "shake_prob") spec.shake_prob = parse_value<double>(key, value, line);
    else if (key == "shake_scale") spec.shake_scale = parse_value<double>(key, value, line);
    else if (key == "seed") spec.seed = parse_value<std::uint64_t>(key, value, line);
    else if (key == "variant") {
      if (value == "PureExponential") spec.variant = SyntheticVariant::PureExponential;
      else if (value == "SinExponential") spec.variant = SyntheticVariant::SinExponential;
      else throw Error(ErrorCode::Parse, "variant must be PureExponential or SinExponential", line, key);
    } else {
      throw Error(ErrorCode::Parse, "unknown key '" + key + "'", line, key);
    }
  }
  for (const char* required : {"a_x", "b_x", "a_y", "b_y", "n_frames"}) {
    if (!seen.count(required)) {
      throw Error(ErrorCode::Parse, std::string("missing required key '") + required + "'", std::nullopt,
                  required);
    }
  }
  spec.validate();
  return spec;
}

void write_synthetic_spec(std::ostream& out, const SyntheticSpec& spec) {
  out << "a_x = " << fmt::format("{}", spec.a_x) << '\n'
      << "b_x = " << fmt::format("{}", spec.b_x) << '\n'
      << "a_y = " << fmt::format("{}", spec.a_y) << '\n'
      << "b_y = " << fmt::format("{}", spec.b_y) << '\n'
      << "variant = " << variant_name(spec.variant) << '\n'
      << "n_frames = " << spec.n_frames << '\n'
      << "noise_sigma = " << fmt::format("{}", spec.noise_sigma) << '\n'
      << "shake_prob = " << fmt::format("{}", spec.shake_prob) << '\n'
      << "shake_scale = " << fmt::format("{}", spec.shake_scale) << '\n'
      << "seed = " << spec.seed << '\n';
}

namespace {

AxisSeries synthesize_axis(const SyntheticSpec& spec, Axis axis, double a, double b, Stream& rng) {
  AxisSeries series{axis, {}};
  series.samples.reserve(static_cast<std::size_t>(spec.n_frames));
  for (std::int64_t frame = 0; frame < spec.n_frames; ++frame) {
    const double t = static_cast<double>(frame);
    const double z = rng.normal();
    const double coin = rng.uniform01();
    const double offset = (2.0 * rng.uniform01() - 1.0) * spec.shake_scale;

    double value = std::exp(a * t + b);
    if (spec.variant == SyntheticVariant::SinExponential) value += std::sin(a);
    if (spec.noise_sigma > 0.0) value *= std::exp(spec.noise_sigma * z);
    if (coin < spec.shake_prob) value += offset;

    if (!std::isfinite(value) || value <= 0.0) {
      throw Error(ErrorCode::Generation, fmt::format("{}-axis value {} at frame {} is not a positive finite number",
                                                     to_string(axis), value, frame));
    }
    series.samples.push_back({t, value});
  }
  return series;
}

}  // namespace

std::pair<AxisSeries, AxisSeries> synthesize(const SyntheticSpec& spec) {
  spec.validate();
  SplitMix64 seeder(spec.seed);
  Stream x_stream(seeder.next());
  Stream y_stream(seeder.next());
  auto xs = synthesize_axis(spec, Axis::X, spec.a_x, spec.b_x, x_stream);
  auto ys = synthesize_axis(spec, Axis::Y, spec.a_y, spec.b_y, y_stream);
  return {std::move(xs), std::move(ys)};
}

std::vector<std::vector<ErrorReport>> run_harness(const std::vector<SyntheticSpec>& specs,
                                                  const std::vector<ModelKind>& kinds, double cutoff_t,
                                                  const WindowConfig& config, unsigned threads) {
  std::vector<std::vector<ErrorReport>> results(specs.size());
  auto run_one = [&](std::size_t i) {
    const auto [xs, ys] = synthesize(specs[i]);
    results[i] = compare(xs, ys, kinds, cutoff_t, config);
  };

  if (threads <= 1 || specs.size() <= 1) {
    for (std::size_t i = 0; i < specs.size(); ++i) run_one(i);
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(specs.size());
  std::vector<std::thread> pool;
  const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(specs.size()));
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < specs.size(); i = next++) {
        try {
          run_one(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  // Report the first failing trajectory, as the sequential loop would.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

void write_harness_csv(std::ostream& out, const std::vector<std::vector<ErrorReport>>& results) {
  out << "trajectory," << kComparisonCsvHeader << '\n';
  for (std::size_t i = 0; i < results.size(); ++i) {
    for (const auto& r : results[i]) {
      out << i << ',';
      write_row(out, r);
    }
  }
}

}  // namespace trajpred
