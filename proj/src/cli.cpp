#include "trajpred/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "trajpred/detection.hpp"
#include "trajpred/error.hpp"
#include "trajpred/evaluation.hpp"
#include "trajpred/plot.hpp"
#include "trajpred/regression.hpp"
#include "trajpred/trajectory.hpp"

namespace trajpred::cli {

namespace {

struct Options {
  std::string input;
  std::string out;
  std::string format;
  std::string model = "sinexp";
  int poly_degree = 2;
  std::string axis = "x";
  std::optional<double> cutoff;
  int horizon = kDefaultHorizon;
  std::string window = "all";
  std::string region;
  std::optional<std::uint64_t> seed;
  bool clamp_nonpositive = false;
  std::string spec;
  std::string models;
  std::string table = "csv";
};

std::string fixed(double v) { return fmt::format("{:.6f}", v); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::Config, "bad number '" + text + "' for " + what);
  }
  return v;
}

WindowConfig window_config(const Options& o) {
  WindowConfig config;
  config.horizon = o.horizon;
  if (o.window != "all") {
    std::size_t length = 0;
    auto [ptr, ec] = std::from_chars(o.window.data(), o.window.data() + o.window.size(), length);
    if (o.window.empty() || ec != std::errc() || ptr != o.window.data() + o.window.size()) {
      throw Error(ErrorCode::Config, "--window must be a positive integer or 'all', got '" + o.window + "'");
    }
    config.length = length;
  }
  config.validate();
  return config;
}

std::optional<Region> region_of(const Options& o) {
  if (o.region.empty()) return std::nullopt;
  auto parts = split(o.region, ',');
  if (parts.size() != 4) throw Error(ErrorCode::Config, "--region expects x0,y0,x1,y1");
  return Region(parse_double(parts[0], "--region"), parse_double(parts[1], "--region"),
                parse_double(parts[2], "--region"), parse_double(parts[3], "--region"));
}

FitOptions fit_options(const Options& o) { return FitOptions{o.clamp_nonpositive}; }

ModelKind model_of(const Options& o) { return ModelKind::parse(o.model, o.poly_degree); }

StreamFormat input_format(const Options& o) {
  if (!o.format.empty()) return parse_stream_format(o.format);
  const std::string& p = o.input;
  if (p.size() >= 4 && p.compare(p.size() - 4, 4, ".csv") == 0) return StreamFormat::Csv;
  return StreamFormat::Jsonl;
}

std::pair<AxisSeries, AxisSeries> load_series(const Options& o, std::istream& stdin_stream) {
  std::vector<DetectionRecord> records;
  if (o.input.empty() || o.input == "-") {
    records = parse_detections(stdin_stream, input_format(o));
  } else {
    std::ifstream file(o.input);
    if (!file) throw Error(ErrorCode::Io, "cannot open input '" + o.input + "'");
    records = parse_detections(file, input_format(o));
  }
  return build_series(to_observations(select_per_frame(std::move(records))));
}

double last_t(const AxisSeries& s) {
  if (s.empty()) throw Error(ErrorCode::InsufficientData, "input stream holds no detections");
  return s.samples.back().t;
}

// Writes through `emit` to --out, or to `out` when --out is absent.
template <typename Emit>
void write_output(const Options& o, std::ostream& out, Emit emit) {
  if (o.out.empty() || o.out == "-") {
    emit(out);
    return;
  }
  std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::Io, "cannot open output '" + o.out + "'");
  emit(file);
  if (!file) throw Error(ErrorCode::Io, "failed writing '" + o.out + "'");
}

int cmd_simulate(const Options& o, std::ostream& out) {
  std::ifstream file(o.spec);
  if (!file) throw Error(ErrorCode::Io, "cannot open spec file '" + o.spec + "'");
  SyntheticSpec spec = parse_synthetic_spec(file);
  if (o.seed) spec.seed = *o.seed;
  const auto [xs, ys] = synthesize(spec);

  constexpr double kBox = 4.0;
  std::vector<DetectionRecord> records;
  records.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    DetectionRecord r;
    r.frame_index = static_cast<std::int64_t>(xs.samples[i].t);
    r.left = xs.samples[i].v - kBox / 2;
    r.top = ys.samples[i].v - kBox / 2;
    r.width = kBox;
    r.height = kBox;
    r.confidence = 1.0;
    r.label = "rebar_endpoint";
    records.push_back(std::move(r));
  }
  write_output(o, out, [&](std::ostream& s) { write_detections(s, records, StreamFormat::Jsonl); });
  return kExitOk;
}

int cmd_fit(const Options& o, std::istream& in, std::ostream& out) {
  if (o.axis != "x" && o.axis != "y") throw Error(ErrorCode::Config, "--axis must be x or y");
  const auto [xs, ys] = load_series(o, in);
  const AxisSeries& series = o.axis == "x" ? xs : ys;
  WindowConfig config = window_config(o);
  const double cutoff = o.cutoff.value_or(std::numeric_limits<double>::infinity());
  const FitResult fit = fit_model(window(series, config, cutoff), model_of(o), fit_options(o));

  out << "kind = " << fit.kind.name() << '\n';
  out << "axis = " << o.axis << '\n';
  if (fit.kind.family() == ModelFamily::Polynomial) {
    out << "coefficients = ";
    for (std::size_t i = 0; i < fit.coefficients.size(); ++i) {
      out << (i ? "," : "") << fixed(fit.coefficients[i]);
    }
    out << '\n';
  } else {
    out << "a = " << fixed(fit.a) << '\n';
    out << "b = " << fixed(fit.b) << '\n';
  }
  out << "n_points = " << fit.n_points << '\n';
  out << "rmse = " << fixed(fit.rmse) << '\n';
  return kExitOk;
}

int cmd_predict(const Options& o, std::istream& in, std::ostream& out) {
  const WindowConfig config = window_config(o);
  const auto region = region_of(o);
  const auto [xs, ys] = load_series(o, in);
  const double cutoff = o.cutoff.value_or(last_t(xs));
  const auto p = predict_endpoint(xs, ys, model_of(o), config, cutoff, region, fit_options(o));
  out << fixed(p.t_target) << ',' << fixed(p.x) << ',' << fixed(p.y) << ','
      << (p.defect ? "true" : "false") << '\n';
  return p.defect ? kExitDefect : kExitOk;
}

int cmd_compare(const Options& o, std::istream& in, std::ostream& out) {
  const WindowConfig config = window_config(o);
  if (o.table != "csv" && o.table != "text") throw Error(ErrorCode::Config, "--table must be csv or text");
  std::vector<ModelKind> kinds;
  if (o.models.empty()) {
    kinds = default_comparison_kinds();
    if (o.poly_degree != 2) kinds.back() = ModelKind::polynomial(o.poly_degree);
  } else {
    for (const auto& name : split(o.models, ',')) kinds.push_back(ModelKind::parse(name, o.poly_degree));
  }
  const auto [xs, ys] = load_series(o, in);
  const double cutoff = o.cutoff.value_or(last_t(xs) - config.horizon);
  const auto reports = compare(xs, ys, kinds, cutoff, config, fit_options(o));
  write_output(o, out, [&](std::ostream& s) {
    if (o.table == "csv") {
      write_comparison_csv(s, reports);
    } else {
      write_comparison_text(s, reports);
    }
  });
  return kExitOk;
}

int cmd_plot(const Options& o, std::istream& in, std::ostream& out) {
  const WindowConfig config = window_config(o);
  const auto region = region_of(o);
  const auto [xs, ys] = load_series(o, in);
  const double cutoff = o.cutoff.value_or(last_t(xs));
  const ModelKind kind = model_of(o);
  const auto fits = fit_axes(xs, ys, kind, config, cutoff, fit_options(o));
  const auto p = predict_endpoint(xs, ys, kind, config, cutoff, region, fit_options(o));
  std::ostringstream svg;
  write_prediction_svg(svg, xs, ys, fits, p);
  write_output(o, out, [&](std::ostream& s) { s << svg.str(); });
  return kExitOk;
}

void add_input_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--input", o.input, "Detection stream path ('-' for stdin)");
  cmd->add_option("--format", o.format, "Input format: jsonl or csv (default from extension)");
  cmd->add_option("--model", o.model, "linear, exp, sinexp, cosexp or poly");
  cmd->add_option("--poly-degree", o.poly_degree, "Polynomial degree for poly");
  cmd->add_option("--window", o.window, "Frames of history to fit, or 'all'");
  cmd->add_option("--cutoff", o.cutoff, "Last frame visible to the fit");
  cmd->add_flag("--clamp-nonpositive", o.clamp_nonpositive, "Clamp v <= 0 to 1e-9 for exponential fits");
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Endpoint trajectory fitting, prediction and model comparison", "trajpred"};
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "Write a synthetic detection stream");
  simulate->add_option("--spec", o.spec, "Synthetic spec file")->required();
  simulate->add_option("--seed", o.seed, "Override the spec seed");
  simulate->add_option("--out", o.out, "Output path (default stdout)");

  auto* fit = app.add_subcommand("fit", "Fit one axis and print the parameters");
  add_input_options(fit, o);
  fit->add_option("--axis", o.axis, "x or y");
  fit->add_option("--horizon", o.horizon, "Frames ahead (validated only)");

  auto* predict = app.add_subcommand("predict", "Predict the endpoint and gate it against a region");
  add_input_options(predict, o);
  predict->add_option("--horizon", o.horizon, "Frames ahead of the cutoff");
  predict->add_option("--region", o.region, "x0,y0,x1,y1");

  auto* comp = app.add_subcommand("compare", "Score several models against ground truth");
  add_input_options(comp, o);
  comp->add_option("--horizon", o.horizon, "Frames ahead of the cutoff");
  comp->add_option("--models", o.models, "Comma-separated model list");
  comp->add_option("--table", o.table, "Output rendering: csv or text");
  comp->add_option("--out", o.out, "Output path (default stdout)");

  auto* plot = app.add_subcommand("plot", "Write an SVG of both axis fits");
  add_input_options(plot, o);
  plot->add_option("--horizon", o.horizon, "Frames ahead of the cutoff");
  plot->add_option("--region", o.region, "x0,y0,x1,y1");
  plot->add_option("--out", o.out, "Output path (default stdout)");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("trajpred");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(o, out);
    if (fit->parsed()) return cmd_fit(o, in, out);
    if (predict->parsed()) return cmd_predict(o, in, out);
    if (comp->parsed()) return cmd_compare(o, in, out);
    if (plot->parsed()) return cmd_plot(o, in, out);
  } catch (const Error& e) {
    err << "trajpred: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "trajpred: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace trajpred::cli
