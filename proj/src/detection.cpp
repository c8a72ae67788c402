#include "trajpred/detection.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "trajpred/error.hpp"

namespace trajpred {

const char* to_string(Axis axis) { return axis == Axis::X ? "x" : "y"; }

StreamFormat parse_stream_format(std::string_view name) {
  if (name == "jsonl") return StreamFormat::Jsonl;
  if (name == "csv") return StreamFormat::Csv;
  throw Error(ErrorCode::Config, "unknown stream format '" + std::string(name) + "'");
}

namespace {

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

void validate(const DetectionRecord& r, std::size_t line) {
  auto fail = [line](const char* field, const std::string& why) {
    throw Error(ErrorCode::Validation, std::string(field) + " " + why, line, field);
  };
  if (r.frame_index < 0) fail("frame", "must be non-negative");
  if (!std::isfinite(r.left)) fail("left", "must be finite");
  if (!std::isfinite(r.top)) fail("top", "must be finite");
  if (!std::isfinite(r.width) || r.width <= 0.0) fail("width", "must be positive");
  if (!std::isfinite(r.height) || r.height <= 0.0) fail("height", "must be positive");
  if (!(r.confidence >= 0.0 && r.confidence <= 1.0)) fail("confidence", "must lie in [0,1]");
}

// ---- JSONL ----------------------------------------------------------------

double json_number(const nlohmann::json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorCode::Parse, std::string("missing required key '") + key + "'", line, key);
  }
  if (!it->is_number()) {
    throw Error(ErrorCode::Parse, std::string("key '") + key + "' is not a number", line, key);
  }
  return it->get<double>();
}

DetectionRecord parse_json_line(const std::string& text, std::size_t line) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("malformed JSON: ") + e.what(), line);
  }
  if (!obj.is_object()) throw Error(ErrorCode::Parse, "expected a JSON object", line);

  DetectionRecord r;
  auto frame = obj.find("frame");
  if (frame == obj.end()) throw Error(ErrorCode::Parse, "missing required key 'frame'", line, "frame");
  if (frame->is_number_integer()) {
    r.frame_index = frame->get<std::int64_t>();
  } else if (frame->is_number_float() && std::floor(frame->get<double>()) == frame->get<double>() &&
             std::abs(frame->get<double>()) < 9.0e15) {
    r.frame_index = static_cast<std::int64_t>(frame->get<double>());
  } else {
    throw Error(ErrorCode::Parse, "key 'frame' is not an integer", line, "frame");
  }
  r.left = json_number(obj, "left", line);
  r.top = json_number(obj, "top", line);
  r.width = json_number(obj, "width", line);
  r.height = json_number(obj, "height", line);

  if (auto c = obj.find("confidence"); c != obj.end() && !c->is_null()) {
    if (!c->is_number()) throw Error(ErrorCode::Parse, "key 'confidence' is not a number", line, "confidence");
    r.confidence = c->get<double>();
  }
  if (auto l = obj.find("label"); l != obj.end() && !l->is_null()) {
    if (!l->is_string()) throw Error(ErrorCode::Parse, "key 'label' is not a string", line, "label");
    r.label = l->get<std::string>();
  }
  validate(r, line);
  return r;
}

// ---- CSV ------------------------------------------------------------------

std::vector<std::string> split_csv(const std::string& text, std::size_t line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == ',') {
      fields.emplace_back();
      was_quoted = false;
    } else if (c == '"' && fields.back().empty() && !was_quoted) {
      quoted = true;
      was_quoted = true;
    } else {
      if (was_quoted) throw Error(ErrorCode::Parse, "text after closing quote", line);
      fields.back() += c;
    }
  }
  if (quoted) throw Error(ErrorCode::Parse, "unterminated quoted field", line);
  return fields;
}

double csv_number(const std::string& field, const char* name, std::size_t line) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::Parse, std::string("field '") + name + "' is not a number: '" + field + "'",
                line, name);
  }
  return value;
}

DetectionRecord parse_csv_line(const std::string& text, std::size_t line) {
  auto fields = split_csv(text, line);
  if (fields.size() != 7) {
    throw Error(ErrorCode::Parse, "expected 7 fields, found " + std::to_string(fields.size()), line);
  }
  DetectionRecord r;
  {
    const std::string& f = fields[0];
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), r.frame_index);
    if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
      throw Error(ErrorCode::Parse, "field 'frame' is not an integer: '" + f + "'", line, "frame");
    }
  }
  r.left = csv_number(fields[1], "left", line);
  r.top = csv_number(fields[2], "top", line);
  r.width = csv_number(fields[3], "width", line);
  r.height = csv_number(fields[4], "height", line);
  if (!fields[5].empty()) r.confidence = csv_number(fields[5], "confidence", line);
  r.label = fields[6];
  validate(r, line);
  return r;
}

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of("\n\r") != std::string::npos) {
    throw Error(ErrorCode::Validation, "CSV label cannot contain a line break", std::nullopt, "label");
  }
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::vector<DetectionRecord> parse_detections(std::istream& input, StreamFormat format) {
  std::vector<DetectionRecord> records;
  std::string text;
  std::size_t line = 0;
  bool header_seen = false;
  while (std::getline(input, text)) {
    ++line;
    strip_cr(text);
    if (format == StreamFormat::Csv && !header_seen) {
      if (text != kCsvHeader) {
        throw Error(ErrorCode::Parse, "CSV header must be exactly '" + std::string(kCsvHeader) + "'", line);
      }
      header_seen = true;
      continue;
    }
    if (is_blank(text)) continue;
    records.push_back(format == StreamFormat::Jsonl ? parse_json_line(text, line)
                                                    : parse_csv_line(text, line));
  }
  if (input.bad()) throw Error(ErrorCode::Io, "failed reading detection stream");
  return records;
}

std::vector<DetectionRecord> parse_detections(std::string_view input, StreamFormat format) {
  std::istringstream in{std::string(input)};
  return parse_detections(in, format);
}

void write_detections(std::ostream& out, const std::vector<DetectionRecord>& records,
                      StreamFormat format) {
  if (format == StreamFormat::Jsonl) {
    for (const auto& r : records) {
      nlohmann::ordered_json obj;
      obj["frame"] = r.frame_index;
      obj["left"] = r.left;
      obj["top"] = r.top;
      obj["width"] = r.width;
      obj["height"] = r.height;
      obj["confidence"] = r.confidence;
      obj["label"] = r.label;
      out << obj.dump() << '\n';
    }
    return;
  }
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.frame_index << ',' << shortest(r.left) << ',' << shortest(r.top) << ','
        << shortest(r.width) << ',' << shortest(r.height) << ',' << shortest(r.confidence) << ','
        << csv_quote(r.label) << '\n';
  }
}

std::vector<DetectionRecord> select_per_frame(std::vector<DetectionRecord> records) {
  // Best candidate first within each frame, so unique() keeps the winner.
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    if (a.frame_index != b.frame_index) return a.frame_index < b.frame_index;
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.left != b.left) return a.left < b.left;
    return a.top < b.top;
  });
  auto last = std::unique(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return a.frame_index == b.frame_index;
  });
  records.erase(last, records.end());
  return records;
}

EndpointObservation to_observation(const DetectionRecord& record) {
  return {static_cast<double>(record.frame_index), record.left + record.width / 2.0,
          record.top + record.height / 2.0};
}

std::vector<EndpointObservation> to_observations(const std::vector<DetectionRecord>& records) {
  std::vector<EndpointObservation> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(to_observation(r));
  return out;
}

std::pair<AxisSeries, AxisSeries> build_series(const std::vector<EndpointObservation>& observations) {
  AxisSeries xs{Axis::X, {}};
  AxisSeries ys{Axis::Y, {}};
  xs.samples.reserve(observations.size());
  ys.samples.reserve(observations.size());
  for (std::size_t i = 0; i < observations.size(); ++i) {
    const auto& o = observations[i];
    if (i > 0 && !(o.t > observations[i - 1].t)) {
      throw Error(ErrorCode::Ordering, "observation " + std::to_string(i) + " has t=" + shortest(o.t) +
                                           " not after t=" + shortest(observations[i - 1].t));
    }
    xs.samples.push_back({o.t, o.x});
    ys.samples.push_back({o.t, o.y});
  }
  return {std::move(xs), std::move(ys)};
}

void check_ordering(const AxisSeries& series) {
  for (std::size_t i = 1; i < series.samples.size(); ++i) {
    if (!(series.samples[i].t > series.samples[i - 1].t)) {
      throw Error(ErrorCode::Ordering, std::string(to_string(series.axis)) + "-series sample " +
                                           std::to_string(i) + " is not after its predecessor");
    }
  }
}

}  // namespace trajpred
