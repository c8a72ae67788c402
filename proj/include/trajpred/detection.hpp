#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace trajpred {

/// One raw per-frame bounding box as emitted by an upstream detector.
struct DetectionRecord {
  std::int64_t frame_index = 0;
  double left = 0.0;
  double top = 0.0;
  double width = 0.0;
  double height = 0.0;
  double confidence = 1.0;
  std::string label;

  friend bool operator==(const DetectionRecord&, const DetectionRecord&) = default;
};

/// Center point of a detection on the frame-index time axis.
struct EndpointObservation {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const EndpointObservation&, const EndpointObservation&) = default;
};

enum class Axis { X, Y };

struct Sample {
  double t = 0.0;
  double v = 0.0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Per-axis time series. Samples are kept in strictly increasing t.
struct AxisSeries {
  Axis axis = Axis::X;
  std::vector<Sample> samples;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }

  friend bool operator==(const AxisSeries&, const AxisSeries&) = default;
};

enum class StreamFormat { Jsonl, Csv };

const char* to_string(Axis axis);
StreamFormat parse_stream_format(std::string_view name);

inline constexpr std::string_view kCsvHeader = "frame,left,top,width,height,confidence,label";

/// Parses a detection stream. Records come back in file order. Blank lines are
/// skipped; any other malformed line raises a parse error carrying its 1-based
/// line number, and an invariant violation raises a validation error naming
/// the field.
std::vector<DetectionRecord> parse_detections(std::istream& input, StreamFormat format);
std::vector<DetectionRecord> parse_detections(std::string_view input, StreamFormat format);

/// Writes records in the given format such that parse_detections reproduces
/// them field for field.
void write_detections(std::ostream& out, const std::vector<DetectionRecord>& records,
                      StreamFormat format);

/// Keeps one record per frame: highest confidence, then smallest left, then
/// smallest top. Output is sorted by frame index.
std::vector<DetectionRecord> select_per_frame(std::vector<DetectionRecord> records);

EndpointObservation to_observation(const DetectionRecord& record);
std::vector<EndpointObservation> to_observations(const std::vector<DetectionRecord>& records);

/// Splits observations into (t, x) and (t, y) series. Throws an ordering error
/// when t is not strictly increasing.
std::pair<AxisSeries, AxisSeries> build_series(const std::vector<EndpointObservation>& observations);

/// Throws an ordering error unless sample times are strictly increasing.
void check_ordering(const AxisSeries& series);

}  // namespace trajpred
