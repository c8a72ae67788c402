#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace trajpred {

enum class ErrorCode {
  Parse,
  Validation,
  Ordering,
  InsufficientData,
  DegenerateAbscissa,
  Domain,
  IllConditioned,
  Range,
  UndefinedReference,
  MissingTruth,
  Generation,
  Config,
  Io,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above. Parse and
// validation failures from the ingest layer also carry the offending line and
// field.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt,
        std::string field = {});

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
  std::string field_;
};

}  // namespace trajpred
