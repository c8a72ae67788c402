#include "trajpred/error.hpp"

namespace trajpred {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Validation: return "validation error";
    case ErrorCode::Ordering: return "ordering error";
    case ErrorCode::InsufficientData: return "insufficient data";
    case ErrorCode::DegenerateAbscissa: return "degenerate abscissa";
    case ErrorCode::Domain: return "domain error";
    case ErrorCode::IllConditioned: return "ill-conditioned system";
    case ErrorCode::Range: return "range error";
    case ErrorCode::UndefinedReference: return "undefined reference";
    case ErrorCode::MissingTruth: return "missing ground truth";
    case ErrorCode::Generation: return "generation error";
    case ErrorCode::Config: return "configuration error";
    case ErrorCode::Io: return "i/o error";
  }
  return "error";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     const std::optional<std::size_t>& line) {
  std::string out = to_string(code);
  if (line) out += " (line " + std::to_string(*line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> line, std::string field)
    : std::runtime_error(decorate(code, message, line)),
      code_(code),
      line_(line),
      field_(std::move(field)) {}

}  // namespace trajpred
