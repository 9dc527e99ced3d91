#include "sfseg/error.hpp"

namespace sfseg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::BadRank: return "BadRank";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::AlphaNotGreaterThanOne: return "AlphaNotGreaterThanOne";
    case ErrorCode::EmptyConditionEdges: return "EmptyConditionEdges";
    case ErrorCode::NoForeground: return "NoForeground";
    case ErrorCode::EmptySurface: return "EmptySurface";
    case ErrorCode::BadSpec: return "BadSpec";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::DtypeMismatch: return "DtypeMismatch";
    case ErrorCode::ProviderError: return "ProviderError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace sfseg
