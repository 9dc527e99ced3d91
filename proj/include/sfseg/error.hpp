#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sfseg {

enum class ErrorCode {
  NotNormalized,
  OutOfRange,
  BadRank,
  ShapeMismatch,
  BadConfig,
  BadParams,
  AlphaNotGreaterThanOne,
  EmptyConditionEdges,
  NoForeground,
  EmptySurface,
  BadSpec,
  IoError,
  BadHeader,
  DtypeMismatch,
  ProviderError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace sfseg
