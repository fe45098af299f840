#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace horoflow {

enum class ErrorCode {
  InvalidInput,
  ConeViolation,
  DivisionBySmall,
  IndexOutOfRange,
  DimensionTooLarge,
  PoleSingularity,
  StepRejected,
  GraphDegenerate,
  Config,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, std::string_view what) {
  if (!cond) fail(code, std::string(what));
}

}  // namespace horoflow
