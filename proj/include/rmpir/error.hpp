#pragma once

#include <stdexcept>
#include <string>

namespace rmpir {

/// Error categories surfaced through the C API as integer codes.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kSpecMismatch = 2,
  kDivisionByZero = 3,
  kInconsistentSystem = 4,
  kDecodingFailure = 5,
  kConfig = 6,
  kIo = 7,
  kCheckMismatch = 8,
  kInternal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, const std::string& what,
                    ErrorCode code = ErrorCode::kInvalidArgument) {
  if (!cond) fail(code, what);
}

}  // namespace rmpir
