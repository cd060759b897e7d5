#pragma once

#include <stdexcept>
#include <string>

namespace kms {

enum class ErrorCode {
  Config,
  Domain,
  NotCoprime,
  ScanBoundTooSmall,
  OutOfTruncation,
  EmptySequence,
  Argument,
};

const char* to_string(ErrorCode code);

// Every failure the library reports carries one of the codes above; the C API
// maps them one-to-one onto kms_status values.
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

}  // namespace kms
