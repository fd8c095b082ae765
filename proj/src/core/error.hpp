#pragma once

#include <stdexcept>
#include <string>

namespace sharpvar {

enum class ErrorCode {
  InvalidInput,
  InvalidDesign,
  TooLarge,
  NumericalFailure,
  Parse,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the core carries one of the codes above; the C
/// layer maps them onto sv_status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace sharpvar
