#pragma once

#include <stdexcept>
#include <string>

namespace alexprobe {

enum class ErrorCode {
  Shape,         // non-square or ragged input, wrong arity
  Value,         // NaN / infinite entries
  Parse,         // malformed number or document
  Domain,        // argument outside its mathematical domain
  Index,         // index out of range
  Precondition,  // operation called on input that violates its contract
  Spec,          // invalid space description
  Unsupported,   // well-formed request the library does not handle
  Internal,      // consistency check failed; indicates a numerical bug
  Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace alexprobe
