#pragma once

#include <stdexcept>
#include <string>

namespace patchchar {

// Every failure raised by the library derives from Error. ErrorKind drives
// the CLI exit-code mapping (config 2, IO 3, numerical 4).
enum class ErrorKind {
  kParse,
  kInvalidFormat,
  kIo,
  kOutOfBounds,
  kParameter,
  kDimensionMismatch,
  kUndefinedCorrelation,
  kDegenerate,
  kConfig,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace patchchar
