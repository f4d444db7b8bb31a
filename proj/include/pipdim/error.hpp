#pragma once

#include <stdexcept>
#include <string>

namespace pipdim {

/// Broad failure category. The CLI maps these onto process exit codes.
enum class ErrorKind {
  invalid_argument,  // precondition violated by the caller
  io,                // file missing, unreadable or malformed
  degenerate,        // the data carries no usable signal (e.g. d = 0)
  numerical,         // an internal numerical check failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::invalid_argument, what);
}

}  // namespace pipdim
