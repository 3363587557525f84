#pragma once

#include <stdexcept>
#include <string>

namespace rru {

enum class ErrorKind {
  Syntax,
  NonLinear,
  Unbound,
  ModeError,
  MultipleRecursiveCalls,
  Transform,
  InvalidArgument,
  Io,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rru
