#pragma once

#include <stdexcept>
#include <string>

namespace ncbloch {

enum class ErrorKind {
  InvalidArgument,
  InvalidModel,
  UnsupportedBoundary,
  FermiLevelOnSpectrum,
  NotChiral,
  WrongParity,
  NotInvertible,
  Gapless,
  ConfigError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ncbloch
