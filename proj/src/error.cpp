#include "ncbloch/error.hpp"

#include "ncbloch/types.hpp"

namespace ncbloch {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::InvalidModel: return "invalid-model";
    case ErrorKind::UnsupportedBoundary: return "unsupported-boundary";
    case ErrorKind::FermiLevelOnSpectrum: return "fermi-level-on-spectrum";
    case ErrorKind::NotChiral: return "not-chiral";
    case ErrorKind::WrongParity: return "wrong-parity";
    case ErrorKind::NotInvertible: return "not-invertible";
    case ErrorKind::Gapless: return "gapless";
    case ErrorKind::ConfigError: return "config-error";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace ncbloch
