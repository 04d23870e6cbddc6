#pragma once

#include <stdexcept>
#include <string>

namespace neqforce {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Frequency outside the support of a tabulated model.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Material outside the dipole/insulator model (conductor-like response).
class UnsupportedMaterial : public Error {
 public:
  using Error::Error;
};

/// epsilon(omega) = -2 exactly: lossless Froehlich pole of the polarizability.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Matsubara terms fail to decay.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

class MissingParameter : public Error {
 public:
  using Error::Error;
};

/// Invalid geometry or configuration. `path` names the offending field when known.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace neqforce

namespace neqforce {

/// Not enough zero crossings to estimate an oscillation wavelength.
class TooFewCrossings : public Error {
 public:
  using Error::Error;
};

}  // namespace neqforce
