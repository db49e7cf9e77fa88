#pragma once

#include <stdexcept>
#include <string>

namespace switchquad {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration. `path` names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Controller synthesis failed (non-Hurwitz closed loop, singular Lyapunov system).
class SynthesisError : public Error {
 public:
  using Error::Error;
};

// A switching signal violates the average-dwell-time constraint.
class AdtViolation : public Error {
 public:
  using Error::Error;
};

// Numerical integration left the valid region (attitude singularity, NaN).
class SimulationError : public Error {
 public:
  using Error::Error;
};

}  // namespace switchquad
