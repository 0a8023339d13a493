#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace nlbeam {

using Real = double;
using Complex = std::complex<Real>;
using ArrayXr = Eigen::ArrayXd;
using ArrayXc = Eigen::ArrayXcd;
using Index = Eigen::Index;

// Runtime failures (solver blowup, overflow caps, non-convergence).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user input: bad config values, malformed files, bad CLI arguments.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Picard iteration failed to contract; carries the last observed ratio.
class ContractionError : public Error {
 public:
  ContractionError(const std::string& what, Real ratio)
      : Error(what), last_ratio(ratio) {}
  Real last_ratio;
};

}  // namespace nlbeam
