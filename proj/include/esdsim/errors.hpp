#pragma once

#include <stdexcept>
#include <string>

namespace esd {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A matrix handed to a gate/channel application is not unitary within tolerance.
struct NonUnitary : Error {
  using Error::Error;
};

// A qubit index is out of range, repeated, or otherwise unusable.
struct BadTarget : Error {
  using Error::Error;
};

// Sampling was requested with zero shots.
struct ZeroShots : Error {
  using Error::Error;
};

// Operand shapes do not match (matrix sizes, register widths, grid lengths).
struct DimensionMismatch : Error {
  using Error::Error;
};

// A two-qubit gate sits on a pair that is not in the coupling map.
struct UnroutableGate : Error {
  using Error::Error;
};

// A negative evolution time was supplied.
struct NegativeTime : Error {
  using Error::Error;
};

// A probability (or probability row) is outside [0, 1] / not stochastic.
struct BadProbability : Error {
  using Error::Error;
};

// A vector claimed to be a probability distribution is not one.
struct BadDistribution : Error {
  using Error::Error;
};

// Histogram/calibration bit labels disagree, or an outcome key is malformed.
struct LabelMismatch : Error {
  using Error::Error;
};

// The calibration matrix is numerically rank-deficient.
struct SingularCalibration : Error {
  using Error::Error;
};

// A matrix is not an X-form two-qubit density matrix within tolerance.
struct NotXForm : Error {
  using Error::Error;
};

// Two simultaneously-run qubit layouts share a physical qubit.
struct OverlappingLayouts : Error {
  using Error::Error;
};

// A run-configuration file is malformed; the message names the offending key.
struct ConfigError : Error {
  using Error::Error;
};

// File system trouble (missing input, unwritable output).
struct IoError : Error {
  using Error::Error;
};

}  // namespace esd
