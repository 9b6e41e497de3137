#pragma once

#include <stdexcept>
#include <string>

namespace emato {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration or construction spec is malformed.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Engine operating point lies outside the speed/torque envelope.
class EnvelopeViolation : public Error {
 public:
  using Error::Error;
};

/// Least-squares design matrix is rank deficient.
class DegenerateSamples : public Error {
 public:
  using Error::Error;
};

/// Two time series that must share a horizon do not.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class NoFeasibleCandidate : public Error {
 public:
  using Error::Error;
};

/// Fuel efficiency requested for a run that covered no distance.
class UndefinedEfficiency : public Error {
 public:
  using Error::Error;
};

/// A leader prediction was requested past the end of its driving cycle.
class CycleExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace emato
