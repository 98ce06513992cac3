#pragma once

#include <stdexcept>
#include <string>

namespace qmesh {

/// Amplitudes handed to the engine do not form a unit vector.
class NormalizationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric parameter is outside its documented range.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A qubit label that is not present in the register.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Register size or enumeration budget exceeded.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Internal consistency violation inside the protocol simulator.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Output could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qmesh
