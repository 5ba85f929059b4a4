#pragma once

#include <stdexcept>

namespace polarcs {

// Precondition violations surface as exceptions; decode outcomes that are
// part of normal operation (erasure failure, non-convergence) are reported
// through DecodeResult::status instead.

class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace polarcs
