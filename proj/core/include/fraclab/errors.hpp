#pragma once

#include <stdexcept>
#include <string>

namespace fraclab {

// Invalid argument or precondition (non-positive s, overlapping supports, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Overflow of an intermediate (Gamma of a huge argument).
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

// An adaptive scheme did not reach its requested tolerance.
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Linear algebra breakdown: failed Cholesky, singular system, QP cycling.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fraclab
