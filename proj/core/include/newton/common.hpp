#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace newton {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// A caller violated a documented precondition (bad dimensions, invalid
/// configuration, out-of-range index, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced a non-finite value or an iterative kernel failed
/// in a way the caller cannot recover from locally.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, double offending_value = 0.0)
      : std::runtime_error(what), value_(offending_value) {}

  double offending_value() const noexcept { return value_; }

 private:
  double value_;
};

/// Malformed input data; carries the 1-based line number of the failure.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  long line() const noexcept { return line_; }

 private:
  long line_;
};

inline void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw NumericalError(std::string(what) + " is not finite", v);
  }
}

inline void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    double bad = 0.0;
    for (Index i = 0; i < v.size(); ++i) {
      if (!std::isfinite(v[i])) {
        bad = v[i];
        break;
      }
    }
    throw NumericalError(std::string(what) + " has a non-finite entry", bad);
  }
}

inline void require_dim(const Vector& v, Index d, const char* what) {
  if (v.size() != d) {
    throw UsageError(std::string(what) + ": expected length " +
                     std::to_string(d) + ", got " + std::to_string(v.size()));
  }
}

}  // namespace newton
