#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace borelsum {

// Scalar used by the symbolic / interpolant layer (problem model, formal
// solver, standard form).  The grid engine always works in complex<double>.
using real = double;
using cx = std::complex<real>;

constexpr double pi_const = 3.14159265358979323846;

/// Input or configuration rejected before any numerics ran (CLI exit 1).
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iteration failed to converge or a point fell outside the certified
/// domain (CLI exit 2).
struct convergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two independent computations of the same quantity disagree beyond
/// tolerance.  Always a bug, never a warning (CLI exit 3).
struct consistency_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Evaluation failure inside a coefficient function (pole, log branch point).
struct evaluation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace borelsum
