#pragma once

#include <vector>

#include "borelsum/cheb.hpp"
#include "borelsum/types.hpp"

namespace borelsum {

/// Coordinate change z = Phi(x) = integral of phi from x0 to x along the
/// window, with Newton-based inverse.  Phi(x0) = 0.
struct LiouvilleMap {
  ChebInterpolant phi;  // integrand (nonvanishing on the window)
  ChebInterpolant Phi;  // antiderivative with Phi(x0) = 0
  cx x0{}, a{}, b{};
  /// Real extents of the window image along the central ray.
  double z_min = 0.0, z_max = 0.0;

  cx forward(cx x) const { return Phi.eval(x); }

  /// Newton inversion of Phi; initial guess from a precomputed sample table.
  /// Throws convergence_error if Newton does not reach tolerance.
  cx inverse(cx z) const;

  // Sample table (uniform in the window parameter) used to seed Newton.
  std::vector<cx> sample_x, sample_z;
};

/// Build the map for one eigenvalue branch.  Validates that phi does not
/// vanish on the window (turning point) and that the image of the central
/// ray is injective (monotone increments).
LiouvilleMap liouville_map(const ChebInterpolant& phi, cx x0, cx a, cx b);

}  // namespace borelsum
