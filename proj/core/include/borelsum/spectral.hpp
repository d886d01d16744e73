#pragma once

#include <vector>

#include <Eigen/Dense>

#include "borelsum/cheb.hpp"
#include "borelsum/formal.hpp"
#include "borelsum/problem.hpp"

namespace borelsum {

/// Pointwise eigendecomposition of the leading Jacobian J0(x) along the
/// window: K0 = diag(phi_i) with K0 = P0 J0 P0inv, the columns of P0inv
/// being the (branch-tracked) eigenvectors.  All entries are stored as
/// Chebyshev interpolants on the window so the data composes with the rest
/// of the pipeline; dP0inv is the exact interpolant derivative of P0inv.
struct SpectralData {
  int N = 0;
  std::vector<ChebInterpolant> phi;                   // eigenvalue branches
  std::vector<std::vector<ChebInterpolant>> P0;       // [row][col]
  std::vector<std::vector<ChebInterpolant>> P0inv;    // [row][col]
  std::vector<std::vector<ChebInterpolant>> dP0inv;   // d/dx of P0inv entries
  /// min over nodes of min_{i != j} |phi_i - phi_j| (infinity for N = 1).
  double min_gap = 0.0;

  Eigen::MatrixXcd P0_at(cx x) const;
  Eigen::MatrixXcd P0inv_at(cx x) const;
  Eigen::VectorXcd phi_at(cx x) const;
};

/// Diagonalize J0(x) = dF0/dy(x, f0(x)) at every Chebyshev node of the
/// formal solution, tracking eigenvalue branches by nearest match between
/// consecutive nodes and aligning eigenvector phases for continuity.
///
/// Throws validation_error("eigenvalue collision on window ...") if the
/// minimal eigenvalue gap at any node falls below `gap_tol` (the distinct
/// eigenvalue hypothesis fails); N = 1 is the trivial scalar case.
SpectralData diagonalize_field(const ProblemSpec& spec,
                               const FormalSolution& sol,
                               double gap_tol = 1e-6);

}  // namespace borelsum
