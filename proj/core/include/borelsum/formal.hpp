#pragma once

#include <vector>

#include "borelsum/cheb.hpp"
#include "borelsum/jet.hpp"
#include "borelsum/problem.hpp"

namespace borelsum {

/// The formal power-series solution f(x, hbar) = sum_n f_n(x) hbar^n of
/// hbar f' = F(x, hbar, f), represented order by order as Chebyshev
/// interpolants on the problem window.
struct FormalSolution {
  ProblemSpec spec;  // already rotated to direction 0
  int nmax = 0;
  /// f[n][i]: order-n coefficient of component i.
  std::vector<std::vector<ChebInterpolant>> f;
  /// df[n][i]: exact x-derivative of f_n (from the jet recursion, not from
  /// numerical differentiation).
  std::vector<std::vector<ChebInterpolant>> df;
  /// Shared Chebyshev nodes of the window grid.
  std::vector<cx> nodes;
  /// jets[n][i][node]: Taylor jet of f_n^i around the node (length shrinks
  /// with n; order n keeps nmax - n + 2 coefficients).
  std::vector<std::vector<std::vector<Jet>>> jets;

  cx eval(int n, int i, cx x) const { return f[static_cast<size_t>(n)][static_cast<size_t>(i)].eval(x); }

  /// (f_0(x), ..., f_nmax(x)) for component i.
  std::vector<cx> coeffs_at(int i, cx x) const;

  /// sup over shared nodes of |f_n| across components.
  double sup_norm(int n) const;
};

/// Compute the formal solution through order nmax.
///
/// Order 0 solves F0(x, f0) = 0 by Newton continuation along the window
/// (seeded with y0 at the node nearest the base point), then extends each
/// node value to a Taylor jet by implicit differentiation.  Orders n >= 1
/// solve the linear recursion J0 f_n = f_{n-1}' - [hbar^n](F with f_n
/// dropped) entirely in jet arithmetic, so every x-derivative is an exact
/// coefficient shift; no spectral differentiation enters the recursion.
///
/// Throws convergence_error if Newton fails, validation_error if the
/// Jacobian invertibility hypothesis fails at some node.
FormalSolution solve_formal(const ProblemSpec& spec, int nmax, int degree = 64,
                            double newton_tol = 1e-13, int newton_max_iter = 60);

}  // namespace borelsum
