#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "borelsum/expr.hpp"
#include "borelsum/multi_index.hpp"
#include "borelsum/types.hpp"

namespace borelsum {

/// Input system F(x, hbar, y) = sum_{k<=K} sum_{|m|<=ydeg} F^i_{km}(x)
/// hbar^k y^m, with base point and summation direction.  Immutable after
/// parse; absent coefficient entries mean the zero function.
struct ProblemSpec {
  int N = 0;     // system dimension
  int K = 0;     // hbar-degree
  int ydeg = 0;  // y-degree bound

  /// Coefficient table keyed by (component i in 0..N-1, hbar power k,
  /// y multi-index m of length N).
  std::map<std::tuple<int, int, MultiIndex>, Expr::Ptr> coeffs;

  cx x0{};                 // base point
  std::vector<cx> y0;      // base value, F0(x0, y0) = 0
  double theta = 0.0;      // Laplace direction (radians)
  cx window_a{}, window_b{};  // complex segment containing x0

  /// F^i_{km} as an expression; zero constant if absent.
  Expr::Ptr coeff(int i, int k, const MultiIndex& m) const;
  bool has_coeff(int i, int k, const MultiIndex& m) const;

  /// Full evaluation of F at (x, hbar, y).
  std::vector<cx> eval_F(cx x, cx hbar, const std::vector<cx>& y) const;

  /// Leading order F0(x, y) = F(x, 0, y).
  std::vector<cx> eval_F0(cx x, const std::vector<cx>& y) const;

  /// Jacobian dF0/dy at (x, y), row i = component, column j = dy_j.
  std::vector<std::vector<cx>> eval_J0(cx x, const std::vector<cx>& y) const;

  /// Affine parameter of x on the window segment: 0 at a, 1 at b.
  double window_param(cx x) const;

  /// New spec with hbar rotated by e^{i theta} so the direction becomes 0:
  /// coefficient F_{km} picks up e^{i(k-1)theta}.
  ProblemSpec rotated_to_zero_direction() const;
};

struct ValidationReport {
  bool pass = false;
  double residual_norm = 0.0;     // |F0(x0, y0)|
  double smallest_singular = 0.0; // of dF0/dy at the base point
  std::string diagnostic;         // empty when pass
};

/// Check the base-point hypotheses: F0(x0,y0) = 0 within tol and the
/// Jacobian dF0/dy invertible (smallest singular value >= tol).
ValidationReport validate_problem(const ProblemSpec& spec, double tol = 1e-9);

/// Parse the sectioned key-value problem format ([system], [coefficients],
/// [basepoint], [window], [direction]).  Throws validation_error with the
/// offending line on malformed input.
ProblemSpec parse_problem_text(const std::string& text);
ProblemSpec load_problem_file(const std::string& path);

}  // namespace borelsum
