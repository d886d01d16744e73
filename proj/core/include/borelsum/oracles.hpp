#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "borelsum/problem.hpp"

namespace borelsum {

/// A problem bundled with independently derived closed-form references.
/// The references are built from symbolic expression arithmetic only (no
/// jets, no grid code), so agreement with the main pipeline is a genuine
/// cross-check.
struct OracleProblem {
  ProblemSpec spec;
  /// Reference formal coefficients f_n (single component).
  std::vector<Expr::Ptr> fn;
  /// Defining-relation residual measured at registration (sup over sample
  /// points of the recursion defect).
  double registration_residual = 0.0;
  /// Convergent-series flag: the Gevrey type fitted to |f_n(x0)| is ~0
  /// (e.g. entire data), so the formal series converges.
  bool convergent = false;

  /// For the linear family F = y - g: g and g'' (the Borel density is
  /// sigma(z, xi) = g''(x0 + z + xi)).
  bool linear = false;
  Expr::Ptr g, gpp;

  cx fn_at(int n, cx x) const { return fn[static_cast<size_t>(n)]->eval(x); }
};

/// Linear problem hbar f' = f - g(x) on the window [a, b]:
///   f_n = g^{(n)},  sigma(z, xi) = g''(x0 + z + xi),
///   f(x, hbar) = g + hbar g' + hbar int_0^inf e^{-xi/hbar} g''(x + xi) dxi.
/// Registration evaluates the recursion residual f_{n+1} - f_n' at sample
/// points and throws consistency_error above 1e-10.
OracleProblem oracle_linear(Expr::Ptr g, cx x0, cx a, cx b, int order = 12);

/// Riccati problem hbar f' = f - 1/x + hbar f^2 on [a, b].  Reference
/// coefficients by brute-force series substitution with symbolic expression
/// arithmetic: f_0 = 1/x, f_n = f_{n-1}' - sum_{p+q=n-1} f_p f_q.
OracleProblem oracle_riccati(cx x0, cx a, cx b, int order = 6);

/// Reference resummed value of a linear oracle by adaptive Simpson
/// quadrature of the Laplace integral (independent of the grid pipeline).
cx oracle_linear_resummed(const OracleProblem& op, cx x, cx hbar,
                          double tol = 1e-13);

/// Seeded property-test suite over the executable inequalities and exact
/// algebra laws: divided-power convolution law, integral and convolution-
/// product bounds, rho_m normalisation, power-product split equivalence,
/// convolution bilinearity/commutativity.
struct PropertyReport {
  struct Entry {
    std::string name;
    int cases = 0;
    int failures = 0;
    std::uint64_t seed = 0;       // reproduction seed for this property
    std::string first_failure;    // empty when clean
  };
  std::vector<Entry> entries;
  bool pass = false;
  int total_cases = 0;

  std::string to_text() const;
};

/// Runs ~1100 * scale cases; deterministic for a fixed seed.
PropertyReport run_property_suite(std::uint64_t seed, int scale = 1);

}  // namespace borelsum
