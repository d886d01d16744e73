#pragma once

#include <vector>

#include "borelsum/multi_index.hpp"
#include "borelsum/types.hpp"

namespace borelsum {

// ---------------------------------------------------------------------------
// Truncated power series in one variable, plain monomial coefficients:
// a[0] + a[1] t + a[2] t^2 + ...
// ---------------------------------------------------------------------------

/// c = a * b truncated to `len` coefficients (Cauchy product).
std::vector<cx> poly_mul(const std::vector<cx>& a, const std::vector<cx>& b,
                         int len);

/// a^p truncated to `len` coefficients (repeated truncated products).
std::vector<cx> poly_pow(const std::vector<cx>& a, int p, int len);

/// Power-product coefficient for a fixed order split: the product over
/// components j of [t^{n[j]}] (sum_k f[j][k] t^k)^{m[j]}.
cx power_product_coeff(const std::vector<std::vector<cx>>& f,
                       const MultiIndex& m, const MultiIndex& n);

/// Aggregate over all splits of total order s: [t^s] of the full product
/// Prod_j (f^j)^{m[j]}, i.e. the sum of power_product_coeff over |n| = s.
/// Computed by dynamic programming on truncated products; cost is polynomial
/// in s, unlike enumerating index compositions.
cx power_product_total(const std::vector<std::vector<cx>>& f,
                       const MultiIndex& m, int s);

/// Real-coefficient variant of the aggregate, used by majorant iterations.
double power_product_total_real(const std::vector<std::vector<double>>& f,
                                const MultiIndex& m, int s);

// ---------------------------------------------------------------------------
// Borel transform of an hbar-series
// ---------------------------------------------------------------------------

/// Formal Borel transform: hbar^{n+1} |-> xi^n / n!.  Takes the coefficients
/// (a_0, a_1, a_2, ...) of sum a_n hbar^n, drops the constant term (returned
/// separately through `leading`), and returns the plain monomial coefficients
/// c_n = a_{n+1} / n! of the Borel image sum c_n xi^n.
std::vector<cx> formal_borel(const std::vector<cx>& hbar_coeffs, cx& leading);

/// Laplace transform of the monomial xi^n / n! along [0, Xi] in xi, evaluated
/// at hbar: integral_0^Xi e^{-xi/hbar} xi^n/n! dxi = hbar^{n+1} P(n+1, Xi/hbar)
/// where P is the regularised lower incomplete gamma function.  Used as a
/// quadrature oracle.
cx laplace_monomial(int n, cx hbar, double Xi);

/// Regularised lower incomplete gamma P(a, x) for integer a >= 1, real x >= 0.
double reg_lower_gamma(int a, double x);

// ---------------------------------------------------------------------------
// Discrete convolution on a uniform xi-grid
// ---------------------------------------------------------------------------

/// Trapezoid-rule discrete convolution of samples a[k] = a(k h), b[k] = b(k h):
///   (a*b)[k] ~= h * sum_{j=0}^{k} w_j a[j] b[k-j],  w_0 = w_k = 1/2.
/// The k = 0 entry is exactly 0.  Bilinear but NOT associative; callers that
/// depend on association order must fix a canonical fold.
std::vector<cx> discrete_convolution(const std::vector<cx>& a,
                                     const std::vector<cx>& b, double h);

/// Single entry (a*b)[k] of the trapezoid convolution above.
cx discrete_convolution_at(const std::vector<cx>& a, const std::vector<cx>& b,
                           double h, int k);

/// Exact convolution law for divided powers:
///   (xi^a / a!) * (xi^b / b!) = xi^{a+b+1} / (a+b+1)!.
/// Returns the divided-power coefficients of the convolution of two
/// polynomials given in the divided-power basis.
std::vector<cx> divided_power_convolution(const std::vector<cx>& a,
                                          const std::vector<cx>& b);

/// Evaluate a polynomial given in the divided-power basis sum c_n xi^n / n!.
cx eval_divided_power(const std::vector<cx>& c, cx xi);

}  // namespace borelsum
