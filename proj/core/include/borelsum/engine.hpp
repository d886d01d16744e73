#pragma once

#include <functional>
#include <vector>

#include "borelsum/liouville.hpp"
#include "borelsum/standard_form.hpp"

namespace borelsum {

/// Uniform characteristic grid shared by the z and xi axes: nodes
/// z_j = z_min + j h and xi_k = k h with the triangle j + k <= Jtot, so
/// every characteristic point z + t lands on a grid node.
struct EngineGrid {
  double h = 0.0;
  int Jtot = 0;
  double z_min = 0.0;
};

/// Transported right-hand-side data on the grid: for each component i,
///   a^i_m(z_j)   = G^i_{0,m}(Phi_i^{-1}(z_j)),
///   alpha^i_m(z_j, xi) = sum_{k>=1} G^i_{k,m}(Phi_i^{-1}(z_j)) xi^{k-1}/(k-1)!.
struct AData {
  int N = 0;
  EngineGrid grid;

  struct Term {
    MultiIndex m;                     // |m| >= 1
    std::vector<int> factors;        // m expanded to a component list
    std::vector<cx> a;               // a_m at z nodes; empty if zero
    std::vector<std::vector<cx>> Ak; // Ak[k-1][j], k = 1.. ; may be empty
  };

  std::vector<std::vector<cx>> a0;                    // [i][j]
  std::vector<std::vector<std::vector<cx>>> alpha0k;  // [i][k-1][j]
  std::vector<std::vector<Term>> terms;               // [i] -> term list

  cx alpha0_at(int i, int j, double xi) const;
  static cx alpha_term_at(const Term& t, int j, double xi);
};

/// Evaluate the standard-form data along the grid through the coordinate
/// maps.  Throws validation_error if the grid extends past the realized
/// window image of any component.
AData assemble_a_data(const StandardFormCoeffs& sf,
                      const std::vector<LiouvilleMap>& maps,
                      const EngineGrid& grid);

/// sigma samples on the triangle: sigma[i][j][k] at (z_min + j h, k h).
struct BorelField {
  int N = 0;
  double h = 0.0;
  double z_min = 0.0;
  int Jtot = 0;
  std::vector<std::vector<std::vector<cx>>> sigma;

  int xi_count(int j) const { return Jtot - j + 1; }
  cx at(int i, int j, int k) const {
    return sigma[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)];
  }
  double max_abs() const;
};

/// Characteristic integral I[beta](z, xi) = -int_0^xi beta(z+t, xi-t) dt by
/// trapezoid along the characteristic; beta is sampled through the callback
/// at triangle indices (j, k).
std::vector<std::vector<cx>> integral_operator(
    const std::function<cx(int, int)>& beta, const EngineGrid& grid);

/// Direct t-marching solution of
///   sigma(z, xi) = -a0(z + xi) + I[alpha0 + sum_m (a_m sigma^{*m}
///                  + alpha_m * sigma^{*m})](z, xi),
/// with the implicit endpoint terms resolved by a per-level fixed point.
BorelField volterra_march(const AData& ad, double fp_tol = 1e-14,
                          int fp_max = 50);

/// Graded successive approximations sigma = sum_n sigma_n, with the
/// graded convolution products memoized on left-fold prefixes.
struct SuccessiveResult {
  BorelField sum;
  std::vector<double> term_sup;      // sup |sigma_n| over the triangle
  std::vector<BorelField> terms;     // filled when keep_terms
  int n_used = 0;
  bool converged = false;
};
SuccessiveResult successive_approximations(const AData& ad, int nmax,
                                           double tol,
                                           bool keep_terms = false);

/// Exponential envelope |sigma| <= D e^{K xi} fitted on the samples (holds
/// on every sample by construction of D).
struct GrowthFit {
  double D = 0.0;
  double K = 0.0;
};
GrowthFit fit_growth(const BorelField& f);

/// Sup distance between two fields on the common triangle.
double field_max_diff(const BorelField& a, const BorelField& b);

/// Constants (B, C, L) bounding the transported data as
/// |a_m| <= rho_m C B^m and |alpha_m| <= rho_m C B^m e^{L xi}; feed the
/// borel-variant majorant recursion to certify per-term growth.
struct BoundConstants {
  double B = 0.0, C = 0.0, L = 0.0;
};
BoundConstants borel_bound_constants(const AData& ad);

}  // namespace borelsum
