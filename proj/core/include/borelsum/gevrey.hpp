#pragma once

#include <vector>

#include "borelsum/types.hpp"

namespace borelsum {

/// Fit of a Gevrey-1 envelope |f_n| <= C M^n n! to a sequence of sup-norms.
struct GevreyFit {
  double C = 0.0;
  double M = 1.0;
  bool all_zero = false;
  /// max over samples of |f_n| / (C M^n n!); <= 1 by construction.
  double envelope_slack = 0.0;
};

/// M = max over n (past the first quartile) of (|f_n|/n!)^{1/n};
/// C = max over all n of |f_n|/(M^n n!).  The bound then holds for every
/// provided sample by construction.
GevreyFit gevrey_fit(const std::vector<double>& norms);

enum class MajorantVariant { formal, borel };

/// Scalar majorant sequence M_0..M_nmax dominating the solution coefficients.
///
/// formal variant (parameters A, B; requires A >= 3):
///   M_0 = 0,
///   M_{n+1} = A^2 ( M_n + sum_{k=0}^n B^k sum_m B^m [t^{n-k}] p^m ),
/// borel variant (parameters B, C):
///   M_n = sum_{m=0}^n C B^m ( [t^{n-m}] p^m + [t^{n-m-1}] p^m ),
/// where p(t) = sum M_j t^j and [t^s] p^m collapses the multi-index power
/// products: all components share one scalar sequence, so
/// rho_m sum_{|m|=m} sum_{|n|=s} M^m_n = [t^s] p^m.
struct MajorantSequence {
  MajorantVariant variant;
  double A = 0.0, B = 0.0, C = 0.0;
  std::vector<double> M;     // linear-domain values (inf where overflowed)
  std::vector<double> logM;  // always valid; log(0) = -inf
  bool log_domain = false;   // true if any value exceeded 1e300
};

MajorantSequence majorant_sequence(MajorantVariant variant, double A, double B,
                                   double C, int nmax);

/// Radius of convergence of the majorant generating function, located as the
/// smallest t where Newton continuation of the scalar functional equation
/// loses solvability; Mbound = 1/tstar.
struct IftRadius {
  double tstar = 0.0;
  double Mbound = 0.0;
  bool tstar_infinite = false;  // e.g. borel variant with C -> 0
};

IftRadius ift_radius(MajorantVariant variant, double A, double B, double C);

}  // namespace borelsum
