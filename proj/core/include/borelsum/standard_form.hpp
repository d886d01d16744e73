#pragma once

#include <map>
#include <tuple>

#include "borelsum/cheb.hpp"
#include "borelsum/formal.hpp"
#include "borelsum/spectral.hpp"

namespace borelsum {

/// Right-hand-side data of the prepared equation
///   hbar K0^{-1} d/dx w - w = hbar G(x, hbar, w),
/// obtained by substituting f = f0 + hbar f1 + hbar P0inv w into the input
/// system, subtracting the known leading orders, and dividing by hbar^2
/// after verifying that the hbar^0 and hbar^1 parts cancel.
///
/// G is stored as a sparse table of Chebyshev interpolants keyed by
/// (component i, hbar power k, w multi-index m).  The per-component
/// transported data used by the convolution equation follows as
///   a^i_m(z)      = G^i_{0,m}(x),
///   alpha^i_m(z,xi) = sum_{k>=1} G^i_{k,m}(x) xi^{k-1}/(k-1)!,
/// evaluated at x = Phi_i^{-1}(z).
struct StandardFormCoeffs {
  int N = 0;
  int hbar_deg = 0;  // largest k with a nonzero entry
  int ydeg = 0;      // largest |m| with a nonzero entry
  std::map<std::tuple<int, int, MultiIndex>, ChebInterpolant> G;

  bool has(int i, int k, const MultiIndex& m) const;
  cx eval(int i, int k, const MultiIndex& m, cx x) const;
};

/// Build G from the problem, the formal solution through order 1, and the
/// spectral data.  Throws consistency_error if the hbar^0/hbar^1
/// cancellation fails above `cancel_tol` (inconsistent f0/f1).
StandardFormCoeffs standard_form(const ProblemSpec& spec,
                                 const FormalSolution& sol,
                                 const SpectralData& sd,
                                 double cancel_tol = 1e-8);

}  // namespace borelsum
