#pragma once

#include <vector>

#include "borelsum/engine.hpp"
#include "borelsum/formal.hpp"
#include "borelsum/liouville.hpp"
#include "borelsum/spectral.hpp"

namespace borelsum {

/// Half-plane-type domain {hbar : Re(e^{i theta}/hbar) > 1/d0} in which the
/// Laplace integral of an e^{K xi}-bounded density converges.
struct BorelDisc {
  double theta = 0.0;
  double d0 = 0.0;
  bool contains(cx hbar) const;
};

/// Disc certified by a growth fit: d0 = 1/(K + margin), strictly inside the
/// convergence barrier 1/K.
BorelDisc borel_disc(const GrowthFit& growth, double theta = 0.0,
                     double margin = 0.5);

/// Resummed value with its decomposed error budget.  total() is the sum of
/// the three components.
struct ResummedValue {
  std::vector<cx> value;
  double err_quad = 0.0;
  double err_tail = 0.0;
  double err_trunc = 0.0;
  double total() const { return err_quad + err_tail + err_trunc; }
};

/// Trapezoid rule with Gregory end corrections on the uniform samples
/// f_k = f(k h), k = 0..N, using end differences through the given order
/// (0..6).  Order 0 is the plain trapezoid.
cx gregory_quadrature(const std::vector<cx>& f, double h, int order);

/// Finite Laplace transform g(hbar) = int_0^{N h} e^{-xi/hbar} sigma(xi) dxi
/// of uniform ray samples, by Gregory-corrected trapezoid.  The error budget
/// records
///   err_quad = |order-6 - order-4 Gregory values|,
///   err_tail = D e^{(K - r) Xi} / (r - K) with r = Re(1/hbar) from the
///              growth fit (the dropped integral over [Xi, infinity)).
/// Throws convergence_error when r <= K (hbar outside the Borel disc).
ResummedValue laplace_ray(const std::vector<cx>& sigma, double h, cx hbar,
                          const GrowthFit& growth);

/// Assemble the resummed solution at x for each hbar in the list:
///   z = Phi_1(x),  g_i(hbar) = L[sigma_i(z, .)](hbar),
///   f(x, hbar) = f0(x) + hbar f1(x) + hbar P0^{-1}(x) g.
/// The sigma columns at z are 6-point Lagrange interpolants across the grid
/// columns at every xi level; the xi extent is chosen so the tail bound is
/// <= tol/10 when the grid allows it, and the realized tail bound is
/// recorded either way.  When a coarse field (same window, twice the step)
/// is supplied, err_trunc = max-component |fine - coarse| / 3 (Richardson
/// for a second-order scheme).
///
/// Throws validation_error when x leaves the realized window or the grid is
/// too coarse for the interpolation stencil, convergence_error when hbar is
/// outside the Borel disc.
std::vector<ResummedValue> resum_solution(
    const ProblemSpec& spec, const FormalSolution& sol, const BorelField& field,
    const SpectralData& sd, const std::vector<LiouvilleMap>& maps, cx x,
    const std::vector<cx>& hbars, const GrowthFit& growth, double tol = 1e-8,
    const BorelField* coarse = nullptr);

}  // namespace borelsum
