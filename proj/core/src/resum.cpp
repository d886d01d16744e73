#include "borelsum/resum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace borelsum {

bool BorelDisc::contains(cx hbar) const {
  if (hbar == cx(0.0)) return false;
  const cx rot = std::polar(1.0, theta);
  return (rot / hbar).real() > 1.0 / d0;
}

BorelDisc borel_disc(const GrowthFit& growth, double theta, double margin) {
  BorelDisc d;
  d.theta = theta;
  d.d0 = 1.0 / (growth.K + margin);
  return d;
}

namespace {

// Gregory end-correction coefficients for difference orders 1..6.
constexpr double kGregory[6] = {1.0 / 12.0,     1.0 / 24.0,
                                19.0 / 720.0,   3.0 / 160.0,
                                863.0 / 60480.0, 275.0 / 24192.0};

// Forward difference Delta^k f_0 and backward difference nabla^k f_N.
cx forward_diff(const std::vector<cx>& f, int k) {
  cx s = 0.0;
  double binom = 1.0;
  for (int i = 0; i <= k; ++i) {
    const double sign = ((k - i) % 2 == 0) ? 1.0 : -1.0;
    s += sign * binom * f[static_cast<size_t>(i)];
    binom = binom * (k - i) / (i + 1.0);
  }
  return s;
}

cx backward_diff(const std::vector<cx>& f, int k) {
  const int n = static_cast<int>(f.size()) - 1;
  cx s = 0.0;
  double binom = 1.0;
  for (int i = 0; i <= k; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    s += sign * binom * f[static_cast<size_t>(n - i)];
    binom = binom * (k - i) / (i + 1.0);
  }
  return s;
}

}  // namespace

cx gregory_quadrature(const std::vector<cx>& f, double h, int order) {
  if (f.size() < 2) return cx(0.0);
  const int n = static_cast<int>(f.size()) - 1;
  cx trap = 0.5 * (f.front() + f.back());
  for (int k = 1; k < n; ++k) trap += f[static_cast<size_t>(k)];
  trap *= h;
  const int p = std::min(order, n);
  cx corr = 0.0;
  for (int k = 1; k <= p; ++k) {
    const cx back = backward_diff(f, k);
    const cx fwd = forward_diff(f, k);
    corr += kGregory[k - 1] * (k % 2 == 1 ? back - fwd : back + fwd);
  }
  return trap - h * corr;
}

ResummedValue laplace_ray(const std::vector<cx>& sigma, double h, cx hbar,
                          const GrowthFit& growth) {
  const double r = (cx(1.0) / hbar).real();
  if (!(r > growth.K)) {
    std::ostringstream os;
    os << "hbar outside the Borel disc: Re(1/hbar) = " << r
       << " does not exceed the fitted growth rate K = " << growth.K
       << " (disc diameter bound d0 < " << 1.0 / std::max(growth.K, 1e-300)
       << ")";
    throw convergence_error(os.str());
  }
  const int n = static_cast<int>(sigma.size()) - 1;
  std::vector<cx> w(sigma.size());
  for (size_t k = 0; k < sigma.size(); ++k)
    w[k] = std::exp(-(static_cast<double>(k) * h) / hbar) * sigma[k];

  ResummedValue rv;
  const int p_hi = std::min(6, std::max(0, n));
  const int p_lo = std::min(4, std::max(0, n));
  const cx v_hi = gregory_quadrature(w, h, p_hi);
  const cx v_lo = (p_lo < p_hi) ? gregory_quadrature(w, h, p_lo)
                                : gregory_quadrature(w, h, 0);
  rv.value = {v_hi};
  rv.err_quad = std::abs(v_hi - v_lo);
  const double Xi = n > 0 ? n * h : 0.0;
  rv.err_tail = growth.D * std::exp((growth.K - r) * Xi) / (r - growth.K);
  return rv;
}

std::vector<ResummedValue> resum_solution(
    const ProblemSpec& spec, const FormalSolution& sol, const BorelField& field,
    const SpectralData& sd, const std::vector<LiouvilleMap>& maps, cx x,
    const std::vector<cx>& hbars, const GrowthFit& growth, double tol,
    const BorelField* coarse) {
  (void)spec;
  if (sol.nmax < 1)
    throw validation_error(
        "resum_solution needs the formal solution through order 1 (f0 and f1)");
  if (maps.empty())
    throw validation_error("resum_solution: no coordinate maps supplied");
  const int N = field.N;
  const double h = field.h;
  const int Jtot = field.Jtot;
  if (Jtot < 16)
    throw validation_error(
        "resum_solution: grid too coarse for the interpolation stencil and "
        "Laplace extent");

  // Reject x off the window segment before trusting the coordinate map
  // (interpolants do not extrapolate).
  {
    const cx a = maps[0].a, b = maps[0].b;
    const cx d = b - a;
    const double len2 = std::norm(d);
    const double t = ((x - a) * std::conj(d)).real() / len2;
    const double off = std::abs(x - a - t * d);
    if (t < -1e-9 || t > 1.0 + 1e-9 || off > 1e-6 * (1.0 + std::abs(d)))
      throw validation_error(
          "resum_solution: x lies outside the problem window segment");
  }
  const cx z = maps[0].forward(x);
  if (std::abs(z.imag()) > 1e-6 * (1.0 + std::abs(z)))
    throw validation_error(
        "resum_solution: x maps off the realized central ray of the window "
        "image");
  const double zr = z.real();
  if (zr < field.z_min - 1e-9 || zr > field.z_min + Jtot * h + 1e-9)
    throw validation_error(
        "resum_solution: x lies outside the realized window of the grid");

  // 6-point Lagrange stencil across grid columns.
  int j0 = static_cast<int>(std::floor((zr - field.z_min) / h)) - 2;
  j0 = std::clamp(j0, 0, Jtot - 5);
  cx wts[6];
  for (int s = 0; s < 6; ++s) {
    const cx zs = field.z_min + (j0 + s) * h;
    cx p = 1.0;
    for (int t = 0; t < 6; ++t) {
      if (t == s) continue;
      const cx zt = field.z_min + (j0 + t) * h;
      p *= (z - zt) / (zs - zt);
    }
    wts[s] = p;
  }
  const int k_avail = Jtot - 5 - j0;
  if (k_avail < 8)
    throw validation_error(
        "resum_solution: x is too close to the far edge of the window; no xi "
        "extent remains for the Laplace integral");

  const Eigen::MatrixXcd P0inv = sd.P0inv_at(x);
  std::vector<cx> f0(static_cast<size_t>(N)), f1(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) {
    f0[static_cast<size_t>(i)] = sol.eval(0, i, x);
    f1[static_cast<size_t>(i)] = sol.eval(1, i, x);
  }

  std::vector<ResummedValue> coarse_vals;
  if (coarse)
    coarse_vals = resum_solution(spec, sol, *coarse, sd, maps, x, hbars,
                                 growth, tol, nullptr);

  std::vector<ResummedValue> out;
  out.reserve(hbars.size());
  for (size_t hidx = 0; hidx < hbars.size(); ++hidx) {
    const cx hbar = hbars[hidx];
    const double r = (cx(1.0) / hbar).real();
    if (!(r > growth.K)) {
      std::ostringstream os;
      os << "hbar outside the Borel disc: Re(1/hbar) = " << r
         << " does not exceed the fitted growth rate K = " << growth.K;
      throw convergence_error(os.str());
    }
    // xi extent: aim for tail <= tol/10, capped by the grid.
    int k_use = k_avail;
    if (growth.D > 0.0) {
      const double denom = r - growth.K;
      const double xi_star =
          std::log(growth.D * 10.0 / (tol * denom)) / denom;
      if (std::isfinite(xi_star) && xi_star > 0.0)
        k_use = std::min(k_avail,
                         std::max(8, static_cast<int>(std::ceil(xi_star / h))));
      else
        k_use = std::min(k_avail, 8);
    }

    std::vector<cx> g(static_cast<size_t>(N));
    std::vector<double> gq(static_cast<size_t>(N)), gt(static_cast<size_t>(N));
    std::vector<cx> col(static_cast<size_t>(k_use) + 1);
    for (int i = 0; i < N; ++i) {
      for (int k = 0; k <= k_use; ++k) {
        cx v = 0.0;
        for (int s = 0; s < 6; ++s) v += wts[s] * field.at(i, j0 + s, k);
        col[static_cast<size_t>(k)] = v;
      }
      const ResummedValue rv = laplace_ray(col, h, hbar, growth);
      g[static_cast<size_t>(i)] = rv.value[0];
      gq[static_cast<size_t>(i)] = rv.err_quad;
      gt[static_cast<size_t>(i)] = rv.err_tail;
    }

    ResummedValue res;
    res.value.resize(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
      cx acc = 0.0;
      double rowq = 0.0, rowt = 0.0;
      for (int l = 0; l < N; ++l) {
        acc += P0inv(i, l) * g[static_cast<size_t>(l)];
        rowq += std::abs(P0inv(i, l)) * gq[static_cast<size_t>(l)];
        rowt += std::abs(P0inv(i, l)) * gt[static_cast<size_t>(l)];
      }
      res.value[static_cast<size_t>(i)] =
          f0[static_cast<size_t>(i)] + hbar * f1[static_cast<size_t>(i)] +
          hbar * acc;
      res.err_quad = std::max(res.err_quad, std::abs(hbar) * rowq);
      res.err_tail = std::max(res.err_tail, std::abs(hbar) * rowt);
    }
    if (coarse) {
      double d = 0.0;
      for (int i = 0; i < N; ++i)
        d = std::max(d, std::abs(res.value[static_cast<size_t>(i)] -
                                 coarse_vals[hidx].value[static_cast<size_t>(i)]));
      res.err_trunc = d / 3.0;
    }
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace borelsum
