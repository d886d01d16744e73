#include "borelsum/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace borelsum {

namespace {

Eigen::MatrixXcd eval_matrix(const std::vector<std::vector<ChebInterpolant>>& m,
                             cx x) {
  const int n = static_cast<int>(m.size());
  Eigen::MatrixXcd out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = m[static_cast<size_t>(i)][static_cast<size_t>(j)].eval(x);
  return out;
}

}  // namespace

Eigen::MatrixXcd SpectralData::P0_at(cx x) const { return eval_matrix(P0, x); }
Eigen::MatrixXcd SpectralData::P0inv_at(cx x) const {
  return eval_matrix(P0inv, x);
}
Eigen::VectorXcd SpectralData::phi_at(cx x) const {
  Eigen::VectorXcd v(N);
  for (int i = 0; i < N; ++i) v(i) = phi[static_cast<size_t>(i)].eval(x);
  return v;
}

SpectralData diagonalize_field(const ProblemSpec& spec,
                               const FormalSolution& sol, double gap_tol) {
  const int N = spec.N;
  const auto nodes = sol.f[0][0].nodes();
  const int nn = static_cast<int>(nodes.size());
  const cx a = sol.f[0][0].a(), b = sol.f[0][0].b();

  SpectralData sd;
  sd.N = N;

  // Per-node J0 at the leading-order solution.
  std::vector<Eigen::MatrixXcd> J0(static_cast<size_t>(nn));
  for (int t = 0; t < nn; ++t) {
    std::vector<cx> y(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i)
      y[static_cast<size_t>(i)] =
          sol.f[0][static_cast<size_t>(i)].node_values()[static_cast<size_t>(t)];
    auto rows = spec.eval_J0(nodes[static_cast<size_t>(t)], y);
    Eigen::MatrixXcd m(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    J0[static_cast<size_t>(t)] = m;
  }

  if (N == 1) {
    std::vector<cx> lam(static_cast<size_t>(nn));
    for (int t = 0; t < nn; ++t) lam[static_cast<size_t>(t)] = J0[static_cast<size_t>(t)](0, 0);
    sd.phi.emplace_back(a, b, lam);
    std::vector<cx> one(static_cast<size_t>(nn), cx(1.0));
    std::vector<cx> zero(static_cast<size_t>(nn), cx(0.0));
    sd.P0 = {{ChebInterpolant(a, b, one)}};
    sd.P0inv = {{ChebInterpolant(a, b, one)}};
    sd.dP0inv = {{ChebInterpolant(a, b, zero)}};
    sd.min_gap = std::numeric_limits<double>::infinity();
    return sd;
  }

  // Branch-tracked node values.
  std::vector<std::vector<cx>> lam(static_cast<size_t>(N),
                                   std::vector<cx>(static_cast<size_t>(nn)));
  std::vector<Eigen::MatrixXcd> Vnode(static_cast<size_t>(nn));
  std::vector<Eigen::MatrixXcd> Pnode(static_cast<size_t>(nn));
  double min_gap = std::numeric_limits<double>::infinity();

  Eigen::VectorXcd prev_lam(N);
  Eigen::MatrixXcd prev_V(N, N);
  for (int t = 0; t < nn; ++t) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(J0[static_cast<size_t>(t)]);
    if (es.info() != Eigen::Success)
      throw convergence_error("eigendecomposition of J0 failed on the window");
    Eigen::VectorXcd ev = es.eigenvalues();
    Eigen::MatrixXcd V = es.eigenvectors();

    std::vector<int> order(static_cast<size_t>(N));
    if (t == 0) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int p, int q) {
        if (ev(p).real() != ev(q).real()) return ev(p).real() < ev(q).real();
        return ev(p).imag() < ev(q).imag();
      });
    } else {
      // Nearest-match assignment of this node's eigenvalues to the previous
      // node's branches.
      std::vector<bool> used(static_cast<size_t>(N), false);
      for (int bidx = 0; bidx < N; ++bidx) {
        int best = -1;
        double bestd = std::numeric_limits<double>::infinity();
        for (int q = 0; q < N; ++q) {
          if (used[static_cast<size_t>(q)]) continue;
          const double d = std::abs(ev(q) - prev_lam(bidx));
          if (d < bestd) {
            bestd = d;
            best = q;
          }
        }
        order[static_cast<size_t>(bidx)] = best;
        used[static_cast<size_t>(best)] = true;
      }
    }

    Eigen::VectorXcd lam_t(N);
    Eigen::MatrixXcd V_t(N, N);
    for (int bidx = 0; bidx < N; ++bidx) {
      lam_t(bidx) = ev(order[static_cast<size_t>(bidx)]);
      Eigen::VectorXcd col = V.col(order[static_cast<size_t>(bidx)]);
      col.normalize();
      cx phase;
      if (t == 0) {
        int imax = 0;
        for (int r = 1; r < N; ++r)
          if (std::abs(col(r)) > std::abs(col(imax))) imax = r;
        phase = col(imax) / std::abs(col(imax));
      } else {
        const cx ov = prev_V.col(bidx).dot(col);
        phase = (std::abs(ov) > 1e-8) ? ov / std::abs(ov) : cx(1.0);
      }
      V_t.col(bidx) = col / phase;
    }

    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j)
        min_gap = std::min(min_gap, std::abs(lam_t(i) - lam_t(j)));
    if (min_gap < gap_tol)
      throw validation_error(
          "eigenvalue collision on window: the distinct-eigenvalue hypothesis "
          "of the leading Jacobian is violated (gap < tolerance)");

    for (int i = 0; i < N; ++i) lam[static_cast<size_t>(i)][static_cast<size_t>(t)] = lam_t(i);
    Vnode[static_cast<size_t>(t)] = V_t;
    Pnode[static_cast<size_t>(t)] = V_t.partialPivLu().inverse();

    // Pointwise similarity invariant P0 J0 P0inv = K0.
    Eigen::MatrixXcd K = Pnode[static_cast<size_t>(t)] * J0[static_cast<size_t>(t)] * V_t;
    double offdiag = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        if (i != j) offdiag = std::max(offdiag, std::abs(K(i, j)));
    if (offdiag > 1e-8 * (1.0 + J0[static_cast<size_t>(t)].norm()))
      throw consistency_error(
          "similarity defect P0 J0 P0inv - K0 above tolerance at a window "
          "node");

    prev_lam = lam_t;
    prev_V = V_t;
  }

  sd.min_gap = min_gap;
  for (int i = 0; i < N; ++i) sd.phi.emplace_back(a, b, lam[static_cast<size_t>(i)]);
  sd.P0.resize(static_cast<size_t>(N));
  sd.P0inv.resize(static_cast<size_t>(N));
  sd.dP0inv.resize(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      std::vector<cx> pv(static_cast<size_t>(nn)), vv(static_cast<size_t>(nn));
      for (int t = 0; t < nn; ++t) {
        pv[static_cast<size_t>(t)] = Pnode[static_cast<size_t>(t)](i, j);
        vv[static_cast<size_t>(t)] = Vnode[static_cast<size_t>(t)](i, j);
      }
      sd.P0[static_cast<size_t>(i)].emplace_back(a, b, pv);
      sd.P0inv[static_cast<size_t>(i)].emplace_back(a, b, vv);
      sd.dP0inv[static_cast<size_t>(i)].push_back(
          sd.P0inv[static_cast<size_t>(i)].back().derivative());
    }
  }
  return sd;
}

}  // namespace borelsum
