#include "borelsum/standard_form.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "borelsum/polyhw.hpp"

namespace borelsum {

bool StandardFormCoeffs::has(int i, int k, const MultiIndex& m) const {
  return G.count({i, k, m}) > 0;
}

cx StandardFormCoeffs::eval(int i, int k, const MultiIndex& m, cx x) const {
  auto it = G.find({i, k, m});
  return it == G.end() ? cx(0.0) : it->second.eval(x);
}

StandardFormCoeffs standard_form(const ProblemSpec& spec,
                                 const FormalSolution& sol,
                                 const SpectralData& sd, double cancel_tol) {
  const int N = spec.N;
  const auto nodes = sol.f[0][0].nodes();
  const int nn = static_cast<int>(nodes.size());
  const cx wa = sol.f[0][0].a(), wb = sol.f[0][0].b();
  const int trunc = spec.K + spec.ydeg + 2;

  // Distinct y multi-indices appearing in the input system.
  std::set<MultiIndex> m_set;
  for (const auto& [key, fn] : spec.coeffs) m_set.insert(std::get<2>(key));

  // Node-value table for the output, filled as we sweep the nodes.
  std::map<std::tuple<int, int, MultiIndex>, std::vector<cx>> table;

  const MultiIndex unit_w = [&] {
    return MultiIndex(std::vector<int>(static_cast<size_t>(N), 0));
  }();

  for (int t = 0; t < nn; ++t) {
    const cx x = nodes[static_cast<size_t>(t)];

    // Pointwise data.
    std::vector<cx> f0(static_cast<size_t>(N)), f1(static_cast<size_t>(N)),
        df0(static_cast<size_t>(N)), df1(static_cast<size_t>(N)),
        phiv(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
      f0[static_cast<size_t>(i)] = sol.f[0][static_cast<size_t>(i)].node_values()[static_cast<size_t>(t)];
      f1[static_cast<size_t>(i)] = sol.f[1][static_cast<size_t>(i)].node_values()[static_cast<size_t>(t)];
      df0[static_cast<size_t>(i)] = sol.df[0][static_cast<size_t>(i)].node_values()[static_cast<size_t>(t)];
      df1[static_cast<size_t>(i)] = sol.df[1][static_cast<size_t>(i)].node_values()[static_cast<size_t>(t)];
      phiv[static_cast<size_t>(i)] = sd.phi[static_cast<size_t>(i)].node_values()[static_cast<size_t>(t)];
    }
    auto P0 = sd.P0_at(x);
    auto P0inv = sd.P0inv_at(x);
    Eigen::MatrixXcd dP0inv(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        dP0inv(i, j) =
            sd.dP0inv[static_cast<size_t>(i)][static_cast<size_t>(j)].node_values()[static_cast<size_t>(t)];

    // y_j = f0_j + hbar f1_j + hbar sum_l P0inv[j][l] w_l.
    std::vector<PolyHW> y(static_cast<size_t>(N));
    for (int j = 0; j < N; ++j) {
      PolyHW p = PolyHW::constant(f0[static_cast<size_t>(j)], N, trunc);
      p.add_term(1, unit_w, f1[static_cast<size_t>(j)]);
      for (int l = 0; l < N; ++l) {
        MultiIndex wl = unit_w;
        wl[l] = 1;
        p.add_term(1, wl, P0inv(j, l));
      }
      y[static_cast<size_t>(j)] = p;
    }

    // Memoized y^m products.
    std::map<MultiIndex, PolyHW> ypow;
    auto y_product = [&](const MultiIndex& m) -> const PolyHW& {
      auto it = ypow.find(m);
      if (it != ypow.end()) return it->second;
      PolyHW p = PolyHW::constant(cx(1.0), N, trunc);
      for (int j = 0; j < N; ++j)
        if (m[j] > 0) p = p * y[static_cast<size_t>(j)].pow(m[j]);
      return ypow.emplace(m, std::move(p)).first->second;
    };

    // R_i = F_i(x, hbar, y) - hbar df0_i - hbar (P0inv K0 w)_i
    //       - hbar^2 df1_i - hbar^2 (dP0inv w)_i.
    std::vector<PolyHW> R(static_cast<size_t>(N), PolyHW(trunc));
    for (const auto& [key, fn] : spec.coeffs) {
      const auto& [i, k, m] = key;
      const cx c = fn->eval(x);
      if (c == cx(0.0)) continue;
      PolyHW term = y_product(m) * PolyHW::monomial(k, unit_w, cx(1.0), trunc);
      R[static_cast<size_t>(i)] += term * c;
    }
    for (int i = 0; i < N; ++i) {
      auto& Ri = R[static_cast<size_t>(i)];
      Ri.add_term(1, unit_w, -df0[static_cast<size_t>(i)]);
      Ri.add_term(2, unit_w, -df1[static_cast<size_t>(i)]);
      for (int l = 0; l < N; ++l) {
        MultiIndex wl = unit_w;
        wl[l] = 1;
        Ri.add_term(1, wl, -P0inv(i, l) * phiv[static_cast<size_t>(l)]);
        Ri.add_term(2, wl, -dP0inv(i, l));
      }
    }

    // Ghat_i = (1/phi_i) sum_j P0[i][j] R_j, divided by hbar^2.
    for (int i = 0; i < N; ++i) {
      PolyHW S(trunc);
      for (int j = 0; j < N; ++j) S += R[static_cast<size_t>(j)] * P0(i, j);
      S = S * (cx(1.0) / phiv[static_cast<size_t>(i)]);
      double scale = 1.0;
      for (const auto& [key, c] : S.terms()) scale = std::max(scale, std::abs(c));
      PolyHW Gi;
      try {
        Gi = S.shift_down(2, cancel_tol * scale);
      } catch (const consistency_error&) {
        throw consistency_error(
            "standard-form cancellation failure: the hbar^0/hbar^1 parts do "
            "not vanish within tolerance (inconsistent leading orders "
            "f0/f1)");
      }
      for (const auto& [key, c] : Gi.terms()) {
        auto& col = table[{i, key.first, key.second}];
        if (col.empty()) col.assign(static_cast<size_t>(nn), cx(0.0));
        col[static_cast<size_t>(t)] = c;
      }
    }
  }

  StandardFormCoeffs out;
  out.N = N;
  // Drop all-negligible entries relative to the global scale.
  double gmax = 0.0;
  for (const auto& [key, col] : table)
    for (const cx& v : col) gmax = std::max(gmax, std::abs(v));
  const double drop = 1e-13 * std::max(1.0, gmax);
  for (auto& [key, col] : table) {
    double m = 0.0;
    for (const cx& v : col) m = std::max(m, std::abs(v));
    if (m <= drop) continue;
    out.G.emplace(key, ChebInterpolant(wa, wb, col));
    out.hbar_deg = std::max(out.hbar_deg, std::get<1>(key));
    out.ydeg = std::max(out.ydeg, std::get<2>(key).degree());
  }
  return out;
}

}  // namespace borelsum
