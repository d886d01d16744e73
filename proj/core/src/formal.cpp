#include "borelsum/formal.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "borelsum/series.hpp"

namespace borelsum {

std::vector<cx> FormalSolution::coeffs_at(int i, cx x) const {
  std::vector<cx> out(static_cast<size_t>(nmax) + 1);
  for (int n = 0; n <= nmax; ++n) out[static_cast<size_t>(n)] = eval(n, i, x);
  return out;
}

double FormalSolution::sup_norm(int n) const {
  double m = 0.0;
  for (const auto& comp : f[static_cast<size_t>(n)])
    m = std::max(m, comp.max_abs());
  return m;
}

namespace {

Eigen::MatrixXcd jacobian_matrix(const ProblemSpec& spec, cx x,
                                 const std::vector<cx>& y) {
  const auto J = spec.eval_J0(x, y);
  Eigen::MatrixXcd M(spec.N, spec.N);
  for (int i = 0; i < spec.N; ++i)
    for (int j = 0; j < spec.N; ++j)
      M(i, j) = J[static_cast<size_t>(i)][static_cast<size_t>(j)];
  return M;
}

/// Newton for F0(x, y) = 0 from seed; returns converged y.
std::vector<cx> newton_f0(const ProblemSpec& spec, cx x, std::vector<cx> y,
                          double tol, int max_iter) {
  for (int it = 0; it < max_iter; ++it) {
    const auto F0 = spec.eval_F0(x, y);
    double r = 0.0;
    for (const auto& v : F0) r = std::max(r, std::abs(v));
    if (r < tol) return y;
    Eigen::MatrixXcd J = jacobian_matrix(spec, x, y);
    Eigen::VectorXcd rhs(spec.N);
    for (int i = 0; i < spec.N; ++i) rhs(i) = -F0[static_cast<size_t>(i)];
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(J);
    const Eigen::VectorXcd dy = lu.solve(rhs);
    if (!dy.allFinite())
      throw validation_error(
          "Jacobian invertibility hypothesis violated during the order-0 "
          "Newton solve on the window");
    for (int i = 0; i < spec.N; ++i) y[static_cast<size_t>(i)] += dy(i);
  }
  throw convergence_error(
      "order-0 Newton iteration did not converge on the window; the "
      "base-point solvability hypothesis may fail away from x0");
}

struct CoeffJet {
  int i, k;
  MultiIndex m;
  Jet jet;  // Taylor jet of F^i_{km} around the node
};

}  // namespace

FormalSolution solve_formal(const ProblemSpec& spec_in, int nmax, int degree,
                            double newton_tol, int newton_max_iter) {
  if (nmax < 0) throw validation_error("nmax must be >= 0");
  const ProblemSpec spec = spec_in.rotated_to_zero_direction();
  const int N = spec.N;
  const int L0 = nmax + 2;  // jet length at order 0

  ChebInterpolant layout(spec.window_a, spec.window_b, degree,
                         [](cx) { return cx(0.0); });
  const std::vector<cx> xs = layout.nodes();
  const int nn = static_cast<int>(xs.size());

  // --- Order-0 values: Newton continuation outward from the node nearest
  // the base point. ---
  int j0 = 0;
  for (int j = 1; j < nn; ++j)
    if (std::abs(xs[static_cast<size_t>(j)] - spec.x0) <
        std::abs(xs[static_cast<size_t>(j0)] - spec.x0))
      j0 = j;
  std::vector<std::vector<cx>> y_node(static_cast<size_t>(nn));
  y_node[static_cast<size_t>(j0)] = newton_f0(
      spec, xs[static_cast<size_t>(j0)], spec.y0, newton_tol, newton_max_iter);
  for (int j = j0 + 1; j < nn; ++j)
    y_node[static_cast<size_t>(j)] =
        newton_f0(spec, xs[static_cast<size_t>(j)],
                  y_node[static_cast<size_t>(j - 1)], newton_tol, newton_max_iter);
  for (int j = j0 - 1; j >= 0; --j)
    y_node[static_cast<size_t>(j)] =
        newton_f0(spec, xs[static_cast<size_t>(j)],
                  y_node[static_cast<size_t>(j + 1)], newton_tol, newton_max_iter);

  FormalSolution sol;
  sol.spec = spec;
  sol.nmax = nmax;
  sol.nodes = xs;
  sol.f.resize(static_cast<size_t>(nmax) + 1);
  sol.df.resize(static_cast<size_t>(nmax) + 1);
  sol.jets.assign(static_cast<size_t>(nmax) + 1,
                  std::vector<std::vector<Jet>>(
                      static_cast<size_t>(N),
                      std::vector<Jet>(static_cast<size_t>(nn))));

  // Per node: the full jet recursion.
  for (int jn = 0; jn < nn; ++jn) {
    const cx x = xs[static_cast<size_t>(jn)];

    // Coefficient jets.
    std::vector<CoeffJet> cjets;
    cjets.reserve(spec.coeffs.size());
    for (const auto& [key, fn] : spec.coeffs) {
      CoeffJet cj;
      std::tie(cj.i, cj.k, cj.m) = key;
      cj.jet = fn->eval_jet(x, L0);
      cjets.push_back(std::move(cj));
    }

    // Value-part Jacobian and its LU.
    Eigen::MatrixXcd Jv =
        jacobian_matrix(spec, x, y_node[static_cast<size_t>(jn)]);
    {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Jv);
      if (svd.singularValues()(N - 1) < 1e-12)
        throw validation_error(
            "Jacobian invertibility hypothesis violated at a window node "
            "(smallest singular value " +
            std::to_string(svd.singularValues()(N - 1)) + ")");
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Jv);

    // --- Order-0 jets by implicit differentiation: require every Taylor
    // coefficient of F0(x, f0(x)) to vanish. ---
    std::vector<Jet> f0jet(static_cast<size_t>(N), jet_const(cx(0.0), L0));
    for (int i = 0; i < N; ++i)
      f0jet[static_cast<size_t>(i)][0] =
          y_node[static_cast<size_t>(jn)][static_cast<size_t>(i)];
    auto eval_F0_jets = [&]() {
      std::vector<Jet> F0(static_cast<size_t>(N), jet_const(cx(0.0), L0));
      std::vector<std::vector<Jet>> fser = {};
      for (const auto& cj : cjets) {
        if (cj.k != 0) continue;
        Jet prod = cj.jet;
        for (int c = 0; c < N; ++c)
          for (int q = 0; q < cj.m[c]; ++q)
            prod = jet_mul(prod, f0jet[static_cast<size_t>(c)], L0);
        F0[static_cast<size_t>(cj.i)] = jet_add(F0[static_cast<size_t>(cj.i)], prod);
      }
      return F0;
    };
    for (int d = 1; d < L0; ++d) {
      // With coefficient d of f0jet still zero, the order-d Taylor residual
      // of F0 lacks exactly the linear term Jv * c_d.
      const auto F0 = eval_F0_jets();
      Eigen::VectorXcd rhs(N);
      for (int i = 0; i < N; ++i)
        rhs(i) = -F0[static_cast<size_t>(i)][static_cast<size_t>(d)];
      const Eigen::VectorXcd cd = lu.solve(rhs);
      for (int i = 0; i < N; ++i)
        f0jet[static_cast<size_t>(i)][static_cast<size_t>(d)] = cd(i);
    }

    // Jet-valued Jacobian J0(x) = dF0/dy (x, f0(x)).
    std::vector<std::vector<Jet>> J0jet(
        static_cast<size_t>(N),
        std::vector<Jet>(static_cast<size_t>(N), jet_const(cx(0.0), L0)));
    for (const auto& cj : cjets) {
      if (cj.k != 0) continue;
      for (int l = 0; l < N; ++l) {
        if (cj.m[l] == 0) continue;
        Jet prod = jet_scale(cj.jet, cx(static_cast<double>(cj.m[l])));
        for (int c = 0; c < N; ++c) {
          const int p = cj.m[c] - (c == l ? 1 : 0);
          for (int q = 0; q < p; ++q)
            prod = jet_mul(prod, f0jet[static_cast<size_t>(c)], L0);
        }
        J0jet[static_cast<size_t>(cj.i)][static_cast<size_t>(l)] =
            jet_add(J0jet[static_cast<size_t>(cj.i)][static_cast<size_t>(l)], prod);
      }
    }

    // hbar-series of jets per component; order n entry has length L0 - n.
    std::vector<std::vector<Jet>> fser(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
      fser[static_cast<size_t>(i)].resize(static_cast<size_t>(nmax) + 1);
      fser[static_cast<size_t>(i)][0] = f0jet[static_cast<size_t>(i)];
      sol.jets[0][static_cast<size_t>(i)][static_cast<size_t>(jn)] = f0jet[static_cast<size_t>(i)];
    }

    for (int n = 1; n <= nmax; ++n) {
      const int Ln = L0 - n;
      // Placeholder zero jet at order n realises the f_n := 0 convention.
      for (int i = 0; i < N; ++i)
        fser[static_cast<size_t>(i)][static_cast<size_t>(n)] = jet_const(cx(0.0), Ln);

      std::vector<Jet> rhs(static_cast<size_t>(N), jet_const(cx(0.0), Ln));
      for (int i = 0; i < N; ++i) {
        Jet d = jet_deriv(fser[static_cast<size_t>(i)][static_cast<size_t>(n - 1)]);
        d.resize(static_cast<size_t>(Ln), cx(0.0));
        rhs[static_cast<size_t>(i)] = d;
      }
      for (const auto& cj : cjets) {
        if (cj.k > n) continue;
        const Jet ppc = jet_power_product_total(fser, cj.m, n - cj.k, Ln);
        rhs[static_cast<size_t>(cj.i)] = jet_sub(
            rhs[static_cast<size_t>(cj.i)], jet_mul(cj.jet, ppc, Ln));
      }

      // Triangular jet solve: J0jet * u = rhs, order by order in the Taylor
      // index using the LU of the value part.
      std::vector<Jet> u(static_cast<size_t>(N), jet_const(cx(0.0), Ln));
      for (int d = 0; d < Ln; ++d) {
        Eigen::VectorXcd r(N);
        for (int i = 0; i < N; ++i) {
          cx s = rhs[static_cast<size_t>(i)][static_cast<size_t>(d)];
          for (int e = 1; e <= d; ++e)
            for (int l = 0; l < N; ++l)
              s -= J0jet[static_cast<size_t>(i)][static_cast<size_t>(l)]
                        [static_cast<size_t>(e)] *
                   u[static_cast<size_t>(l)][static_cast<size_t>(d - e)];
          r(i) = s;
        }
        const Eigen::VectorXcd ud = lu.solve(r);
        for (int i = 0; i < N; ++i)
          u[static_cast<size_t>(i)][static_cast<size_t>(d)] = ud(i);
      }
      for (int i = 0; i < N; ++i) {
        fser[static_cast<size_t>(i)][static_cast<size_t>(n)] = u[static_cast<size_t>(i)];
        sol.jets[static_cast<size_t>(n)][static_cast<size_t>(i)][static_cast<size_t>(jn)] =
            u[static_cast<size_t>(i)];
      }
    }
  }

  // Assemble interpolants from the jet values.
  for (int n = 0; n <= nmax; ++n) {
    std::vector<ChebInterpolant> comps, dcomps;
    for (int i = 0; i < N; ++i) {
      std::vector<cx> vals(static_cast<size_t>(nn)), dvals(static_cast<size_t>(nn));
      for (int j = 0; j < nn; ++j) {
        const Jet& jt = sol.jets[static_cast<size_t>(n)][static_cast<size_t>(i)][static_cast<size_t>(j)];
        vals[static_cast<size_t>(j)] = jt[0];
        dvals[static_cast<size_t>(j)] = jt.size() > 1 ? jt[1] : cx(0.0);
      }
      comps.emplace_back(spec.window_a, spec.window_b, std::move(vals));
      dcomps.emplace_back(spec.window_a, spec.window_b, std::move(dvals));
    }
    sol.f[static_cast<size_t>(n)] = std::move(comps);
    sol.df[static_cast<size_t>(n)] = std::move(dcomps);
  }
  return sol;
}

}  // namespace borelsum
