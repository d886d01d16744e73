#include "borelsum/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "borelsum/series.hpp"

namespace borelsum {

namespace {

/// Trapezoid convolution entry (u * v)(k h) where u is committed through
/// index k-1 and `uk` supplies the (possibly provisional) index-k value.
cx conv_at_ext(const std::vector<cx>& u, cx uk, const std::vector<cx>& v,
               double h, int k) {
  if (k <= 0) return cx(0.0);
  cx s = 0.5 * u[0] * v[static_cast<size_t>(k)] + 0.5 * uk * v[0];
  for (int l = 1; l < k; ++l)
    s += u[static_cast<size_t>(l)] * v[static_cast<size_t>(k - l)];
  return h * s;
}

/// Trapezoid convolution entry with both columns fully valid through k.
cx conv_at_full(const std::vector<cx>& u, const std::vector<cx>& v, double h,
                int k) {
  if (k <= 0) return cx(0.0);
  cx s = 0.5 * u[0] * v[static_cast<size_t>(k)] +
         0.5 * u[static_cast<size_t>(k)] * v[0];
  for (int l = 1; l < k; ++l)
    s += u[static_cast<size_t>(l)] * v[static_cast<size_t>(k - l)];
  return h * s;
}

}  // namespace

cx AData::alpha0_at(int i, int j, double xi) const {
  cx v(0.0);
  double pw = 1.0;  // xi^{k-1}/(k-1)!
  for (size_t k = 0; k < alpha0k[static_cast<size_t>(i)].size(); ++k) {
    v += alpha0k[static_cast<size_t>(i)][k][static_cast<size_t>(j)] * pw;
    pw *= xi / static_cast<double>(k + 1);
  }
  return v;
}

cx AData::alpha_term_at(const Term& t, int j, double xi) {
  cx v(0.0);
  double pw = 1.0;
  for (size_t k = 0; k < t.Ak.size(); ++k) {
    v += t.Ak[k][static_cast<size_t>(j)] * pw;
    pw *= xi / static_cast<double>(k + 1);
  }
  return v;
}

AData assemble_a_data(const StandardFormCoeffs& sf,
                      const std::vector<LiouvilleMap>& maps,
                      const EngineGrid& grid) {
  const int N = sf.N;
  const int J = grid.Jtot;
  AData ad;
  ad.N = N;
  ad.grid = grid;
  ad.a0.assign(static_cast<size_t>(N), std::vector<cx>(static_cast<size_t>(J) + 1, cx(0.0)));
  ad.alpha0k.resize(static_cast<size_t>(N));
  ad.terms.resize(static_cast<size_t>(N));

  for (int i = 0; i < N; ++i) {
    const auto& map = maps[static_cast<size_t>(i)];
    if (grid.z_min < map.z_min - 1e-9 ||
        grid.z_min + J * grid.h > map.z_max + 1e-9)
      throw validation_error(
          "engine grid exceeds the realized window image of a component "
          "coordinate map");
    // Transported x nodes for this component.
    std::vector<cx> xs(static_cast<size_t>(J) + 1);
    for (int j = 0; j <= J; ++j)
      xs[static_cast<size_t>(j)] = map.inverse(cx(grid.z_min + j * grid.h));

    // Bucket the G entries of this component.
    std::map<MultiIndex, std::pair<std::vector<cx>, std::vector<std::vector<cx>>>> bucket;
    int kmax0 = 0;
    for (const auto& [key, interp] : sf.G) {
      if (std::get<0>(key) != i) continue;
      const int k = std::get<1>(key);
      const MultiIndex& m = std::get<2>(key);
      std::vector<cx> col(static_cast<size_t>(J) + 1);
      for (int j = 0; j <= J; ++j)
        col[static_cast<size_t>(j)] = interp.eval(xs[static_cast<size_t>(j)]);
      if (m.degree() == 0) {
        if (k == 0) {
          ad.a0[static_cast<size_t>(i)] = std::move(col);
        } else {
          kmax0 = std::max(kmax0, k);
          auto& ak = ad.alpha0k[static_cast<size_t>(i)];
          if (static_cast<int>(ak.size()) < k)
            ak.resize(static_cast<size_t>(k),
                      std::vector<cx>(static_cast<size_t>(J) + 1, cx(0.0)));
          ak[static_cast<size_t>(k - 1)] = std::move(col);
        }
      } else {
        auto& entry = bucket[m];
        if (k == 0) {
          entry.first = std::move(col);
        } else {
          if (static_cast<int>(entry.second.size()) < k)
            entry.second.resize(static_cast<size_t>(k),
                                std::vector<cx>(static_cast<size_t>(J) + 1, cx(0.0)));
          entry.second[static_cast<size_t>(k - 1)] = std::move(col);
        }
      }
    }
    for (auto& [m, entry] : bucket) {
      AData::Term t;
      t.m = m;
      for (int c = 0; c < m.size(); ++c)
        for (int r = 0; r < m[c]; ++r) t.factors.push_back(c);
      t.a = std::move(entry.first);
      t.Ak = std::move(entry.second);
      ad.terms[static_cast<size_t>(i)].push_back(std::move(t));
    }
  }
  return ad;
}

double BorelField::max_abs() const {
  double m = 0.0;
  for (const auto& comp : sigma)
    for (const auto& col : comp)
      for (const cx& v : col) m = std::max(m, std::abs(v));
  return m;
}

std::vector<std::vector<cx>> integral_operator(
    const std::function<cx(int, int)>& beta, const EngineGrid& grid) {
  const int J = grid.Jtot;
  const double h = grid.h;
  // Cache integrand samples so the callback runs once per node.
  std::vector<std::vector<cx>> b(static_cast<size_t>(J) + 1);
  for (int j = 0; j <= J; ++j) {
    b[static_cast<size_t>(j)].resize(static_cast<size_t>(J - j) + 1);
    for (int k = 0; k <= J - j; ++k)
      b[static_cast<size_t>(j)][static_cast<size_t>(k)] = beta(j, k);
  }
  std::vector<std::vector<cx>> C(static_cast<size_t>(J) + 1);
  for (int j = 0; j <= J; ++j)
    C[static_cast<size_t>(j)].assign(static_cast<size_t>(J - j) + 1, cx(0.0));
  for (int k = 1; k <= J; ++k) {
    for (int j = 0; j <= J - k; ++j) {
      C[static_cast<size_t>(j)][static_cast<size_t>(k)] =
          C[static_cast<size_t>(j + 1)][static_cast<size_t>(k - 1)] +
          0.5 * h * (b[static_cast<size_t>(j + 1)][static_cast<size_t>(k - 1)] +
                     b[static_cast<size_t>(j)][static_cast<size_t>(k)]);
    }
  }
  for (auto& col : C)
    for (auto& v : col) v = -v;
  return C;
}

namespace {

BorelField make_field(const AData& ad) {
  BorelField f;
  f.N = ad.N;
  f.h = ad.grid.h;
  f.z_min = ad.grid.z_min;
  f.Jtot = ad.grid.Jtot;
  f.sigma.resize(static_cast<size_t>(ad.N));
  for (int i = 0; i < ad.N; ++i) {
    f.sigma[static_cast<size_t>(i)].resize(static_cast<size_t>(ad.grid.Jtot) + 1);
    for (int j = 0; j <= ad.grid.Jtot; ++j)
      f.sigma[static_cast<size_t>(i)][static_cast<size_t>(j)].assign(
          static_cast<size_t>(ad.grid.Jtot - j) + 1, cx(0.0));
  }
  return f;
}

/// Precomputed alpha_m samples on the triangle for every term with Ak data.
std::vector<std::vector<std::vector<std::vector<cx>>>> alpha_triangles(
    const AData& ad) {
  const int J = ad.grid.Jtot;
  std::vector<std::vector<std::vector<std::vector<cx>>>> tri(
      static_cast<size_t>(ad.N));
  for (int i = 0; i < ad.N; ++i) {
    tri[static_cast<size_t>(i)].resize(ad.terms[static_cast<size_t>(i)].size());
    for (size_t t = 0; t < ad.terms[static_cast<size_t>(i)].size(); ++t) {
      const auto& term = ad.terms[static_cast<size_t>(i)][t];
      if (term.Ak.empty()) continue;
      auto& cols = tri[static_cast<size_t>(i)][t];
      cols.resize(static_cast<size_t>(J) + 1);
      for (int j = 0; j <= J; ++j) {
        cols[static_cast<size_t>(j)].resize(static_cast<size_t>(J - j) + 1);
        for (int l = 0; l <= J - j; ++l)
          cols[static_cast<size_t>(j)][static_cast<size_t>(l)] =
              AData::alpha_term_at(term, j, l * ad.grid.h);
      }
    }
  }
  return tri;
}

}  // namespace

BorelField volterra_march(const AData& ad, double fp_tol, int fp_max) {
  const int N = ad.N, J = ad.grid.Jtot;
  const double h = ad.grid.h;
  BorelField F = make_field(ad);
  auto alpha_tri = alpha_triangles(ad);

  // Left-fold prefix caches for |m| >= 2 terms: cache[i][t][j][d] holds the
  // committed convolution prefix of depth d+2, filled level by level.
  std::vector<std::vector<std::vector<std::vector<std::vector<cx>>>>> cache(
      static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) {
    cache[static_cast<size_t>(i)].resize(ad.terms[static_cast<size_t>(i)].size());
    for (size_t t = 0; t < ad.terms[static_cast<size_t>(i)].size(); ++t) {
      const int m = static_cast<int>(ad.terms[static_cast<size_t>(i)][t].factors.size());
      if (m < 2) continue;
      auto& per_col = cache[static_cast<size_t>(i)][t];
      per_col.resize(static_cast<size_t>(J) + 1);
      for (int j = 0; j <= J; ++j) {
        per_col[static_cast<size_t>(j)].assign(static_cast<size_t>(m - 1), {});
        for (auto& arr : per_col[static_cast<size_t>(j)]) {
          arr.reserve(static_cast<size_t>(J - j) + 1);
          arr.push_back(cx(0.0));  // all convolutions vanish at xi = 0
        }
      }
    }
  }

  // Provisional depth values at the current level, per (i, t).
  std::vector<std::vector<std::vector<cx>>> pending(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) {
    pending[static_cast<size_t>(i)].resize(ad.terms[static_cast<size_t>(i)].size());
    for (size_t t = 0; t < ad.terms[static_cast<size_t>(i)].size(); ++t)
      pending[static_cast<size_t>(i)][t].resize(
          ad.terms[static_cast<size_t>(i)][t].factors.size());
  }

  // RHS at (j, k) for component i with the current sigma guesses.
  auto rhs_at = [&](int i, int j, int k) -> cx {
    cx val = ad.alpha0_at(i, j, k * h);
    const auto& terms = ad.terms[static_cast<size_t>(i)];
    for (size_t t = 0; t < terms.size(); ++t) {
      const auto& term = terms[t];
      const int m = static_cast<int>(term.factors.size());
      cx foldk;
      const std::vector<cx>* foldcol = nullptr;
      if (m == 1) {
        const auto& col = F.sigma[static_cast<size_t>(term.factors[0])][static_cast<size_t>(j)];
        foldk = col[static_cast<size_t>(k)];
        foldcol = &col;
      } else {
        const auto& c0 = F.sigma[static_cast<size_t>(term.factors[0])][static_cast<size_t>(j)];
        const auto& c1 = F.sigma[static_cast<size_t>(term.factors[1])][static_cast<size_t>(j)];
        cx cur = conv_at_full(c0, c1, h, k);
        pending[static_cast<size_t>(i)][t][0] = cur;
        for (int d = 2; d < m; ++d) {
          const auto& committed =
              cache[static_cast<size_t>(i)][t][static_cast<size_t>(j)][static_cast<size_t>(d - 2)];
          const auto& cd = F.sigma[static_cast<size_t>(term.factors[static_cast<size_t>(d)])][static_cast<size_t>(j)];
          cur = conv_at_ext(committed, cur, cd, h, k);
          pending[static_cast<size_t>(i)][t][static_cast<size_t>(d - 1)] = cur;
        }
        foldk = cur;
        foldcol = &cache[static_cast<size_t>(i)][t][static_cast<size_t>(j)][static_cast<size_t>(m - 2)];
      }
      if (!term.a.empty()) val += term.a[static_cast<size_t>(j)] * foldk;
      if (!term.Ak.empty()) {
        const auto& acol = alpha_tri[static_cast<size_t>(i)][t][static_cast<size_t>(j)];
        // (alpha * fold)(k h): fold committed through k-1 plus provisional.
        if (k > 0) {
          cx s = 0.5 * acol[0] * foldk +
                 0.5 * acol[static_cast<size_t>(k)] * (*foldcol)[0];
          for (int l = 1; l < k; ++l)
            s += acol[static_cast<size_t>(l)] * (*foldcol)[static_cast<size_t>(k - l)];
          val += h * s;
        }
      }
    }
    return val;
  };

  std::vector<std::vector<cx>> rhs_prev(static_cast<size_t>(N)), rhs_cur(static_cast<size_t>(N));
  std::vector<std::vector<cx>> C_prev(static_cast<size_t>(N)), C_cur(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) {
    rhs_prev[static_cast<size_t>(i)].assign(static_cast<size_t>(J) + 1, cx(0.0));
    rhs_cur[static_cast<size_t>(i)].assign(static_cast<size_t>(J) + 1, cx(0.0));
    C_prev[static_cast<size_t>(i)].assign(static_cast<size_t>(J) + 1, cx(0.0));
    C_cur[static_cast<size_t>(i)].assign(static_cast<size_t>(J) + 1, cx(0.0));
  }

  // Level k = 0: sigma(z, 0) = -a0(z); commit RHS there.
  for (int i = 0; i < N; ++i)
    for (int j = 0; j <= J; ++j)
      F.sigma[static_cast<size_t>(i)][static_cast<size_t>(j)][0] =
          -ad.a0[static_cast<size_t>(i)][static_cast<size_t>(j)];
  for (int j = 0; j <= J; ++j)
    for (int i = 0; i < N; ++i) rhs_prev[static_cast<size_t>(i)][static_cast<size_t>(j)] = rhs_at(i, j, 0);

  const double scale0 = 1.0 + F.max_abs();

  for (int k = 1; k <= J; ++k) {
    for (int j = 0; j <= J - k; ++j) {
      // Initial guess: continue the column.
      for (int i = 0; i < N; ++i)
        F.sigma[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)] =
            F.sigma[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k - 1)];
      bool done = false;
      std::vector<cx> rhs_i(static_cast<size_t>(N));
      for (int it = 0; it < fp_max; ++it) {
        double delta = 0.0;
        for (int i = 0; i < N; ++i) rhs_i[static_cast<size_t>(i)] = rhs_at(i, j, k);
        for (int i = 0; i < N; ++i) {
          const cx snew = -ad.a0[static_cast<size_t>(i)][static_cast<size_t>(j + k)] -
                          (C_prev[static_cast<size_t>(i)][static_cast<size_t>(j + 1)] +
                           0.5 * h * (rhs_prev[static_cast<size_t>(i)][static_cast<size_t>(j + 1)] +
                                      rhs_i[static_cast<size_t>(i)]));
          delta = std::max(delta,
                           std::abs(snew - F.sigma[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)]));
          F.sigma[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)] = snew;
        }
        if (delta <= fp_tol * scale0) {
          done = true;
          // One final RHS refresh with the settled values.
          for (int i = 0; i < N; ++i) rhs_i[static_cast<size_t>(i)] = rhs_at(i, j, k);
          break;
        }
      }
      if (!done)
        throw convergence_error(
            "Volterra march: per-level fixed point did not converge");
      for (int i = 0; i < N; ++i) {
        C_cur[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            C_prev[static_cast<size_t>(i)][static_cast<size_t>(j + 1)] +
            0.5 * h * (rhs_prev[static_cast<size_t>(i)][static_cast<size_t>(j + 1)] + rhs_i[static_cast<size_t>(i)]);
        rhs_cur[static_cast<size_t>(i)][static_cast<size_t>(j)] = rhs_i[static_cast<size_t>(i)];
        // Commit the fold prefixes at this level.
        for (size_t t = 0; t < ad.terms[static_cast<size_t>(i)].size(); ++t) {
          const int m = static_cast<int>(ad.terms[static_cast<size_t>(i)][t].factors.size());
          for (int d = 0; d + 2 <= m; ++d)
            cache[static_cast<size_t>(i)][t][static_cast<size_t>(j)][static_cast<size_t>(d)].push_back(
                pending[static_cast<size_t>(i)][t][static_cast<size_t>(d)]);
        }
      }
    }
    std::swap(rhs_prev, rhs_cur);
    std::swap(C_prev, C_cur);
  }
  return F;
}

namespace {

/// Enumerate ordered compositions of s into m nonnegative parts.
void compositions(int s, int m, std::vector<int>& cur,
                  const std::function<void(const std::vector<int>&)>& emit) {
  if (m == 1) {
    cur.push_back(s);
    emit(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= s; ++v) {
    cur.push_back(v);
    compositions(s - v, m - 1, cur, emit);
    cur.pop_back();
  }
}

}  // namespace

SuccessiveResult successive_approximations(const AData& ad, int nmax,
                                           double tol, bool keep_terms) {
  const int N = ad.N, J = ad.grid.Jtot;
  const double h = ad.grid.h;
  SuccessiveResult res;
  res.sum = make_field(ad);
  auto alpha_tri = alpha_triangles(ad);

  // Grade fields sigma_n.
  std::vector<BorelField> grade;
  grade.push_back(make_field(ad));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j <= J; ++j)
      for (int k = 0; k <= J - j; ++k)
        grade[0].sigma[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)] =
            -ad.a0[static_cast<size_t>(i)][static_cast<size_t>(j + k)];

  // Left-fold memo per column: key encodes the (component, grade) factor
  // list; value is the convolution column.
  std::vector<std::map<std::vector<int>, std::vector<cx>>> memo(
      static_cast<size_t>(J) + 1);
  auto sig_col = [&](int comp, int g, int j) -> const std::vector<cx>& {
    return grade[static_cast<size_t>(g)].sigma[static_cast<size_t>(comp)][static_cast<size_t>(j)];
  };
  std::function<const std::vector<cx>&(int, const std::vector<int>&)> fold_col =
      [&](int j, const std::vector<int>& key) -> const std::vector<cx>& {
    // key entries: comp * 8192 + grade; length >= 2 here.
    auto it = memo[static_cast<size_t>(j)].find(key);
    if (it != memo[static_cast<size_t>(j)].end()) return it->second;
    const int last = key.back();
    const std::vector<cx>* prev;
    if (key.size() == 2) {
      prev = &sig_col(key[0] / 8192, key[0] % 8192, j);
    } else {
      std::vector<int> head(key.begin(), key.end() - 1);
      prev = &fold_col(j, head);
    }
    std::vector<cx> out =
        discrete_convolution(*prev, sig_col(last / 8192, last % 8192, j), h);
    return memo[static_cast<size_t>(j)].emplace(key, std::move(out)).first->second;
  };

  // Accumulate sigma_0.
  auto add_into = [&](BorelField& dst, const BorelField& src) {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j <= J; ++j)
        for (int k = 0; k <= J - j; ++k)
          dst.sigma[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)] +=
              src.sigma[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)];
  };
  add_into(res.sum, grade[0]);
  res.term_sup.push_back(grade[0].max_abs());
  if (keep_terms) res.terms.push_back(grade[0]);
  res.n_used = 0;

  std::vector<int> comp_buf;
  EngineGrid grid = ad.grid;

  for (int n = 1; n <= nmax; ++n) {
    // T^m_s columns for this n, per (i, t): sums of fold columns over all
    // compositions of s.
    BorelField sn = make_field(ad);
    for (int i = 0; i < N; ++i) {
      // Integrand beta for component i on the triangle.
      std::vector<std::vector<cx>> beta(static_cast<size_t>(J) + 1);
      for (int j = 0; j <= J; ++j)
        beta[static_cast<size_t>(j)].assign(static_cast<size_t>(J - j) + 1, cx(0.0));

      if (n == 1) {
        for (int j = 0; j <= J; ++j)
          for (int k = 0; k <= J - j; ++k)
            beta[static_cast<size_t>(j)][static_cast<size_t>(k)] = ad.alpha0_at(i, j, k * h);
      }
      const auto& terms = ad.terms[static_cast<size_t>(i)];
      for (size_t t = 0; t < terms.size(); ++t) {
        const auto& term = terms[t];
        const int m = static_cast<int>(term.factors.size());
        if (m > n) continue;
        for (int j = 0; j <= J; ++j) {
          const int len = J - j + 1;
          // a-part needs T^m_{n-m}; alpha-part needs T^m_{n-m-1}.
          for (int which = 0; which < 2; ++which) {
            const int s = n - m - which;
            if (s < 0) continue;
            if (which == 0 && term.a.empty()) continue;
            if (which == 1 && term.Ak.empty()) continue;
            std::vector<cx> T(static_cast<size_t>(len), cx(0.0));
            comp_buf.clear();
            compositions(s, m, comp_buf, [&](const std::vector<int>& parts) {
              if (m == 1) {
                const auto& col = sig_col(term.factors[0], parts[0], j);
                for (int k = 0; k < len; ++k) T[static_cast<size_t>(k)] += col[static_cast<size_t>(k)];
              } else {
                std::vector<int> key(static_cast<size_t>(m));
                for (int q = 0; q < m; ++q)
                  key[static_cast<size_t>(q)] =
                      term.factors[static_cast<size_t>(q)] * 8192 + parts[static_cast<size_t>(q)];
                const auto& col = fold_col(j, key);
                for (int k = 0; k < len; ++k) T[static_cast<size_t>(k)] += col[static_cast<size_t>(k)];
              }
            });
            if (which == 0) {
              const cx aj = term.a[static_cast<size_t>(j)];
              for (int k = 0; k < len; ++k)
                beta[static_cast<size_t>(j)][static_cast<size_t>(k)] += aj * T[static_cast<size_t>(k)];
            } else {
              const auto& acol = alpha_tri[static_cast<size_t>(i)][t][static_cast<size_t>(j)];
              auto conv = discrete_convolution(acol, T, h);
              for (int k = 0; k < len; ++k)
                beta[static_cast<size_t>(j)][static_cast<size_t>(k)] += conv[static_cast<size_t>(k)];
            }
          }
        }
      }
      auto I = integral_operator(
          [&](int j, int k) { return beta[static_cast<size_t>(j)][static_cast<size_t>(k)]; }, grid);
      sn.sigma[static_cast<size_t>(i)] = std::move(I);
    }

    add_into(res.sum, sn);
    const double sup = sn.max_abs();
    res.term_sup.push_back(sup);
    grade.push_back(std::move(sn));
    if (keep_terms) res.terms.push_back(grade.back());
    res.n_used = n;

    const double prev = res.term_sup[static_cast<size_t>(n - 1)];
    if (sup == 0.0) {
      res.converged = true;
      break;
    }
    if (prev > 0.0) {
      const double r = sup / prev;
      if (r < 0.9 && sup * r / (1.0 - r) < tol) {
        res.converged = true;
        break;
      }
    }
  }
  return res;
}

GrowthFit fit_growth(const BorelField& f) {
  const int J = f.Jtot;
  std::vector<double> S(static_cast<size_t>(J) + 1, 0.0);
  for (int i = 0; i < f.N; ++i)
    for (int j = 0; j <= J; ++j)
      for (int k = 0; k <= J - j; ++k)
        S[static_cast<size_t>(k)] = std::max(
            S[static_cast<size_t>(k)],
            std::abs(f.sigma[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)]));
  // Least-squares slope of log S against xi, clamped nonnegative, then D
  // adjusted so the envelope holds on every sample.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int k = 0; k <= J; ++k) {
    if (S[static_cast<size_t>(k)] <= 1e-300) continue;
    const double x = k * f.h, y = std::log(S[static_cast<size_t>(k)]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  GrowthFit fit;
  if (cnt < 2) {
    fit.K = 0.0;
    fit.D = *std::max_element(S.begin(), S.end());
    return fit;
  }
  const double denom = cnt * sxx - sx * sx;
  fit.K = denom > 0.0 ? std::max(0.0, (cnt * sxy - sx * sy) / denom) : 0.0;
  fit.D = 0.0;
  for (int k = 0; k <= J; ++k)
    fit.D = std::max(fit.D, S[static_cast<size_t>(k)] * std::exp(-fit.K * k * f.h));
  return fit;
}

double field_max_diff(const BorelField& a, const BorelField& b) {
  double m = 0.0;
  const int J = std::min(a.Jtot, b.Jtot);
  for (int i = 0; i < a.N; ++i)
    for (int j = 0; j <= J; ++j)
      for (int k = 0; k <= J - j; ++k)
        m = std::max(m, std::abs(a.at(i, j, k) - b.at(i, j, k)));
  return m;
}

BoundConstants borel_bound_constants(const AData& ad) {
  BoundConstants bc;
  bc.L = 1.0;
  auto sup = [](const std::vector<cx>& col) {
    double m = 0.0;
    for (const cx& v : col) m = std::max(m, std::abs(v));
    return m;
  };
  double C = 0.0;
  for (int i = 0; i < ad.N; ++i) {
    double c = sup(ad.a0[static_cast<size_t>(i)]);
    double asum = 0.0;
    for (const auto& col : ad.alpha0k[static_cast<size_t>(i)]) asum += sup(col);
    C = std::max(C, std::max(c, asum));
  }
  if (C <= 0.0) C = 1e-300;
  double B = 1e-6;
  for (int i = 0; i < ad.N; ++i) {
    for (const auto& term : ad.terms[static_cast<size_t>(i)]) {
      const int m = term.m.degree();
      double c = term.a.empty() ? 0.0 : sup(term.a);
      double asum = 0.0;
      for (const auto& col : term.Ak) asum += sup(col);
      c = std::max(c, asum);
      if (c <= 0.0) continue;
      const double need = std::pow(c / (rho_norm(m, ad.N) * C), 1.0 / m);
      B = std::max(B, need);
    }
  }
  bc.B = B;
  bc.C = C;
  return bc;
}

}  // namespace borelsum
