#include "borelsum/jet.hpp"

#include <algorithm>
#include <cmath>

namespace borelsum {

Jet jet_const(cx v, int L) {
  Jet a(static_cast<size_t>(L), cx(0.0));
  if (L > 0) a[0] = v;
  return a;
}

Jet jet_add(const Jet& a, const Jet& b) {
  Jet c(std::min(a.size(), b.size()));
  for (size_t d = 0; d < c.size(); ++d) c[d] = a[d] + b[d];
  return c;
}

Jet jet_sub(const Jet& a, const Jet& b) {
  Jet c(std::min(a.size(), b.size()));
  for (size_t d = 0; d < c.size(); ++d) c[d] = a[d] - b[d];
  return c;
}

Jet jet_scale(const Jet& a, cx s) {
  Jet c = a;
  for (auto& v : c) v *= s;
  return c;
}

Jet jet_mul(const Jet& a, const Jet& b, int L) {
  Jet c(static_cast<size_t>(L), cx(0.0));
  const int na = static_cast<int>(a.size());
  const int nb = static_cast<int>(b.size());
  for (int i = 0; i < std::min(na, L); ++i) {
    if (a[static_cast<size_t>(i)] == cx(0.0)) continue;
    const int jmax = std::min(nb, L - i);
    for (int j = 0; j < jmax; ++j)
      c[static_cast<size_t>(i + j)] +=
          a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
  }
  return c;
}

Jet jet_div(const Jet& a, const Jet& b, int L) {
  if (b.empty() || std::abs(b[0]) < 1e-300)
    throw evaluation_error("jet division by a series with zero constant term");
  Jet c(static_cast<size_t>(L), cx(0.0));
  for (int d = 0; d < L; ++d) {
    cx s = d < static_cast<int>(a.size()) ? a[static_cast<size_t>(d)] : cx(0.0);
    const int jmax = std::min(d, static_cast<int>(b.size()) - 1);
    for (int j = 1; j <= jmax; ++j)
      s -= b[static_cast<size_t>(j)] * c[static_cast<size_t>(d - j)];
    c[static_cast<size_t>(d)] = s / b[0];
  }
  return c;
}

Jet jet_exp(const Jet& a, int L) {
  Jet e(static_cast<size_t>(L), cx(0.0));
  e[0] = std::exp(a.empty() ? cx(0.0) : a[0]);
  for (int d = 1; d < L; ++d) {
    cx s(0.0);
    const int jmax = std::min(d, static_cast<int>(a.size()) - 1);
    for (int j = 1; j <= jmax; ++j)
      s += static_cast<double>(j) * a[static_cast<size_t>(j)] *
           e[static_cast<size_t>(d - j)];
    e[static_cast<size_t>(d)] = s / static_cast<double>(d);
  }
  return e;
}

Jet jet_log(const Jet& a, int L) {
  if (a.empty() || std::abs(a[0]) < 1e-300)
    throw evaluation_error("jet log of a series with zero constant term");
  Jet l(static_cast<size_t>(L), cx(0.0));
  l[0] = std::log(a[0]);
  for (int d = 1; d < L; ++d) {
    cx s = d < static_cast<int>(a.size())
               ? static_cast<double>(d) * a[static_cast<size_t>(d)]
               : cx(0.0);
    for (int j = 1; j < d; ++j) {
      const cx adj = (d - j) < static_cast<int>(a.size())
                         ? a[static_cast<size_t>(d - j)]
                         : cx(0.0);
      s -= static_cast<double>(j) * l[static_cast<size_t>(j)] * adj;
    }
    l[static_cast<size_t>(d)] = s / (static_cast<double>(d) * a[0]);
  }
  return l;
}

Jet jet_ipow(const Jet& a, int p, int L) {
  Jet r = jet_const(cx(1.0), L);
  const int q = std::abs(p);
  for (int j = 0; j < q; ++j) r = jet_mul(r, a, L);
  if (p < 0) r = jet_div(jet_const(cx(1.0), L), r, L);
  return r;
}

Jet jet_deriv(const Jet& a) {
  if (a.size() <= 1) return Jet{cx(0.0)};
  Jet d(a.size() - 1);
  for (size_t k = 0; k + 1 < a.size(); ++k)
    d[k] = static_cast<double>(k + 1) * a[k + 1];
  return d;
}

cx jet_eval(const Jet& a, cx dx) {
  cx s(0.0);
  for (size_t d = a.size(); d-- > 0;) s = s * dx + a[d];
  return s;
}

Jet jet_power_product_total(const std::vector<std::vector<Jet>>& f,
                            const MultiIndex& m, int s, int L) {
  // DP over the truncated t-series whose entries are jets.
  const int len = s + 1;
  std::vector<Jet> acc(static_cast<size_t>(len), jet_const(cx(0.0), L));
  acc[0] = jet_const(cx(1.0), L);
  auto series_mul = [&](const std::vector<Jet>& a, const std::vector<Jet>& b) {
    std::vector<Jet> c(static_cast<size_t>(len), jet_const(cx(0.0), L));
    const int na = static_cast<int>(a.size());
    const int nb = static_cast<int>(b.size());
    for (int i = 0; i < std::min(na, len); ++i) {
      const int jmax = std::min(nb, len - i);
      for (int j = 0; j < jmax; ++j)
        c[static_cast<size_t>(i + j)] =
            jet_add(c[static_cast<size_t>(i + j)],
                    jet_mul(a[static_cast<size_t>(i)], b[static_cast<size_t>(j)], L));
    }
    return c;
  };
  for (int j = 0; j < m.size(); ++j)
    for (int q = 0; q < m[j]; ++q) acc = series_mul(acc, f[static_cast<size_t>(j)]);
  return acc[static_cast<size_t>(s)];
}

}  // namespace borelsum
