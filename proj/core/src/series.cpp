#include "borelsum/series.hpp"

#include <algorithm>
#include <cmath>

namespace borelsum {

std::vector<cx> poly_mul(const std::vector<cx>& a, const std::vector<cx>& b,
                         int len) {
  std::vector<cx> c(static_cast<size_t>(len), cx(0.0));
  const int na = static_cast<int>(a.size());
  const int nb = static_cast<int>(b.size());
  for (int i = 0; i < std::min(na, len); ++i) {
    if (a[static_cast<size_t>(i)] == cx(0.0)) continue;
    const int jmax = std::min(nb, len - i);
    for (int j = 0; j < jmax; ++j)
      c[static_cast<size_t>(i + j)] +=
          a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
  }
  return c;
}

std::vector<cx> poly_pow(const std::vector<cx>& a, int p, int len) {
  std::vector<cx> r(static_cast<size_t>(len), cx(0.0));
  r[0] = cx(1.0);
  for (int q = 0; q < p; ++q) r = poly_mul(r, a, len);
  return r;
}

cx power_product_coeff(const std::vector<std::vector<cx>>& f,
                       const MultiIndex& m, const MultiIndex& n) {
  cx prod(1.0);
  for (int j = 0; j < m.size(); ++j) {
    const int len = n[j] + 1;
    const auto pw = poly_pow(f[static_cast<size_t>(j)], m[j], len);
    prod *= pw[static_cast<size_t>(n[j])];
    if (prod == cx(0.0)) return prod;
  }
  return prod;
}

cx power_product_total(const std::vector<std::vector<cx>>& f,
                       const MultiIndex& m, int s) {
  const int len = s + 1;
  std::vector<cx> acc(static_cast<size_t>(len), cx(0.0));
  acc[0] = cx(1.0);
  for (int j = 0; j < m.size(); ++j) {
    if (m[j] == 0) continue;
    acc = poly_mul(acc, poly_pow(f[static_cast<size_t>(j)], m[j], len), len);
  }
  return acc[static_cast<size_t>(s)];
}

double power_product_total_real(const std::vector<std::vector<double>>& f,
                                const MultiIndex& m, int s) {
  const int len = s + 1;
  std::vector<double> acc(static_cast<size_t>(len), 0.0);
  acc[0] = 1.0;
  auto mul = [len](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> c(static_cast<size_t>(len), 0.0);
    const int na = static_cast<int>(a.size());
    const int nb = static_cast<int>(b.size());
    for (int i = 0; i < std::min(na, len); ++i) {
      if (a[static_cast<size_t>(i)] == 0.0) continue;
      const int jmax = std::min(nb, len - i);
      for (int j = 0; j < jmax; ++j)
        c[static_cast<size_t>(i + j)] +=
            a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
    }
    return c;
  };
  for (int j = 0; j < m.size(); ++j) {
    for (int q = 0; q < m[j]; ++q) acc = mul(acc, f[static_cast<size_t>(j)]);
  }
  return acc[static_cast<size_t>(s)];
}

std::vector<cx> formal_borel(const std::vector<cx>& hbar_coeffs, cx& leading) {
  leading = hbar_coeffs.empty() ? cx(0.0) : hbar_coeffs[0];
  std::vector<cx> b;
  b.reserve(hbar_coeffs.size());
  for (size_t n = 1; n < hbar_coeffs.size(); ++n)
    b.push_back(hbar_coeffs[n] / factorial(static_cast<int>(n) - 1));
  return b;
}

double reg_lower_gamma(int a, double x) {
  // P(a, x) = 1 - e^{-x} sum_{j=0}^{a-1} x^j / j!  for integer a >= 1.
  // Summed in the stable direction; switch to the series form for small x.
  if (x <= 0.0) return 0.0;
  if (x < static_cast<double>(a)) {
    // Lower series: P(a,x) = x^a e^{-x} / Gamma(a) * sum_{k>=0} x^k /
    // (a(a+1)...(a+k)).
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 10000; ++k) {
      term *= x / (a + k);
      sum += term;
      if (term < sum * 1e-18) break;
    }
    return sum * std::exp(a * std::log(x) - x - std::lgamma(static_cast<double>(a)));
  }
  // Complement form: accumulate e^{-x} x^j / j! in log space to avoid
  // overflow of x^j for large x.
  double sum = 0.0;
  for (int j = 0; j < a; ++j)
    sum += std::exp(j * std::log(x) - x - std::lgamma(static_cast<double>(j) + 1.0));
  return 1.0 - sum;
}

cx laplace_monomial(int n, cx hbar, double Xi) {
  // integral_0^Xi e^{-xi/hbar} xi^n/n! dxi.  For real positive hbar this is
  // hbar^{n+1} P(n+1, Xi/hbar); for complex hbar integrate the recurrence
  //   I_n = hbar ( I_{n-1} - e^{-Xi/hbar} Xi^n / n! ),  I_{-1} := 1 (formal),
  // which follows from integration by parts and is stable downward in
  // magnitude for |Xi/hbar| modest.  We instead sum the closed form
  //   I_n = hbar^{n+1} [ 1 - e^{-Xi/hbar} sum_{j=0}^{n} (Xi/hbar)^j / j! ].
  const cx u = Xi / hbar;
  cx term = cx(1.0);
  cx sum = cx(1.0);
  for (int j = 1; j <= n; ++j) {
    term *= u / static_cast<double>(j);
    sum += term;
  }
  cx hb = cx(1.0);
  for (int j = 0; j <= n; ++j) hb *= hbar;
  const cx tail = std::exp(-u) * sum;
  // When u is large the bracket suffers cancellation only if Re(u) < 0, which
  // the Borel-disc condition excludes; callers pass Re(u) > 0.
  return hb * (cx(1.0) - tail);
}

std::vector<cx> discrete_convolution(const std::vector<cx>& a,
                                     const std::vector<cx>& b, double h) {
  const int n = static_cast<int>(std::min(a.size(), b.size()));
  std::vector<cx> c(static_cast<size_t>(n), cx(0.0));
  for (int k = 1; k < n; ++k) {
    cx s = 0.5 * (a[0] * b[static_cast<size_t>(k)] + a[static_cast<size_t>(k)] * b[0]);
    for (int j = 1; j < k; ++j)
      s += a[static_cast<size_t>(j)] * b[static_cast<size_t>(k - j)];
    c[static_cast<size_t>(k)] = h * s;
  }
  return c;
}

cx discrete_convolution_at(const std::vector<cx>& a, const std::vector<cx>& b,
                           double h, int k) {
  if (k == 0) return cx(0.0);
  cx s = 0.5 * (a[0] * b[static_cast<size_t>(k)] + a[static_cast<size_t>(k)] * b[0]);
  for (int j = 1; j < k; ++j)
    s += a[static_cast<size_t>(j)] * b[static_cast<size_t>(k - j)];
  return h * s;
}

std::vector<cx> divided_power_convolution(const std::vector<cx>& a,
                                          const std::vector<cx>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<cx> c(a.size() + b.size(), cx(0.0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == cx(0.0)) continue;
    for (size_t j = 0; j < b.size(); ++j) c[i + j + 1] += a[i] * b[j];
  }
  return c;
}

cx eval_divided_power(const std::vector<cx>& c, cx xi) {
  cx sum(0.0);
  cx mono(1.0);  // xi^n / n!
  for (size_t n = 0; n < c.size(); ++n) {
    if (n > 0) mono *= xi / static_cast<double>(n);
    sum += c[n] * mono;
  }
  return sum;
}

}  // namespace borelsum
