#include "borelsum/cheb.hpp"

#include <cmath>

namespace borelsum {

ChebInterpolant::ChebInterpolant(cx a, cx b, int degree,
                                 const std::function<cx(cx)>& fn)
    : a_(a), b_(b) {
  if (degree < 1) throw validation_error("interpolant degree must be >= 1");
  values_.resize(static_cast<size_t>(degree) + 1);
  const cx m = mid(), hf = half();
  for (int j = 0; j <= degree; ++j) {
    const double s = std::cos(pi_const * j / degree);
    values_[static_cast<size_t>(j)] = fn(m + hf * s);
  }
}

ChebInterpolant::ChebInterpolant(cx a, cx b, std::vector<cx> node_values)
    : a_(a), b_(b), values_(std::move(node_values)) {
  if (values_.size() < 2) throw validation_error("need at least 2 node values");
}

std::vector<cx> ChebInterpolant::nodes() const {
  const int n = degree();
  std::vector<cx> xs(static_cast<size_t>(n) + 1);
  for (int j = 0; j <= n; ++j)
    xs[static_cast<size_t>(j)] = mid() + half() * std::cos(pi_const * j / n);
  return xs;
}

cx ChebInterpolant::eval(cx x) const {
  const int n = degree();
  const cx s = (x - mid()) / half();
  cx num(0.0), den(0.0);
  for (int j = 0; j <= n; ++j) {
    const cx sj = std::cos(pi_const * j / n);
    const cx d = s - sj;
    if (std::abs(d) < 1e-14) return values_[static_cast<size_t>(j)];
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == n) w *= 0.5;
    const cx t = w / d;
    num += t * values_[static_cast<size_t>(j)];
    den += t;
  }
  return num / den;
}

const std::vector<cx>& ChebInterpolant::coefficients() const {
  if (!coeffs_.empty()) return coeffs_;
  const int n = degree();
  coeffs_.assign(static_cast<size_t>(n) + 1, cx(0.0));
  // Naive cosine transform, O(n^2); n <= a few hundred here.
  for (int k = 0; k <= n; ++k) {
    cx s = 0.5 * (values_[0] +
                  (k % 2 == 0 ? values_[static_cast<size_t>(n)]
                              : -values_[static_cast<size_t>(n)]));
    for (int j = 1; j < n; ++j)
      s += values_[static_cast<size_t>(j)] * std::cos(pi_const * k * j / n);
    cx c = s * (2.0 / n);
    if (k == 0 || k == n) c *= 0.5;
    coeffs_[static_cast<size_t>(k)] = c;
  }
  return coeffs_;
}

std::vector<cx> ChebInterpolant::values_from_coeffs(const std::vector<cx>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<cx> v(static_cast<size_t>(n) + 1, cx(0.0));
  for (int j = 0; j <= n; ++j) {
    cx s(0.0);
    for (int k = 0; k <= n; ++k)
      s += c[static_cast<size_t>(k)] * std::cos(pi_const * k * j / n);
    v[static_cast<size_t>(j)] = s;
  }
  return v;
}

ChebInterpolant ChebInterpolant::derivative() const {
  const int n = degree();
  const auto& c = coefficients();
  std::vector<cx> b(static_cast<size_t>(n) + 1, cx(0.0));
  // b_{k-1} = b_{k+1} + 2k c_k, descending; then halve b_0.
  for (int k = n; k >= 1; --k) {
    const cx bk1 = (k + 1 <= n) ? b[static_cast<size_t>(k + 1)] : cx(0.0);
    b[static_cast<size_t>(k - 1)] = bk1 + 2.0 * k * c[static_cast<size_t>(k)];
  }
  b[0] *= 0.5;
  // Keep the original degree (top coefficient zero) so the derivative lives
  // on the same node grid; recursions can then reuse node values directly.
  const cx scale = cx(1.0) / half();
  for (auto& v : b) v *= scale;
  ChebInterpolant d(a_, b_, values_from_coeffs(b));
  d.coeffs_ = std::move(b);
  return d;
}

ChebInterpolant ChebInterpolant::antiderivative(cx x0) const {
  const int n = degree();
  const auto& c = coefficients();
  auto cat = [&](int k) -> cx {
    return (k >= 0 && k <= n) ? c[static_cast<size_t>(k)] : cx(0.0);
  };
  std::vector<cx> A(static_cast<size_t>(n) + 2, cx(0.0));
  for (int k = 1; k <= n + 1; ++k) {
    cx lower = cat(k - 1);
    if (k == 1) lower *= 2.0;  // integral of T_0 is T_1, not T_1/2
    A[static_cast<size_t>(k)] = (lower - cat(k + 1)) / (2.0 * k) * half();
  }
  ChebInterpolant P(a_, b_, values_from_coeffs(A));
  P.coeffs_ = std::move(A);
  const cx offset = P.eval(x0);
  for (auto& v : P.values_) v -= offset;
  P.coeffs_[0] -= offset;
  return P;
}

double ChebInterpolant::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace borelsum
