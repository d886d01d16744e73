#pragma once

#include <functional>
#include <vector>

#include "borelsum/types.hpp"

namespace borelsum {

/// Polynomial interpolant on Chebyshev-Lobatto points of a complex segment
/// [a, b].  Nodes are x_j = mid + half * cos(j pi / n), j = 0..n, so x_0 = b
/// and x_n = a.  Evaluation uses the barycentric formula (stable on and near
/// the segment); differentiation and antidifferentiation act on Chebyshev
/// coefficients.
class ChebInterpolant {
 public:
  ChebInterpolant() = default;
  ChebInterpolant(cx a, cx b, int degree, const std::function<cx(cx)>& fn);
  /// From precomputed node values (values[j] at x_j as above).
  ChebInterpolant(cx a, cx b, std::vector<cx> node_values);

  int degree() const { return static_cast<int>(values_.size()) - 1; }
  cx a() const { return a_; }
  cx b() const { return b_; }
  const std::vector<cx>& node_values() const { return values_; }
  std::vector<cx> nodes() const;

  cx eval(cx x) const;
  cx operator()(cx x) const { return eval(x); }

  /// Chebyshev coefficients c_k with p(x) = sum c_k T_k(s), s the affine
  /// pullback of x to [-1, 1].
  const std::vector<cx>& coefficients() const;

  /// d/dx of the interpolant (degree drops by one).
  ChebInterpolant derivative() const;

  /// Antiderivative vanishing at x0 (x0 should lie on the segment).
  ChebInterpolant antiderivative(cx x0) const;

  /// Max |value| over the nodes (cheap norm proxy).
  double max_abs() const;

 private:
  cx a_{}, b_{};
  std::vector<cx> values_;
  mutable std::vector<cx> coeffs_;  // lazy

  cx mid() const { return 0.5 * (a_ + b_); }
  cx half() const { return 0.5 * (b_ - a_); }
  static std::vector<cx> values_from_coeffs(const std::vector<cx>& c);
};

}  // namespace borelsum
