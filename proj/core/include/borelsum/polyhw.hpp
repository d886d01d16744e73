#pragma once

#include <map>
#include <vector>

#include "borelsum/multi_index.hpp"
#include "borelsum/types.hpp"

namespace borelsum {

/// Sparse polynomial in (hbar, w_1, ..., w_N) with complex coefficients,
/// truncated at a fixed hbar order.  Keys are (hbar power k, w multi-index m).
/// Used pointwise (at one x node) when rewriting a problem in its prepared
/// normal form, where all substitutions are polynomial so the result is
/// finite without further truncation in w.
class PolyHW {
 public:
  using Key = std::pair<int, MultiIndex>;

  PolyHW() = default;
  explicit PolyHW(int hbar_trunc) : trunc_(hbar_trunc) {}

  int hbar_trunc() const { return trunc_; }
  bool empty() const { return terms_.empty(); }
  const std::map<Key, cx>& terms() const { return terms_; }

  /// Coefficient of hbar^k w^m (zero if absent).
  cx coeff(int k, const MultiIndex& m) const;

  /// Add c * hbar^k w^m; drops terms with k > trunc or |c| below 1e-300.
  void add_term(int k, const MultiIndex& m, cx c);

  static PolyHW constant(cx c, int N, int hbar_trunc);
  /// The monomial hbar^k w^m.
  static PolyHW monomial(int k, const MultiIndex& m, cx c, int hbar_trunc);

  PolyHW operator+(const PolyHW& o) const;
  PolyHW operator-(const PolyHW& o) const;
  PolyHW operator*(const PolyHW& o) const;
  PolyHW& operator+=(const PolyHW& o);
  PolyHW operator*(cx s) const;

  /// Integer power by repeated multiplication.
  PolyHW pow(int p) const;

  /// Substitute w_i := subs[i], each a PolyHW in (hbar, w).  Requires every
  /// subs[i] to share this polynomial's truncation order.
  PolyHW substitute_w(const std::vector<PolyHW>& subs) const;

  /// Divide by hbar^p; throws consistency_error if any surviving term has
  /// hbar power below p (tolerance `tol` on the offending coefficients).
  PolyHW shift_down(int p, double tol) const;

  /// Max |coefficient| among terms with hbar power exactly k.
  double max_abs_at_order(int k) const;

 private:
  int trunc_ = 0;
  std::map<Key, cx> terms_;
};

}  // namespace borelsum
