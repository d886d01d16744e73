#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace borelsum {

/// Vector of nonnegative integer exponents (m_1, ..., m_N).
struct MultiIndex {
  std::vector<int> e;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries) : e(std::move(entries)) {}
  MultiIndex(std::initializer_list<int> entries) : e(entries) {}

  int size() const { return static_cast<int>(e.size()); }
  int operator[](int j) const { return e[static_cast<size_t>(j)]; }
  int& operator[](int j) { return e[static_cast<size_t>(j)]; }

  int degree() const {
    int d = 0;
    for (int v : e) d += v;
    return d;
  }

  auto operator<=>(const MultiIndex&) const = default;
};

/// binom(n, k) in double; exact for everything desk scale.
double binomial(int n, int k);

/// n! as a double (n <= 170).
double factorial(int n);

/// All multi-indices of length N with degree m, in colexicographic order:
/// indices are sorted by the last entry first, ascending.  For (N=2, m=1)
/// this gives (1,0), (0,1).  The count is binom(m+N-1, N-1).
std::vector<MultiIndex> enumerate_multi_indices(int N, int m);

/// Normalisation constant 1 / binom(m+N-1, N-1), the reciprocal of the
/// number of multi-indices of length N and degree m.
double rho_norm(int m, int N);

}  // namespace borelsum
