#include "borelsum/multi_index.hpp"

#include <stdexcept>

namespace borelsum {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * static_cast<double>(n - k + j) / j;
  return r;
}

double factorial(int n) {
  static const std::vector<double> table = [] {
    std::vector<double> t(171);
    t[0] = 1.0;
    for (int j = 1; j <= 170; ++j) t[static_cast<size_t>(j)] = t[static_cast<size_t>(j - 1)] * j;
    return t;
  }();
  if (n < 0 || n > 170) throw std::out_of_range("factorial: n out of range");
  return table[static_cast<size_t>(n)];
}

static void enumerate_rec(int N, int m, std::vector<int>& tail,
                          std::vector<MultiIndex>& out) {
  if (N == 1) {
    MultiIndex mi;
    mi.e.reserve(1 + tail.size());
    mi.e.push_back(m);
    for (auto it = tail.rbegin(); it != tail.rend(); ++it) mi.e.push_back(*it);
    out.push_back(std::move(mi));
    return;
  }
  // Colex: last entry varies slowest, ascending.
  for (int last = 0; last <= m; ++last) {
    tail.push_back(last);
    enumerate_rec(N - 1, m - last, tail, out);
    tail.pop_back();
  }
}

std::vector<MultiIndex> enumerate_multi_indices(int N, int m) {
  if (N < 1) throw std::invalid_argument("enumerate_multi_indices: N must be >= 1");
  if (m < 0) throw std::invalid_argument("enumerate_multi_indices: m must be >= 0");
  std::vector<MultiIndex> out;
  out.reserve(static_cast<size_t>(binomial(m + N - 1, N - 1)));
  std::vector<int> tail;
  enumerate_rec(N, m, tail, out);
  return out;
}

double rho_norm(int m, int N) { return 1.0 / binomial(m + N - 1, N - 1); }

}  // namespace borelsum
