#include "borelsum/polyhw.hpp"

#include <cmath>

namespace borelsum {

cx PolyHW::coeff(int k, const MultiIndex& m) const {
  auto it = terms_.find({k, m});
  return it == terms_.end() ? cx(0.0) : it->second;
}

void PolyHW::add_term(int k, const MultiIndex& m, cx c) {
  if (k > trunc_) return;
  auto [it, inserted] = terms_.try_emplace({k, m}, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < 1e-300) terms_.erase(it);
}

PolyHW PolyHW::constant(cx c, int N, int hbar_trunc) {
  PolyHW p(hbar_trunc);
  p.add_term(0, MultiIndex(std::vector<int>(static_cast<size_t>(N), 0)), c);
  return p;
}

PolyHW PolyHW::monomial(int k, const MultiIndex& m, cx c, int hbar_trunc) {
  PolyHW p(hbar_trunc);
  p.add_term(k, m, c);
  return p;
}

PolyHW PolyHW::operator+(const PolyHW& o) const {
  PolyHW r = *this;
  r += o;
  return r;
}

PolyHW& PolyHW::operator+=(const PolyHW& o) {
  for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, c);
  return *this;
}

PolyHW PolyHW::operator-(const PolyHW& o) const {
  PolyHW r = *this;
  for (const auto& [key, c] : o.terms_) r.add_term(key.first, key.second, -c);
  return r;
}

PolyHW PolyHW::operator*(const PolyHW& o) const {
  PolyHW r(trunc_);
  for (const auto& [ka, ca] : terms_) {
    for (const auto& [kb, cb] : o.terms_) {
      const int k = ka.first + kb.first;
      if (k > trunc_) continue;
      MultiIndex m = ka.second;
      for (int j = 0; j < m.size(); ++j) m[j] += kb.second[j];
      r.add_term(k, m, ca * cb);
    }
  }
  return r;
}

PolyHW PolyHW::operator*(cx s) const {
  PolyHW r(trunc_);
  for (const auto& [key, c] : terms_) r.add_term(key.first, key.second, c * s);
  return r;
}

PolyHW PolyHW::pow(int p) const {
  PolyHW r(trunc_);
  // Empty multi-index size: take from any existing term; a bare constant 1
  // needs N, so require a term to infer it.
  if (terms_.empty()) return r;  // 0^p = 0 for p >= 1; p = 0 handled below
  const int N = terms_.begin()->first.second.size();
  r = constant(cx(1.0), N, trunc_);
  for (int q = 0; q < p; ++q) r = r * (*this);
  return r;
}

PolyHW PolyHW::substitute_w(const std::vector<PolyHW>& subs) const {
  PolyHW r(trunc_);
  const int N = static_cast<int>(subs.size());
  for (const auto& [key, c] : terms_) {
    PolyHW term = PolyHW::monomial(
        key.first, MultiIndex(std::vector<int>(static_cast<size_t>(N), 0)), c,
        trunc_);
    for (int j = 0; j < key.second.size(); ++j)
      for (int q = 0; q < key.second[j]; ++q)
        term = term * subs[static_cast<size_t>(j)];
    r += term;
  }
  return r;
}

PolyHW PolyHW::shift_down(int p, double tol) const {
  PolyHW r(trunc_ - p);
  for (const auto& [key, c] : terms_) {
    if (key.first < p) {
      if (std::abs(c) > tol)
        throw consistency_error(
            "shift_down: nonzero coefficient below the divided hbar order; "
            "low-order cancellation failed");
      continue;
    }
    r.add_term(key.first - p, key.second, c);
  }
  return r;
}

double PolyHW::max_abs_at_order(int k) const {
  double m = 0.0;
  for (const auto& [key, c] : terms_)
    if (key.first == k) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace borelsum
