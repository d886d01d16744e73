#include <cmath>
#include <map>

#include "borelsum/formal.hpp"
#include "borelsum/problem.hpp"
#include "borelsum/series.hpp"
#include "doctest.h"

using namespace borelsum;

namespace {

const char* kLinearProblem = R"(
[system]
N = 1
K = 0
ydeg = 1
[coefficients]
1,0,1 = 1
1,0,0 = -1/x
[basepoint]
x0 = 1
y0 = 1
[window]
a = 1
b = 2
)";

const char* kRiccatiProblem = R"(
[system]
N = 1
K = 1
ydeg = 2
[coefficients]
1,0,1 = 1
1,0,0 = -1/x
1,1,2 = 1
[basepoint]
x0 = 1
y0 = 1
[window]
a = 1
b = 2
)";

/// Riccati formal-series oracle: hbar f' = f - g + hbar f^2 with g = 1/x
/// gives f_0 = g and f_n = f_{n-1}' - sum_{i+j=n-1} f_i f_j for n >= 1.
/// Evaluated with exact rational derivatives of powers of 1/x.
struct RationalPoly {
  // sum over d of c_d x^{-d}
  std::map<int, double> c;
  RationalPoly deriv() const {
    RationalPoly r;
    for (auto& [d, v] : c)
      if (d != 0) r.c[d + 1] += -d * v;
    return r;
  }
  RationalPoly operator*(const RationalPoly& o) const {
    RationalPoly r;
    for (auto& [d1, v1] : c)
      for (auto& [d2, v2] : o.c) r.c[d1 + d2] += v1 * v2;
    return r;
  }
  RationalPoly& operator-=(const RationalPoly& o) {
    for (auto& [d, v] : o.c) c[d] -= v;
    return *this;
  }
  double eval(double x) const {
    double s = 0.0;
    for (auto& [d, v] : c) s += v * std::pow(x, -d);
    return s;
  }
};

std::vector<RationalPoly> riccati_series(int nmax) {
  std::vector<RationalPoly> f(static_cast<size_t>(nmax) + 1);
  f[0].c[1] = 1.0;  // 1/x
  for (int n = 1; n <= nmax; ++n) {
    RationalPoly fn = f[static_cast<size_t>(n - 1)].deriv();
    for (int i = 0; i + 1 <= n; ++i) {
      const int j = n - 1 - i;
      fn -= f[static_cast<size_t>(i)] * f[static_cast<size_t>(j)];
    }
    f[static_cast<size_t>(n)] = fn;
  }
  return f;
}

}  // namespace

TEST_CASE("formal solver: linear oracle f_n = (-1)^n n! x^{-n-1}") {
  auto spec = parse_problem_text(kLinearProblem);
  auto sol = solve_formal(spec, 12);
  for (int n = 0; n <= 12; ++n) {
    for (double x : {1.0, 1.25, 1.5, 1.75, 2.0}) {
      const double expect =
          ((n % 2) ? -1.0 : 1.0) * factorial(n) * std::pow(x, -n - 1.0);
      const cx got = sol.eval(n, 0, cx(x));
      CHECK(std::abs(got - cx(expect)) <= 1e-10 * std::abs(expect));
    }
  }
}

TEST_CASE("formal solver: Riccati against the symbolic recursion oracle") {
  auto spec = parse_problem_text(kRiccatiProblem);
  auto sol = solve_formal(spec, 6);
  auto oracle = riccati_series(6);
  // Spot check the oracle itself: f_1 = g' - g^2 = -1/x^2 - 1/x^2 = -2/x^2?
  // g' = -1/x^2 and -g^2 = -1/x^2, so f_1 = -2/x^2 at x=1 -> -2.
  CHECK(oracle[1].eval(1.0) == doctest::Approx(-2.0));
  for (int n = 0; n <= 6; ++n) {
    for (double x : {1.0, 1.2, 1.5, 1.8, 2.0}) {
      const double expect = oracle[static_cast<size_t>(n)].eval(x);
      const cx got = sol.eval(n, 0, cx(x));
      CHECK(std::abs(got - cx(expect)) <=
            1e-9 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST_CASE("formal solver satisfies the equation order by order") {
  // Substitute the truncated series back: coefficient of hbar^n in
  // F(x, hbar, f) minus f_{n-1}' should vanish for n <= nmax.
  auto spec = parse_problem_text(kRiccatiProblem);
  const int nmax = 8;
  auto sol = solve_formal(spec, nmax);
  for (double x : {1.1, 1.5, 1.9}) {
    // Assemble series coefficients at x.
    std::vector<std::vector<cx>> fs = {sol.coeffs_at(0, cx(x))};
    for (int n = 0; n <= nmax - 1; ++n) {
      // RHS coefficient of hbar^n.
      cx rhs(0.0);
      for (const auto& [key, fn] : spec.coeffs) {
        const auto& [i, k, m] = key;
        if (k > n) continue;
        rhs += fn->eval(cx(x)) * power_product_total(fs, m, n - k);
      }
      // LHS coefficient: f_{n-1}' (zero for n = 0).
      cx lhs(0.0);
      if (n >= 1) {
        lhs = sol.f[static_cast<size_t>(n - 1)][0].derivative().eval(cx(x));
      }
      CHECK(std::abs(rhs - lhs) < 1e-7 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("formal solver: degenerate Jacobian is rejected") {
  const char* degenerate = R"(
[system]
N = 1
K = 0
ydeg = 2
[coefficients]
1,0,2 = 1
[basepoint]
x0 = 0
y0 = 0
[window]
a = 0
b = 1
)";
  auto spec = parse_problem_text(degenerate);
  CHECK_THROWS(solve_formal(spec, 3));
}

TEST_CASE("formal solver: two-component decoupled system") {
  // F1 = y1 - 1/x, F2 = 2 y2 - 2 x^-2: component 2 solves the same kind of
  // linear problem with g = x^-2 and an invertible scaling.
  const char* sys = R"(
[system]
N = 2
K = 0
ydeg = 1
[coefficients]
1,0,1,0 = 1
1,0,0,0 = -1/x
2,0,0,1 = 2
2,0,0,0 = -2*x^-2
[basepoint]
x0 = 1
y0 = 1, 1
[window]
a = 1
b = 2
)";
  auto spec = parse_problem_text(sys);
  auto sol = solve_formal(spec, 5);
  // Component 1: hbar y1' = y1 - 1/x gives f_n = g^{(n)} with g = 1/x.
  // Component 2: hbar y2' = 2 y2 - 2 x^-2 gives f_n = f_{n-1}'/2, i.e.
  // f_n = g^{(n)} / 2^n with g = x^-2.
  auto dpow = [](double x, int base_pow, int n) {
    // d^n/dx^n x^{-base_pow}
    double c = 1.0;
    for (int j = 0; j < n; ++j) c *= -(base_pow + j);
    return c * std::pow(x, -base_pow - n);
  };
  for (int n = 0; n <= 5; ++n) {
    for (double x : {1.0, 1.5, 2.0}) {
      CHECK(std::abs(sol.eval(n, 0, cx(x)) - cx(dpow(x, 1, n))) <
            1e-9 * std::max(1.0, std::abs(dpow(x, 1, n))));
      const double expect2 = dpow(x, 2, n) / std::pow(2.0, n);
      CHECK(std::abs(sol.eval(n, 1, cx(x)) - cx(expect2)) <
            1e-8 * std::max(1.0, std::abs(expect2)));
    }
  }
}
