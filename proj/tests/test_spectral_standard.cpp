#include <cmath>
#include <random>

#include "borelsum/formal.hpp"
#include "borelsum/liouville.hpp"
#include "borelsum/problem.hpp"
#include "borelsum/spectral.hpp"
#include "borelsum/standard_form.hpp"
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

// Upper-triangular constant J0 = [[2,1],[0,3]]:
//   F1 = 2 y1 + y2 - 3/x,  F2 = 3 y2 - 3/x;  f0 = (1/x, 1/x).
const char* kTriangular = R"(
[system]
N = 2
K = 0
ydeg = 1
[coefficients]
1,0,1,0 = 2
1,0,0,1 = 1
1,0,0,0 = -3/x
2,0,0,1 = 3
2,0,0,0 = -3/x
[basepoint]
x0 = 1
y0 = 1, 1
[window]
a = 1
b = 2
)";

}  // namespace

TEST_CASE("diagonalize_field: scalar case is trivial") {
  auto spec = parse_problem_text(kLinearProblem);
  auto sol = solve_formal(spec, 2);
  auto sd = diagonalize_field(spec, sol);
  CHECK(sd.N == 1);
  for (double x : {1.0, 1.3, 1.9}) {
    CHECK(std::abs(sd.phi[0].eval(cx(x)) - cx(1.0)) < 1e-12);
    CHECK(std::abs(sd.P0[0][0].eval(cx(x)) - cx(1.0)) < 1e-12);
    CHECK(std::abs(sd.dP0inv[0][0].eval(cx(x))) < 1e-10);
  }
}

TEST_CASE("diagonalize_field: constant 2x2 upper-triangular field") {
  auto spec = parse_problem_text(kTriangular);
  auto sol = solve_formal(spec, 2);
  auto sd = diagonalize_field(spec, sol);
  REQUIRE(sd.N == 2);
  // Characteristic roots of [[2,1],[0,3]] are 2 and 3 (sorted at the first
  // node by real part and tracked along the window).
  for (double x : {1.0, 1.4, 2.0}) {
    CHECK(std::abs(sd.phi[0].eval(cx(x)) - cx(2.0)) < 1e-10);
    CHECK(std::abs(sd.phi[1].eval(cx(x)) - cx(3.0)) < 1e-10);
  }
  CHECK(sd.min_gap == doctest::Approx(1.0));

  // Similarity invariant at arbitrary points, not just nodes.
  for (double x : {1.05, 1.55, 1.95}) {
    Eigen::MatrixXcd J(2, 2);
    J << cx(2.0), cx(1.0), cx(0.0), cx(3.0);
    Eigen::MatrixXcd K = sd.P0_at(cx(x)) * J * sd.P0inv_at(cx(x));
    CHECK(std::abs(K(0, 0) - cx(2.0)) < 1e-8);
    CHECK(std::abs(K(1, 1) - cx(3.0)) < 1e-8);
    CHECK(std::abs(K(0, 1)) < 1e-8);
    CHECK(std::abs(K(1, 0)) < 1e-8);
    // P0 P0inv = I.
    Eigen::MatrixXcd I2 = sd.P0_at(cx(x)) * sd.P0inv_at(cx(x));
    CHECK((I2 - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-10);
  }
}

TEST_CASE("diagonalize_field: branch continuity on an x-dependent field") {
  // F1 = y1 - 1/x, F2 = (2 + x) y2 - (2 + x)/x^2: J0 = diag(1, 2 + x).
  const char* txt = R"(
[system]
N = 2
K = 0
ydeg = 1
[coefficients]
1,0,1,0 = 1
1,0,0,0 = -1/x
2,0,0,1 = 2 + x
2,0,0,0 = -(2 + x)*x^-2
[basepoint]
x0 = 1
y0 = 1, 1
[window]
a = 1
b = 2
)";
  auto spec = parse_problem_text(txt);
  auto sol = solve_formal(spec, 2);
  auto sd = diagonalize_field(spec, sol);
  for (double x : {1.0, 1.5, 2.0}) {
    CHECK(std::abs(sd.phi[0].eval(cx(x)) - cx(1.0)) < 1e-10);
    CHECK(std::abs(sd.phi[1].eval(cx(x)) - cx(2.0 + x)) < 1e-10);
  }
  // Max node-to-node jump of each branch is bounded by the mesh scale.
  auto nodes = sd.phi[0].nodes();
  for (size_t t = 1; t < nodes.size(); ++t) {
    for (int i = 0; i < 2; ++i) {
      const cx jump = sd.phi[static_cast<size_t>(i)].node_values()[t] -
                      sd.phi[static_cast<size_t>(i)].node_values()[t - 1];
      CHECK(std::abs(jump) < 10.0 * std::abs(nodes[t] - nodes[t - 1]) + 1e-12);
    }
  }
}

TEST_CASE("diagonalize_field: eigenvalue collision is rejected") {
  // J0 = [[1, x-1.5], [0, 1]] has a double eigenvalue everywhere.
  const char* txt = R"(
[system]
N = 2
K = 0
ydeg = 1
[coefficients]
1,0,1,0 = 1
1,0,0,1 = x - 1.5
1,0,0,0 = -1/x - (x - 1.5)/x
2,0,0,1 = 1
2,0,0,0 = -1/x
[basepoint]
x0 = 1
y0 = 1, 1
[window]
a = 1
b = 2
)";
  auto spec = parse_problem_text(txt);
  auto sol = solve_formal(spec, 1);
  CHECK_THROWS_AS(diagonalize_field(spec, sol), validation_error);
}

TEST_CASE("liouville_map: phi = 1 gives the shift and exact inverse") {
  ChebInterpolant phi(cx(1.0), cx(2.0), 32, [](cx) { return cx(1.0); });
  auto map = liouville_map(phi, cx(1.0), cx(1.0), cx(2.0));
  CHECK(std::abs(map.forward(cx(1.0))) < 1e-13);
  CHECK(std::abs(map.forward(cx(1.7)) - cx(0.7)) < 1e-12);
  CHECK(map.z_min == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(map.z_max == doctest::Approx(1.0));
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(1.0, 2.0);
  for (int c = 0; c < 100; ++c) {
    const cx x(u(rng));
    CHECK(std::abs(map.inverse(map.forward(x)) - x) <= 1e-10);
  }
}

TEST_CASE("liouville_map: phi = 2x gives x^2 - x0^2 on a safe window") {
  ChebInterpolant phi(cx(0.5), cx(2.0), 32, [](cx x) { return 2.0 * x; });
  auto map = liouville_map(phi, cx(0.5), cx(0.5), cx(2.0));
  for (double x : {0.5, 0.9, 1.6, 2.0}) {
    CHECK(std::abs(map.forward(cx(x)) - cx(x * x - 0.25)) < 1e-12);
  }
  // Inverse is the principal square root branch.
  for (double z : {0.1, 1.0, 3.0}) {
    CHECK(std::abs(map.inverse(cx(z)) - cx(std::sqrt(z + 0.25))) < 1e-10);
  }
}

TEST_CASE("liouville_map: turning point and folding are rejected") {
  ChebInterpolant vanish(cx(-1.0), cx(1.0), 32, [](cx x) { return x; });
  CHECK_THROWS_AS(liouville_map(vanish, cx(0.0), cx(-1.0), cx(1.0)),
                  validation_error);
  // Rotating direction folds the image over itself.
  ChebInterpolant spiral(cx(0.0), cx(2.0), 48,
                         [](cx x) { return std::exp(cx(0.0, 3.0) * x); });
  CHECK_THROWS_AS(liouville_map(spiral, cx(0.0), cx(0.0), cx(2.0)),
                  validation_error);
}

TEST_CASE("standard_form: linear oracle gives G = -g''") {
  auto spec = parse_problem_text(kLinearProblem);
  auto sol = solve_formal(spec, 3);
  auto sd = diagonalize_field(spec, sol);
  auto sf = standard_form(spec, sol, sd);
  CHECK(sf.N == 1);
  CHECK(sf.hbar_deg == 0);
  CHECK(sf.ydeg == 0);
  const MultiIndex m0{0};
  REQUIRE(sf.has(0, 0, m0));
  CHECK(sf.G.size() == 1);
  for (double x : {1.0, 1.3, 1.8, 2.0}) {
    const double gpp = 2.0 * std::pow(x, -3.0);  // g'' for g = 1/x
    CHECK(std::abs(sf.eval(0, 0, m0, cx(x)) - cx(-gpp)) < 1e-9);
  }
}

TEST_CASE("standard_form: Riccati table matches the hand expansion") {
  auto spec = parse_problem_text(kRiccatiProblem);
  auto sol = solve_formal(spec, 3);
  auto sd = diagonalize_field(spec, sol);
  auto sf = standard_form(spec, sol, sd);
  CHECK(sf.hbar_deg == 1);
  CHECK(sf.ydeg == 2);
  const MultiIndex m0{0}, m1{1}, m2{2};
  // With g = 1/x: f1 = g' - g^2 = -2/x^2, f1' = 4/x^3.
  for (double x : {1.0, 1.4, 1.9}) {
    const double g = 1.0 / x;
    const double f1 = -2.0 / (x * x);
    const double f1p = 4.0 / (x * x * x);
    CHECK(std::abs(sf.eval(0, 0, m0, cx(x)) - cx(2.0 * g * f1 - f1p)) < 1e-8);
    CHECK(std::abs(sf.eval(0, 0, m1, cx(x)) - cx(2.0 * g)) < 1e-9);
    CHECK(std::abs(sf.eval(0, 1, m0, cx(x)) - cx(f1 * f1)) < 1e-8);
    CHECK(std::abs(sf.eval(0, 1, m1, cx(x)) - cx(2.0 * f1)) < 1e-9);
    CHECK(std::abs(sf.eval(0, 1, m2, cx(x)) - cx(1.0)) < 1e-10);
  }
}

TEST_CASE("standard_form: stationary problem gives G identically zero") {
  const char* txt = R"(
[system]
N = 1
K = 0
ydeg = 1
[coefficients]
1,0,1 = 1
1,0,0 = -2
[basepoint]
x0 = 1
y0 = 2
[window]
a = 1
b = 2
)";
  auto spec = parse_problem_text(txt);
  auto sol = solve_formal(spec, 3);
  auto sd = diagonalize_field(spec, sol);
  auto sf = standard_form(spec, sol, sd);
  CHECK(sf.G.empty());
}

TEST_CASE("standard_form: inconsistent f0/f1 fails the cancellation check") {
  auto spec = parse_problem_text(kLinearProblem);
  auto sol = solve_formal(spec, 3);
  auto sd = diagonalize_field(spec, sol);
  // Corrupt the order-1 coefficient.
  std::vector<cx> bad = sol.f[1][0].node_values();
  for (auto& v : bad) v += cx(0.5);
  sol.f[1][0] = ChebInterpolant(sol.f[1][0].a(), sol.f[1][0].b(), bad);
  CHECK_THROWS_AS(standard_form(spec, sol, sd), consistency_error);
}
