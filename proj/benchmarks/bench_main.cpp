#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "borelsum/engine.hpp"
#include "borelsum/formal.hpp"
#include "borelsum/gevrey.hpp"
#include "borelsum/problem.hpp"
#include "borelsum/series.hpp"

using namespace borelsum;

namespace {

const char* kRiccati = R"(
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

struct Stack {
  ProblemSpec spec;
  FormalSolution sol;
  SpectralData sd;
  StandardFormCoeffs sf;
  std::vector<LiouvilleMap> maps;
};

Stack build_stack(int nmax) {
  Stack s{parse_problem_text(kRiccati), {}, {}, {}, {}};
  s.sol = solve_formal(s.spec, nmax);
  s.sd = diagonalize_field(s.spec, s.sol);
  s.sf = standard_form(s.spec, s.sol, s.sd);
  s.maps.push_back(liouville_map(s.sd.phi[0], s.spec.x0, s.spec.window_a,
                                 s.spec.window_b));
  return s;
}

AData make_adata(const Stack& s, int Jtot) {
  const double zext = s.maps[0].z_max - s.maps[0].z_min;
  EngineGrid grid{zext / Jtot, Jtot, s.maps[0].z_min};
  return assemble_a_data(s.sf, s.maps, grid);
}

void BM_discrete_convolution(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const double h = 1.0 / n;
  std::vector<cx> a(static_cast<size_t>(n) + 1), b(a);
  for (int k = 0; k <= n; ++k) {
    a[static_cast<size_t>(k)] = std::cos(0.3 * k * h);
    b[static_cast<size_t>(k)] = std::exp(-k * h);
  }
  for (auto _ : state) {
    auto c = discrete_convolution(a, b, h);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetComplexityN(n);
}

void BM_formal_solve(benchmark::State& state) {
  const int nmax = static_cast<int>(state.range(0));
  auto spec = parse_problem_text(kRiccati);
  for (auto _ : state) {
    auto sol = solve_formal(spec, nmax);
    benchmark::DoNotOptimize(sol.f.data());
  }
}

void BM_volterra_march(benchmark::State& state) {
  const int Jtot = static_cast<int>(state.range(0));
  static Stack s = build_stack(4);
  auto ad = make_adata(s, Jtot);
  for (auto _ : state) {
    auto F = volterra_march(ad);
    benchmark::DoNotOptimize(F.sigma.data());
  }
  state.SetComplexityN(Jtot);
}

void BM_successive_terms(benchmark::State& state) {
  const int Jtot = static_cast<int>(state.range(0));
  static Stack s = build_stack(4);
  auto ad = make_adata(s, Jtot);
  for (auto _ : state) {
    auto sr = successive_approximations(ad, 12, 1e-10);
    benchmark::DoNotOptimize(sr.sum.sigma.data());
  }
  state.SetComplexityN(Jtot);
}

void BM_majorant_sequence(benchmark::State& state) {
  const int nmax = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto seq = majorant_sequence(MajorantVariant::borel, 0.0, 1.0, 1.0, nmax);
    benchmark::DoNotOptimize(seq.logM.data());
  }
}

BENCHMARK(BM_discrete_convolution)->RangeMultiplier(2)->Range(64, 1024)
    ->Complexity(benchmark::oNSquared);
BENCHMARK(BM_formal_solve)->Arg(4)->Arg(8)->Arg(12);
BENCHMARK(BM_volterra_march)->RangeMultiplier(2)->Range(32, 256)
    ->Complexity();
BENCHMARK(BM_successive_terms)->RangeMultiplier(2)->Range(32, 128);
BENCHMARK(BM_majorant_sequence)->Arg(40)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
