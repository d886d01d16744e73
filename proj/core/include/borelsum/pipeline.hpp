#pragma once

#include <cstdint>
#include <vector>

#include "borelsum/engine.hpp"
#include "borelsum/formal.hpp"
#include "borelsum/gevrey.hpp"
#include "borelsum/resum.hpp"
#include "borelsum/spectral.hpp"

namespace borelsum {

struct PipelineConfig {
  ProblemSpec spec;  // as parsed (theta not yet rotated out)
  int nmax = 12;
  int degree = 64;
  double grid_h = 0.0;   // 0: auto (xi_max / 512)
  double xi_max = 0.0;   // 0: auto (min(8/K, window extent))
  double tol = 1e-8;
  std::uint64_t seed = 1;
  std::vector<cx> hbars;  // default {0.05, 0.1}
  std::vector<cx> xs;     // default interior sample points
};

struct PipelineResult {
  ProblemSpec rotated;
  FormalSolution sol;
  GevreyFit formal_fit;
  BoundConstants bound;
  IftRadius radius;
  MajorantSequence majorants;
  SpectralData sd;
  std::vector<LiouvilleMap> maps;
  BorelField field;    // fine grid
  BorelField coarse;   // step 2h companion for truncation estimates
  GrowthFit growth;
  double scheme_disagreement = 0.0;  // march vs successive sums, coarse grid
  std::vector<cx> xs;
  std::vector<cx> hbars;
  /// values[xi][hi]: resummed value at xs[xi], hbars[hi].
  std::vector<std::vector<ResummedValue>> values;
};

/// Full pipeline: validate, rotate the direction to 0, formal solve, Gevrey
/// fit, diagonalise, build coordinate maps, transport to standard form,
/// march the Borel-plane equation on fine and half-resolution grids,
/// cross-check against the graded successive-approximation sum on a coarse
/// grid (consistency_error beyond 10 * tol), fit the growth envelope, and
/// resum at every (x, hbar) pair with full error budgets.
PipelineResult run_pipeline(const PipelineConfig& cfg);

}  // namespace borelsum
