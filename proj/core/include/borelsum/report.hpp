#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "borelsum/engine.hpp"
#include "borelsum/formal.hpp"
#include "borelsum/gevrey.hpp"
#include "borelsum/resum.hpp"

namespace borelsum {

/// Formal-solution table: n, node_re, node_im, comp, val_re, val_im.
void write_formal_csv(std::ostream& os, const FormalSolution& sol);

/// Majorant table: n, Mn, ratio (Mn / M_{n-1}; empty for n = 0).
void write_gevrey_csv(std::ostream& os, const MajorantSequence& seq);

/// Borel-plane samples in the tilted coordinates zeta = z + xi, t = xi:
/// comp, zeta, t, re, im with tau(zeta, t) = sigma(zeta - t, t).
void write_borel_csv(std::ostream& os, const BorelField& field);

/// One resummed evaluation point.
struct ResumRow {
  cx x;
  cx hbar;
  ResummedValue value;
};

/// Resummed-value table: x_re, x_im, hbar_re, hbar_im, comp, f_re, f_im,
/// err_quad, err_tail, err_trunc.
void write_resum_csv(std::ostream& os, const std::vector<ResumRow>& rows);

/// Run manifest: command, configuration echo, numeric parameters, seeds and
/// library version, serialised as JSON.  Deterministic for identical inputs
/// (no timestamps or hostnames).
struct RunManifest {
  std::string command;
  std::string config_path;
  std::string config_text;
  int nmax = 0;
  int degree = 0;
  double grid_h = 0.0;
  double xi_max = 0.0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<cx> hbars;
  std::string version;
};

void write_manifest(std::ostream& os, const RunManifest& m);

}  // namespace borelsum
