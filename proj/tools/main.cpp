#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "borelsum/oracles.hpp"
#include "borelsum/pipeline.hpp"
#include "borelsum/report.hpp"
#include "borelsum/standard_form.hpp"

using namespace borelsum;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
  std::string config;
  std::string out = ".";
  int nmax = 12;
  int degree = 64;
  double grid_h = 0.0;
  double xi_max = 0.0;
  std::string hbar_list = "0.05,0.1";
  double tol = 1e-8;
  std::uint64_t seed = 1;
  int threads = 1;
};

cx parse_complex(const std::string& tok) {
  std::string s = tok;
  if (s.empty()) throw validation_error("empty hbar entry");
  if (s.back() == 'i') {
    s.pop_back();
    // forms: "bi", "+bi", "-bi", "a+bi", "a-bi"
    size_t split = std::string::npos;
    for (size_t p = 1; p < s.size(); ++p)
      if (s[p] == '+' || s[p] == '-') split = p;
    if (split == std::string::npos)
      return cx(0.0, s.empty() || s == "+" ? 1.0
                     : s == "-"            ? -1.0
                                           : std::stod(s));
    const double re = std::stod(s.substr(0, split));
    const std::string im = s.substr(split);
    return cx(re, im == "+" ? 1.0 : im == "-" ? -1.0 : std::stod(im));
  }
  return cx(std::stod(s), 0.0);
}

std::vector<cx> parse_hbars(const std::string& list) {
  std::vector<cx> out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(parse_complex(tok));
  }
  if (out.empty()) throw validation_error("--hbar list is empty");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open config file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunManifest make_manifest(const std::string& command, const Options& opt,
                          const std::string& config_text,
                          const std::vector<cx>& hbars) {
  RunManifest m;
  m.command = command;
  m.config_path = opt.config;
  m.config_text = config_text;
  m.nmax = opt.nmax;
  m.degree = opt.degree;
  m.grid_h = opt.grid_h;
  m.xi_max = opt.xi_max;
  m.tol = opt.tol;
  m.seed = opt.seed;
  m.threads = opt.threads;
  m.hbars = hbars;
  m.version = kVersion;
  return m;
}

std::ofstream open_out(const Options& opt, const std::string& name) {
  std::filesystem::create_directories(opt.out);
  const auto path = std::filesystem::path(opt.out) / name;
  std::ofstream os(path);
  if (!os) throw validation_error("cannot write output file: " + path.string());
  return os;
}

void emit_manifest(const std::string& command, const Options& opt,
                   const std::string& config_text,
                   const std::vector<cx>& hbars) {
  auto os = open_out(opt, "manifest.json");
  write_manifest(os, make_manifest(command, opt, config_text, hbars));
}

PipelineConfig make_pipeline_config(const Options& opt,
                                    const ProblemSpec& spec) {
  PipelineConfig cfg;
  cfg.spec = spec;
  cfg.nmax = opt.nmax;
  cfg.degree = opt.degree;
  cfg.grid_h = opt.grid_h;
  cfg.xi_max = opt.xi_max;
  cfg.tol = opt.tol;
  cfg.seed = opt.seed;
  cfg.hbars = parse_hbars(opt.hbar_list);
  return cfg;
}

int cmd_validate(const Options& opt) {
  const std::string text = read_file(opt.config);
  const auto spec = parse_problem_text(text);
  const auto vr = validate_problem(spec);
  std::cout << "residual |F0(x0,y0)| = " << vr.residual_norm << "\n"
            << "smallest singular value of dF0/dy = " << vr.smallest_singular
            << "\n";
  emit_manifest("validate", opt, text, {});
  if (!vr.pass) throw validation_error(vr.diagnostic);
  std::cout << "validate: PASS\n";
  return 0;
}

int cmd_formal(const Options& opt) {
  const std::string text = read_file(opt.config);
  const auto spec = parse_problem_text(text).rotated_to_zero_direction();
  const auto sol = solve_formal(spec, opt.nmax, opt.degree);
  {
    auto os = open_out(opt, "formal.csv");
    write_formal_csv(os, sol);
  }
  std::vector<double> norms;
  for (int n = 0; n <= opt.nmax; ++n) norms.push_back(sol.sup_norm(n));
  const auto fit = gevrey_fit(norms);
  std::cout << "gevrey fit: C = " << fit.C << ", M = " << fit.M
            << (fit.all_zero ? " (all orders vanish)" : "") << "\n";
  emit_manifest("formal", opt, text, {});
  return 0;
}

// Shared stage builder for the gevrey / borel verbs.
struct Stages {
  ProblemSpec spec;
  FormalSolution sol;
  SpectralData sd;
  std::vector<LiouvilleMap> maps;
  StandardFormCoeffs sf;
  double z_lo = 0.0, extent = 0.0;
};

Stages build_stages(const Options& opt, const std::string& text) {
  Stages s;
  s.spec = parse_problem_text(text).rotated_to_zero_direction();
  const auto vr = validate_problem(s.spec);
  if (!vr.pass) throw validation_error(vr.diagnostic);
  s.sol = solve_formal(s.spec, opt.nmax, opt.degree);
  s.sd = diagonalize_field(s.spec, s.sol);
  for (int i = 0; i < s.sd.N; ++i)
    s.maps.push_back(liouville_map(s.sd.phi[static_cast<size_t>(i)], s.spec.x0,
                                   s.spec.window_a, s.spec.window_b));
  s.sf = standard_form(s.spec, s.sol, s.sd);
  s.z_lo = s.maps[0].z_min;
  double z_hi = s.maps[0].z_max;
  for (const auto& m : s.maps) {
    s.z_lo = std::max(s.z_lo, m.z_min);
    z_hi = std::min(z_hi, m.z_max);
  }
  s.extent = z_hi - s.z_lo;
  if (s.extent <= 0.0)
    throw validation_error(
        "the window images of the component coordinate maps do not overlap");
  return s;
}

int cmd_gevrey(const Options& opt) {
  const std::string text = read_file(opt.config);
  auto s = build_stages(opt, text);
  EngineGrid g0{s.extent / 64.0, 64, s.z_lo};
  const auto ad = assemble_a_data(s.sf, s.maps, g0);
  const auto bc = borel_bound_constants(ad);
  const auto rad = ift_radius(MajorantVariant::borel, 0.0, bc.B, bc.C);
  const auto seq =
      majorant_sequence(MajorantVariant::borel, 0.0, bc.B, bc.C, 40);
  {
    auto os = open_out(opt, "gevrey.csv");
    write_gevrey_csv(os, seq);
  }
  std::cout << "bound constants: B = " << bc.B << ", C = " << bc.C
            << ", L = " << bc.L << "\n";
  if (rad.tstar_infinite)
    std::cout << "majorant radius: infinite (vanishing data)\n";
  else
    std::cout << "majorant radius: t* = " << rad.tstar
              << ", Mbound = " << rad.Mbound << "\n";
  emit_manifest("gevrey", opt, text, {});
  return 0;
}

int cmd_borel(const Options& opt) {
  const std::string text = read_file(opt.config);
  auto s = build_stages(opt, text);
  const double h =
      opt.grid_h > 0.0 ? opt.grid_h : s.extent / 512.0;
  int Jtot = static_cast<int>(s.extent / h + 1e-9);
  Jtot -= Jtot % 4;
  if (Jtot < 32)
    throw validation_error("grid step too coarse for the window extent");
  EngineGrid grid{h, Jtot, s.z_lo};
  const auto field = volterra_march(assemble_a_data(s.sf, s.maps, grid));
  {
    auto os = open_out(opt, "borel.csv");
    write_borel_csv(os, field);
  }
  const auto fit = fit_growth(field);
  std::cout << "growth fit: D = " << fit.D << ", K = " << fit.K << "\n";
  emit_manifest("borel", opt, text, {});
  return 0;
}

int cmd_resum(const Options& opt, bool full_pipeline) {
  const std::string text = read_file(opt.config);
  auto cfg = make_pipeline_config(opt, parse_problem_text(text));
  const auto R = run_pipeline(cfg);
  std::vector<ResumRow> rows;
  for (size_t xi = 0; xi < R.xs.size(); ++xi)
    for (size_t hi = 0; hi < R.hbars.size(); ++hi)
      rows.push_back({R.xs[xi], R.hbars[hi], R.values[xi][hi]});
  {
    auto os = open_out(opt, "resum.csv");
    write_resum_csv(os, rows);
  }
  if (full_pipeline) {
    {
      auto os = open_out(opt, "formal.csv");
      write_formal_csv(os, R.sol);
    }
    {
      auto os = open_out(opt, "gevrey.csv");
      write_gevrey_csv(os, R.majorants);
    }
    {
      auto os = open_out(opt, "borel.csv");
      write_borel_csv(os, R.field);
    }
  }
  std::cout << "formal gevrey fit: C = " << R.formal_fit.C
            << ", M = " << R.formal_fit.M << "\n"
            << "growth fit: D = " << R.growth.D << ", K = " << R.growth.K
            << "\n"
            << "scheme disagreement: " << R.scheme_disagreement << "\n";
  for (const auto& row : rows)
    std::cout << "f(" << row.x.real() << (row.x.imag() < 0 ? "-" : "+")
              << std::abs(row.x.imag()) << "i, " << row.hbar << ") = "
              << row.value.value[0] << "  err(quad,tail,trunc) = ("
              << row.value.err_quad << ", " << row.value.err_tail << ", "
              << row.value.err_trunc << ")\n";
  emit_manifest(full_pipeline ? "pipeline" : "resum", opt, text, R.hbars);
  return 0;
}

int cmd_verify(const Options& opt) {
  const auto rep = run_property_suite(opt.seed);
  std::cout << rep.to_text();
  {
    auto os = open_out(opt, "verify.txt");
    os << rep.to_text();
  }
  // Oracle cross-checks of the formal solver.
  auto lin = oracle_linear(Expr::pow(Expr::var(), -1), cx(1.0), cx(1.0),
                           cx(2.0), 12);
  auto lsol = solve_formal(lin.spec, 12);
  double worst = 0.0;
  for (double x : {1.05, 1.5, 1.95})
    for (int n = 0; n <= 12; ++n) {
      const cx want = lin.fn_at(n, cx(x));
      worst = std::max(worst, std::abs(lsol.eval(n, 0, cx(x)) - want) /
                                  (1.0 + std::abs(want)));
    }
  auto ric = oracle_riccati(cx(1.0), cx(1.0), cx(2.0), 6);
  auto rsol = solve_formal(ric.spec, 6);
  for (double x : {1.05, 1.5, 1.95})
    for (int n = 0; n <= 6; ++n) {
      const cx want = ric.fn_at(n, cx(x));
      worst = std::max(worst, std::abs(rsol.eval(n, 0, cx(x)) - want) /
                                  (1.0 + std::abs(want)));
    }
  std::cout << "oracle cross-check worst relative error: " << worst << "\n";
  emit_manifest("verify", opt, "", {});
  if (!rep.pass || worst > 1e-9)
    throw consistency_error(
        "verification failed: property suite or oracle cross-check reported "
        "disagreement");
  std::cout << "verify: PASS\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "borelsum: exact perturbation theory for hbar f' = F(x, hbar, f) via "
      "Borel-plane continuation and Laplace resummation"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  Options opt;
  app.add_option("--config", opt.config, "problem file");
  app.add_option("--out", opt.out, "output directory");
  app.add_option("--nmax", opt.nmax, "formal series order");
  app.add_option("--degree", opt.degree, "Chebyshev degree");
  app.add_option("--grid-h", opt.grid_h, "Borel grid step (0 = auto)");
  app.add_option("--xi-max", opt.xi_max, "Laplace window length (0 = auto)");
  app.add_option("--hbar", opt.hbar_list,
                 "comma list of hbar values (e.g. 0.05,0.1 or 0.05+0.02i)");
  app.add_option("--tol", opt.tol, "target tolerance");
  app.add_option("--seed", opt.seed, "property-suite seed");
  app.add_option("--threads", opt.threads,
                 "recorded in the manifest; stages are deterministic and "
                 "single-threaded");

  const auto* v_validate = app.add_subcommand("validate", "check hypotheses");
  const auto* v_formal = app.add_subcommand("formal", "formal series + fit");
  const auto* v_gevrey = app.add_subcommand("gevrey", "majorant certification");
  const auto* v_borel = app.add_subcommand("borel", "Borel-plane field");
  const auto* v_resum = app.add_subcommand("resum", "resummed values");
  const auto* v_verify = app.add_subcommand("verify", "oracle/property suite");
  const auto* v_pipeline = app.add_subcommand("pipeline", "all stages");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const bool needs_config = !v_verify->parsed();
    if (needs_config && opt.config.empty())
      throw validation_error("--config is required for this command");
    if (v_validate->parsed()) return cmd_validate(opt);
    if (v_formal->parsed()) return cmd_formal(opt);
    if (v_gevrey->parsed()) return cmd_gevrey(opt);
    if (v_borel->parsed()) return cmd_borel(opt);
    if (v_resum->parsed()) return cmd_resum(opt, false);
    if (v_pipeline->parsed()) return cmd_resum(opt, true);
    if (v_verify->parsed()) return cmd_verify(opt);
  } catch (const validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const evaluation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const convergence_error& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 2;
  } catch (const consistency_error& e) {
    std::cerr << "consistency error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
