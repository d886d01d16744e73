#include "borelsum/report.hpp"

#include <cmath>
#include <iomanip>

#include "json.hpp"

namespace borelsum {

namespace {

void set_precision(std::ostream& os) {
  os << std::setprecision(17);
}

}  // namespace

void write_formal_csv(std::ostream& os, const FormalSolution& sol) {
  set_precision(os);
  os << "n,node_re,node_im,comp,val_re,val_im\n";
  for (size_t n = 0; n < sol.f.size(); ++n) {
    for (size_t i = 0; i < sol.f[n].size(); ++i) {
      const auto& vals = sol.f[n][i].node_values();
      for (size_t t = 0; t < sol.nodes.size(); ++t) {
        os << n << ',' << sol.nodes[t].real() << ',' << sol.nodes[t].imag()
           << ',' << i << ',' << vals[t].real() << ',' << vals[t].imag()
           << '\n';
      }
    }
  }
}

void write_gevrey_csv(std::ostream& os, const MajorantSequence& seq) {
  set_precision(os);
  os << "n,Mn,ratio\n";
  for (size_t n = 0; n < seq.logM.size(); ++n) {
    os << n << ',';
    if (seq.log_domain)
      os << std::exp(seq.logM[n]);
    else
      os << seq.M[n];
    os << ',';
    if (n > 0) os << std::exp(seq.logM[n] - seq.logM[n - 1]);
    os << '\n';
  }
}

void write_borel_csv(std::ostream& os, const BorelField& field) {
  set_precision(os);
  os << "comp,zeta,t,re,im\n";
  for (int i = 0; i < field.N; ++i) {
    for (int j = 0; j <= field.Jtot; ++j) {
      for (int k = 0; k <= field.Jtot - j; ++k) {
        const double z = field.z_min + j * field.h;
        const double t = k * field.h;
        const cx v = field.at(i, j, k);
        os << i << ',' << z + t << ',' << t << ',' << v.real() << ','
           << v.imag() << '\n';
      }
    }
  }
}

void write_resum_csv(std::ostream& os, const std::vector<ResumRow>& rows) {
  set_precision(os);
  os << "x_re,x_im,hbar_re,hbar_im,comp,f_re,f_im,err_quad,err_tail,"
        "err_trunc\n";
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.value.value.size(); ++i) {
      os << r.x.real() << ',' << r.x.imag() << ',' << r.hbar.real() << ','
         << r.hbar.imag() << ',' << i << ',' << r.value.value[i].real() << ','
         << r.value.value[i].imag() << ',' << r.value.err_quad << ','
         << r.value.err_tail << ',' << r.value.err_trunc << '\n';
    }
  }
}

void write_manifest(std::ostream& os, const RunManifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["config_path"] = m.config_path;
  j["config_text"] = m.config_text;
  j["parameters"] = {
      {"nmax", m.nmax},       {"degree", m.degree}, {"grid_h", m.grid_h},
      {"xi_max", m.xi_max},   {"tol", m.tol},       {"seed", m.seed},
      {"threads", m.threads},
  };
  auto hb = nlohmann::json::array();
  for (const cx& h : m.hbars) hb.push_back({h.real(), h.imag()});
  j["hbars"] = hb;
  j["version"] = m.version;
  os << j.dump(2) << '\n';
}

}  // namespace borelsum
