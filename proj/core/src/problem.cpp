#include "borelsum/problem.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <fstream>
#include <sstream>

namespace borelsum {

Expr::Ptr ProblemSpec::coeff(int i, int k, const MultiIndex& m) const {
  auto it = coeffs.find({i, k, m});
  return it == coeffs.end() ? Expr::constant(cx(0.0)) : it->second;
}

bool ProblemSpec::has_coeff(int i, int k, const MultiIndex& m) const {
  return coeffs.find({i, k, m}) != coeffs.end();
}

std::vector<cx> ProblemSpec::eval_F(cx x, cx hbar,
                                    const std::vector<cx>& y) const {
  std::vector<cx> out(static_cast<size_t>(N), cx(0.0));
  for (const auto& [key, fn] : coeffs) {
    const auto& [i, k, m] = key;
    cx term = fn->eval(x);
    for (int q = 0; q < k; ++q) term *= hbar;
    for (int j = 0; j < N; ++j)
      for (int q = 0; q < m[j]; ++q) term *= y[static_cast<size_t>(j)];
    out[static_cast<size_t>(i)] += term;
  }
  return out;
}

std::vector<cx> ProblemSpec::eval_F0(cx x, const std::vector<cx>& y) const {
  return eval_F(x, cx(0.0), y);
}

std::vector<std::vector<cx>> ProblemSpec::eval_J0(
    cx x, const std::vector<cx>& y) const {
  std::vector<std::vector<cx>> J(
      static_cast<size_t>(N), std::vector<cx>(static_cast<size_t>(N), cx(0.0)));
  for (const auto& [key, fn] : coeffs) {
    const auto& [i, k, m] = key;
    if (k != 0) continue;
    const cx base = fn->eval(x);
    for (int j = 0; j < N; ++j) {
      if (m[j] == 0) continue;
      cx term = base * static_cast<double>(m[j]);
      for (int l = 0; l < N; ++l) {
        int p = m[l] - (l == j ? 1 : 0);
        for (int q = 0; q < p; ++q) term *= y[static_cast<size_t>(l)];
      }
      J[static_cast<size_t>(i)][static_cast<size_t>(j)] += term;
    }
  }
  return J;
}

double ProblemSpec::window_param(cx x) const {
  const cx d = window_b - window_a;
  if (std::abs(d) < 1e-300) return 0.0;
  return ((x - window_a) / d).real();
}

ProblemSpec ProblemSpec::rotated_to_zero_direction() const {
  if (theta == 0.0) return *this;
  ProblemSpec r = *this;
  r.theta = 0.0;
  r.coeffs.clear();
  for (const auto& [key, fn] : coeffs) {
    const int k = std::get<1>(key);
    const cx phase = std::polar(1.0, (k - 1) * theta);
    r.coeffs[key] = Expr::mul(Expr::constant(phase), fn);
  }
  return r;
}

ValidationReport validate_problem(const ProblemSpec& spec, double tol) {
  ValidationReport rep;
  std::vector<cx> F0;
  std::vector<std::vector<cx>> J;
  try {
    F0 = spec.eval_F0(spec.x0, spec.y0);
    J = spec.eval_J0(spec.x0, spec.y0);
  } catch (const evaluation_error& e) {
    rep.pass = false;
    rep.diagnostic = std::string("coefficient evaluation failed at the base point: ") + e.what();
    return rep;
  }
  double r2 = 0.0;
  for (const auto& v : F0) r2 += std::norm(v);
  rep.residual_norm = std::sqrt(r2);

  Eigen::MatrixXcd M(spec.N, spec.N);
  for (int i = 0; i < spec.N; ++i)
    for (int j = 0; j < spec.N; ++j)
      M(i, j) = J[static_cast<size_t>(i)][static_cast<size_t>(j)];
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  rep.smallest_singular = svd.singularValues()(spec.N - 1);

  if (rep.residual_norm > tol) {
    rep.diagnostic = "base-point equation hypothesis violated: |F0(x0,y0)| = " +
                     std::to_string(rep.residual_norm) + " exceeds tolerance";
  } else if (rep.smallest_singular < tol) {
    rep.diagnostic =
        "Jacobian invertibility hypothesis violated at the base point: "
        "smallest singular value " +
        std::to_string(rep.smallest_singular) + " below tolerance";
  } else {
    rep.pass = true;
  }
  return rep;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

cx eval_const_expr(const std::string& text, const std::string& where) {
  auto e = parse_expression(text);
  try {
    return e->eval(cx(0.0));
  } catch (const evaluation_error&) {
    throw validation_error("value for " + where + " must be a constant: '" + text + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

ProblemSpec parse_problem_text(const std::string& text) {
  ProblemSpec spec;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  bool have_N = false, have_x0 = false, have_y0 = false, have_window = false;

  // Coefficient lines are deferred until N is known? N appears in [system]
  // which conventionally comes first; we require that ordering.
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    auto fail = [&](const std::string& what) -> void {
      throw validation_error("problem file line " + std::to_string(lineno) +
                             ": " + what + " ('" + t + "')");
    };
    if (t.front() == '[') {
      if (t.back() != ']') fail("malformed section header");
      section = t.substr(1, t.size() - 2);
      continue;
    }
    const size_t eq = t.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));

    if (section == "system") {
      if (key == "N") { spec.N = std::stoi(val); have_N = true; }
      else if (key == "K") spec.K = std::stoi(val);
      else if (key == "ydeg") spec.ydeg = std::stoi(val);
      else fail("unknown [system] key '" + key + "'");
    } else if (section == "coefficients") {
      if (!have_N) fail("[system] with N must precede [coefficients]");
      auto parts = split(key, ',');
      if (static_cast<int>(parts.size()) != 2 + spec.N)
        fail("coefficient key must be 'i,k,m1,...,mN'");
      const int i = std::stoi(trim(parts[0]));
      const int k = std::stoi(trim(parts[1]));
      MultiIndex m(std::vector<int>(static_cast<size_t>(spec.N), 0));
      for (int j = 0; j < spec.N; ++j)
        m[j] = std::stoi(trim(parts[static_cast<size_t>(j) + 2]));
      if (i < 1 || i > spec.N) fail("component index out of range");
      if (k < 0 || k > spec.K) fail("hbar power out of declared range");
      if (m.degree() > spec.ydeg) fail("y multi-index degree exceeds declared ydeg");
      spec.coeffs[{i - 1, k, m}] = parse_expression(val);
    } else if (section == "basepoint") {
      if (key == "x0") { spec.x0 = eval_const_expr(val, "x0"); have_x0 = true; }
      else if (key == "y0") {
        spec.y0.clear();
        for (const auto& p : split(val, ','))
          spec.y0.push_back(eval_const_expr(trim(p), "y0"));
        have_y0 = true;
      } else fail("unknown [basepoint] key '" + key + "'");
    } else if (section == "window") {
      if (key == "a") spec.window_a = eval_const_expr(val, "window a");
      else if (key == "b") spec.window_b = eval_const_expr(val, "window b");
      else fail("unknown [window] key '" + key + "'");
      have_window = true;
    } else if (section == "direction") {
      if (key == "theta") spec.theta = eval_const_expr(val, "theta").real();
      else fail("unknown [direction] key '" + key + "'");
    } else {
      fail("entry outside any known section");
    }
  }

  if (!have_N || spec.N < 1) throw validation_error("problem file: [system] N missing or < 1");
  if (spec.K < 0 || spec.ydeg < 0) throw validation_error("problem file: K and ydeg must be >= 0");
  if (!have_x0) throw validation_error("problem file: [basepoint] x0 missing");
  if (!have_y0) throw validation_error("problem file: [basepoint] y0 missing");
  if (static_cast<int>(spec.y0.size()) != spec.N)
    throw validation_error("problem file: y0 must have N components");
  if (!have_window) {
    spec.window_a = spec.x0;
    spec.window_b = spec.x0 + cx(1.0);
  }
  return spec;
}

ProblemSpec load_problem_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw validation_error("cannot open problem file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_problem_text(buf.str());
}

}  // namespace borelsum
