#include "borelsum/gevrey.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace borelsum {

GevreyFit gevrey_fit(const std::vector<double>& norms) {
  GevreyFit fit;
  if (norms.size() < 4)
    throw validation_error("gevrey_fit needs at least 4 samples");
  const int n = static_cast<int>(norms.size());
  bool any = false;
  for (double v : norms) any = any || v > 0.0;
  if (!any) {
    fit.all_zero = true;
    fit.C = 0.0;
    fit.M = 1.0;
    return fit;
  }
  // Root estimates (|f_n|/n!)^{1/n} stabilise for larger n; drop the first
  // quartile where low-order accidents dominate.
  const int start = std::max(1, n / 4);
  double M = 0.0;
  double lfact = 0.0;  // log n!
  std::vector<double> lf(norms.size(), 0.0);
  for (int k = 1; k < n; ++k) {
    lfact += std::log(static_cast<double>(k));
    lf[static_cast<size_t>(k)] = lfact;
  }
  for (int k = start; k < n; ++k) {
    if (norms[static_cast<size_t>(k)] <= 0.0) continue;
    const double r =
        std::exp((std::log(norms[static_cast<size_t>(k)]) - lf[static_cast<size_t>(k)]) / k);
    M = std::max(M, r);
  }
  if (M <= 0.0) M = 1.0;
  double C = 0.0;
  for (int k = 0; k < n; ++k)
    C = std::max(C, std::exp(std::log(std::max(norms[static_cast<size_t>(k)],
                                               1e-300)) -
                             k * std::log(M) - lf[static_cast<size_t>(k)]));
  fit.M = M;
  fit.C = C;
  double slack = 0.0;
  for (int k = 0; k < n; ++k)
    slack = std::max(slack, norms[static_cast<size_t>(k)] /
                                (C * std::exp(k * std::log(M) + lf[static_cast<size_t>(k)])));
  fit.envelope_slack = slack;
  return fit;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logadd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

/// Truncated product of nonnegative series in log domain.
std::vector<double> logpoly_mul(const std::vector<double>& a,
                                const std::vector<double>& b, int len) {
  std::vector<double> c(static_cast<size_t>(len), kNegInf);
  for (int i = 0; i < std::min<int>(static_cast<int>(a.size()), len); ++i) {
    if (a[static_cast<size_t>(i)] == kNegInf) continue;
    for (int j = 0; j < std::min<int>(static_cast<int>(b.size()), len - i); ++j)
      c[static_cast<size_t>(i + j)] =
          logadd(c[static_cast<size_t>(i + j)],
                 a[static_cast<size_t>(i)] + b[static_cast<size_t>(j)]);
  }
  return c;
}

std::vector<double> poly_mul_real(const std::vector<double>& a,
                                  const std::vector<double>& b, int len) {
  std::vector<double> c(static_cast<size_t>(len), 0.0);
  for (int i = 0; i < std::min<int>(static_cast<int>(a.size()), len); ++i) {
    if (a[static_cast<size_t>(i)] == 0.0) continue;
    for (int j = 0; j < std::min<int>(static_cast<int>(b.size()), len - i); ++j)
      c[static_cast<size_t>(i + j)] +=
          a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
  }
  return c;
}

/// Run the recursion in either linear or log domain.  Template keeps the
/// two code paths textually identical.
struct LinearOps {
  using Series = std::vector<double>;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double add(double a, double b) { return a + b; }
  static double mul(double a, double b) { return a * b; }
  static double from_plain(double v) { return v; }
  static Series mul_series(const Series& a, const Series& b, int len) {
    return poly_mul_real(a, b, len);
  }
  static bool overflow(double v) { return !(v < 1e300); }
};

struct LogOps {
  using Series = std::vector<double>;
  static double zero() { return kNegInf; }
  static double one() { return 0.0; }
  static double add(double a, double b) { return logadd(a, b); }
  static double mul(double a, double b) { return a + b; }
  static double from_plain(double v) { return v > 0.0 ? std::log(v) : kNegInf; }
  static Series mul_series(const Series& a, const Series& b, int len) {
    return logpoly_mul(a, b, len);
  }
  static bool overflow(double) { return false; }
};

template <class Ops>
bool run_majorant(MajorantVariant variant, double A, double B, double C,
                  int nmax, std::vector<double>& out) {
  const double lA2 = Ops::from_plain(A * A);
  const double lB = Ops::from_plain(B);
  const double lC = Ops::from_plain(C);
  std::vector<double> M(static_cast<size_t>(nmax) + 1, Ops::zero());

  if (variant == MajorantVariant::formal) {
    M[0] = Ops::zero();  // M_0 = 0
    for (int n = 0; n < nmax; ++n) {
      // inner = sum_{k=0}^n B^k sum_{m=0}^{n-k} B^m [t^{n-k}] p^m,
      // with p built from M_0..M_n (all known).
      std::vector<double> pw = {Ops::one()};  // p^0
      // paren[s] accumulates sum_m B^m [t^s] p^m for s = 0..n.
      std::vector<double> paren(static_cast<size_t>(n) + 1, Ops::zero());
      for (int s = 0; s <= n; ++s) paren[static_cast<size_t>(s)] = (s == 0) ? Ops::one() : Ops::zero();
      const std::vector<double> phat(M.begin(), M.begin() + n + 1);
      double Bm = lB;
      for (int m = 1; m <= n; ++m) {
        pw = Ops::mul_series(pw, phat, n + 1);
        for (int s = 0; s <= n; ++s)
          paren[static_cast<size_t>(s)] =
              Ops::add(paren[static_cast<size_t>(s)],
                       Ops::mul(Bm, pw[static_cast<size_t>(s)]));
        Bm = Ops::mul(Bm, lB);
      }
      double inner = Ops::zero();
      double Bk = Ops::one();
      for (int k = 0; k <= n; ++k) {
        inner = Ops::add(inner, Ops::mul(Bk, paren[static_cast<size_t>(n - k)]));
        Bk = Ops::mul(Bk, lB);
      }
      M[static_cast<size_t>(n + 1)] =
          Ops::mul(lA2, Ops::add(M[static_cast<size_t>(n)], inner));
      if (Ops::overflow(M[static_cast<size_t>(n + 1)])) return false;
    }
  } else {
    for (int n = 0; n <= nmax; ++n) {
      // M_n = sum_{m=0}^n C B^m ([t^{n-m}] p^m + [t^{n-m-1}] p^m),
      // p built from M_0..M_{n-1}; only s <= n-1 is referenced for m >= 1.
      double sum = Ops::zero();
      // m = 0 term: delta_{n,0} + delta_{n,1}.
      if (n == 0 || n == 1) sum = Ops::add(sum, lC);
      const std::vector<double> phat(M.begin(), M.begin() + n);
      std::vector<double> pw = {Ops::one()};
      double CBm = Ops::mul(lC, lB);
      for (int m = 1; m <= n; ++m) {
        pw = Ops::mul_series(pw, phat, std::max(n, 1));
        const int s1 = n - m, s2 = n - m - 1;
        double term = Ops::zero();
        if (s1 >= 0 && s1 < static_cast<int>(pw.size()))
          term = Ops::add(term, pw[static_cast<size_t>(s1)]);
        if (s2 >= 0 && s2 < static_cast<int>(pw.size()))
          term = Ops::add(term, pw[static_cast<size_t>(s2)]);
        sum = Ops::add(sum, Ops::mul(CBm, term));
        CBm = Ops::mul(CBm, lB);
      }
      M[static_cast<size_t>(n)] = sum;
      if (Ops::overflow(sum)) return false;
    }
  }
  out = std::move(M);
  return true;
}

}  // namespace

MajorantSequence majorant_sequence(MajorantVariant variant, double A, double B,
                                   double C, int nmax) {
  if (variant == MajorantVariant::formal && A < 3.0)
    throw validation_error("formal majorant variant requires A >= 3");
  if (B <= 0.0 || (variant == MajorantVariant::borel && C < 0.0))
    throw validation_error("majorant parameters must be positive");
  MajorantSequence seq;
  seq.variant = variant;
  seq.A = A;
  seq.B = B;
  seq.C = C;
  if (run_majorant<LinearOps>(variant, A, B, C, nmax, seq.M)) {
    seq.log_domain = false;
    seq.logM.resize(seq.M.size());
    for (size_t j = 0; j < seq.M.size(); ++j)
      seq.logM[j] = seq.M[j] > 0.0 ? std::log(seq.M[j]) : kNegInf;
  } else {
    seq.log_domain = true;
    run_majorant<LogOps>(variant, A, B, C, nmax, seq.logM);
    seq.M.resize(seq.logM.size());
    for (size_t j = 0; j < seq.logM.size(); ++j)
      seq.M[j] = std::exp(seq.logM[j]);  // inf where out of range
  }
  return seq;
}

namespace {

struct ScalarEq {
  MajorantVariant variant;
  double A, B, C;

  // F(t, p) and dF/dp; throws if a geometric-series pole is crossed.
  double F(double t, double p) const {
    if (variant == MajorantVariant::borel) {
      const double u = B * t * p;
      if (u >= 1.0) throw convergence_error("pole");
      return -p + (1.0 + t) * C / (1.0 - u);
    }
    if (B * t >= 1.0 || B * p >= 1.0) throw convergence_error("pole");
    return -p + A * A * (t * p + t / (1.0 - B * t) / (1.0 - B * p));
  }
  double dFdp(double t, double p) const {
    if (variant == MajorantVariant::borel) {
      const double u = B * t * p;
      if (u >= 1.0) throw convergence_error("pole");
      const double d = 1.0 - u;
      return -1.0 + (1.0 + t) * C * B * t / (d * d);
    }
    if (B * t >= 1.0 || B * p >= 1.0) throw convergence_error("pole");
    const double d = 1.0 - B * p;
    return -1.0 + A * A * (t + t / (1.0 - B * t) * B / (d * d));
  }

  /// Newton from seed; true on convergence to a solution with dF/dp < 0
  /// (the analytic branch), updating p.
  bool solvable(double t, double& p) const {
    double x = p;
    try {
      for (int it = 0; it < 80; ++it) {
        const double f = F(t, x);
        const double d = dFdp(t, x);
        if (d >= -1e-14) return false;  // solvability lost
        const double step = f / d;
        x -= step;
        if (x < 0.0) x = 0.0;
        if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(x))) {
          if (dFdp(t, x) >= -1e-12) return false;
          p = x;
          return true;
        }
      }
    } catch (const convergence_error&) {
      return false;
    }
    return false;
  }
};

}  // namespace

IftRadius ift_radius(MajorantVariant variant, double A, double B, double C) {
  ScalarEq eq{variant, A, B, C};
  IftRadius out;
  double t = 0.0;
  double p = (variant == MajorantVariant::borel) ? C : 0.0;
  // Verify the base point itself.
  if (!eq.solvable(0.0, p))
    throw convergence_error(
        "implicit-function base point not solvable; functional equation "
        "hypothesis violated at t = 0");
  double step = 0.1;
  const double t_cap = 1e6;
  while (step > 1e-13) {
    if (t + step > t_cap) {
      out.tstar_infinite = true;
      out.tstar = std::numeric_limits<double>::infinity();
      out.Mbound = 0.0;
      return out;
    }
    double ptry = p;
    if (eq.solvable(t + step, ptry)) {
      t += step;
      p = ptry;
    } else {
      step *= 0.5;
    }
  }
  out.tstar = t;
  out.Mbound = 1.0 / t;
  return out;
}

}  // namespace borelsum
