#include "borelsum/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace borelsum {

cx LiouvilleMap::inverse(cx z) const {
  // Seed with the nearest tabulated sample.
  size_t best = 0;
  double bestd = std::abs(z - sample_z[0]);
  for (size_t s = 1; s < sample_z.size(); ++s) {
    const double d = std::abs(z - sample_z[s]);
    if (d < bestd) {
      bestd = d;
      best = s;
    }
  }
  cx x = sample_x[best];
  for (int it = 0; it < 60; ++it) {
    const cx fx = Phi.eval(x) - z;
    const cx dx = fx / phi.eval(x);
    x -= dx;
    if (std::abs(dx) <= 1e-14 * std::max(1.0, std::abs(x))) {
      if (std::abs(Phi.eval(x) - z) <= 1e-10 * std::max(1.0, std::abs(z)))
        return x;
    }
  }
  throw convergence_error(
      "Liouville inverse: Newton iteration did not converge (point may lie "
      "outside the realized window image)");
}

LiouvilleMap liouville_map(const ChebInterpolant& phi, cx x0, cx a, cx b) {
  LiouvilleMap map;
  map.phi = phi;
  map.x0 = x0;
  map.a = a;
  map.b = b;

  // Turning-point check: phi must be bounded away from zero on the window.
  const int M = 4 * std::max(16, phi.degree());
  double minphi = std::numeric_limits<double>::infinity();
  for (int s = 0; s <= M; ++s) {
    const cx x = a + (b - a) * (static_cast<double>(s) / M);
    minphi = std::min(minphi, std::abs(phi.eval(x)));
  }
  if (minphi < 1e-10)
    throw validation_error(
        "turning point on window: eigenvalue branch vanishes, the "
        "nonvanishing hypothesis for the coordinate change fails");

  map.Phi = phi.antiderivative(x0);

  // Injectivity along the central ray: every increment of Phi must advance
  // in the direction of the overall chord (no backtracking or folding).
  const cx chord = map.Phi.eval(b) - map.Phi.eval(a);
  cx zprev = map.Phi.eval(a);
  double zmin = zprev.real(), zmax = zprev.real();
  map.sample_x.reserve(static_cast<size_t>(M) + 1);
  map.sample_z.reserve(static_cast<size_t>(M) + 1);
  map.sample_x.push_back(a);
  map.sample_z.push_back(zprev);
  for (int s = 1; s <= M; ++s) {
    const cx x = a + (b - a) * (static_cast<double>(s) / M);
    const cx z = map.Phi.eval(x);
    const cx inc = z - zprev;
    if ((std::conj(chord) * inc).real() <= 0.0)
      throw validation_error(
          "Liouville map is not injective along the window: monotonicity of "
          "the image ray fails");
    zmin = std::min(zmin, z.real());
    zmax = std::max(zmax, z.real());
    map.sample_x.push_back(x);
    map.sample_z.push_back(z);
    zprev = z;
  }
  map.z_min = zmin;
  map.z_max = zmax;
  return map;
}

}  // namespace borelsum
