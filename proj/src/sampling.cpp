#include "fgeo/sampling.hpp"

#include <cmath>

namespace fgeo {

Tensor sample_point(Rng& rng, int dim, double r_lo, double r_hi) {
  Tensor x(dim, {Variance::upper});
  x[0] = rng.uniform(-1.0, 1.0);
  const double r = rng.uniform(r_lo, r_hi);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (int i = 1; i < dim; ++i) {
      x[static_cast<std::size_t>(i)] = rng.uniform(-1.0, 1.0);
      norm2 += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    }
  } while (norm2 < 0.01);
  const double k = r / std::sqrt(norm2);
  for (int i = 1; i < dim; ++i) x[static_cast<std::size_t>(i)] *= k;
  return x;
}

Tensor sample_fiber(Rng& rng, const MetricState& s, double g) {
  const int dim = s.dim();
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Tensor y(dim, {Variance::upper});
    double yy = 0.0;
    for (int i = 0; i < dim; ++i) {
      y[static_cast<std::size_t>(i)] = rng.uniform(-1.0, 1.0);
      yy += y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    }
    try {
      const FinsleroidState f = kinematics(s, y, g);
      if (f.q * f.q >= 0.05 * yy && f.nu >= 0.05 * f.q) return y;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::degenerate_fiber && e.code() != ErrorCode::outside_admissible_cone) throw;
    }
  }
  throw Error(ErrorCode::validation, "no admissible fiber vector found at r = " + std::to_string(s.r));
}

}  // namespace fgeo
