#pragma once

#include "fgeo/finsler.hpp"
#include "fgeo/rng.hpp"

namespace fgeo {

// Point of the standard chart with r uniform in [r_lo, r_hi], a uniform axis
// coordinate in [-1, 1] and a random transverse direction.
Tensor sample_point(Rng& rng, int dim, double r_lo, double r_hi);

// Fiber vector with components uniform in [-1, 1], redrawn until it sits
// well inside the admissible cone: q^2 >= 0.05 |y|^2 and nu >= 0.05 q.
// Throws ErrorCode::validation after 10000 rejected draws.
Tensor sample_fiber(Rng& rng, const MetricState& s, double g);

}  // namespace fgeo
