#pragma once

#include "lovo/box.hpp"
#include "lovo/model.hpp"
#include "lovo/types.hpp"

namespace lovo {

/// Minimizes g^T d over { d : base + d in box, ||d|| <= radius } by tracing
/// d(t) = P(base - t g) - base. For a linear objective the minimizer lies on
/// this path, so the trace (at most n breakpoints) is exact. The returned
/// step satisfies box membership of base + d exactly and
/// ||d|| <= radius (1 + 1e-12).
Vector projected_path_step(const Vector& base, const Vector& g, const FeasibleBox& box,
                           double radius);

/// Trust-region step for a linear model over box and ball.
Vector trsbox_linear(const LinearModel& model, const FeasibleBox& box, double radius);

/// m(base) - m(base + d) >= theta * pi * min(pi / (1 + ||H||), radius, 1),
/// with ||H|| = 0 for linear models.
bool check_sufficient_decrease(const LinearModel& model, const Vector& d, double pi,
                               double radius, double theta = 0.01);

struct AltmovStep {
  Vector d;
  double lagrange_value = 0.0;  // |l_target(base + d)|
  bool flat = false;            // no admissible move increases |l_target|
};

/// Geometry-improving step for sample point `target` (1..n): approximately
/// maximizes |l_target(base + d)| over box and ball of radius `radius` by
/// running the projected path along +grad l and -grad l and keeping the
/// better endpoint (ties go to +). Throws GeometryFailure when grad l is 0.
AltmovStep altmov_linear(const SampleSet& sample, const LagrangeBasis& basis,
                         const FeasibleBox& box, double radius, int target);

/// Non-base point farthest from the base; ties go to the larger index.
int select_target_for_altmov(const SampleSet& sample);

}  // namespace lovo
