#include "lovo/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "lovo/errors.hpp"

namespace lovo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nudges d so that base + d lies in the box exactly and ||d|| <= radius.
void enforce_step_bounds(const Vector& base, const FeasibleBox& box, double radius,
                         Vector& d) {
  const double norm = d.norm();
  if (norm > radius) d *= radius / norm;
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    while (base[j] + d[j] > box.upper()[j]) d[j] = std::nextafter(d[j], -kInf);
    while (base[j] + d[j] < box.lower()[j]) d[j] = std::nextafter(d[j], kInf);
  }
}

}  // namespace

Vector projected_path_step(const Vector& base, const Vector& g, const FeasibleBox& box,
                           double radius) {
  const int n = static_cast<int>(base.size());
  if (g.size() != n || box.dimension() != n) {
    throw StructuralError("projected_path_step: dimension mismatch");
  }
  if (!(radius > 0.0)) throw StructuralError("projected_path_step: radius must be positive");

  // Breakpoint of coordinate j: the t at which base_j - t g_j hits a bound.
  std::vector<double> breakpoint(n, kInf);
  std::vector<double> pinned_offset(n, 0.0);
  for (int j = 0; j < n; ++j) {
    if (g[j] > 0.0) {
      pinned_offset[j] = box.lower()[j] - base[j];
      breakpoint[j] = (base[j] - box.lower()[j]) / g[j];
    } else if (g[j] < 0.0) {
      pinned_offset[j] = box.upper()[j] - base[j];
      breakpoint[j] = (box.upper()[j] - base[j]) / (-g[j]);
    }
  }
  std::vector<int> order;
  for (int j = 0; j < n; ++j) {
    if (g[j] != 0.0) order.push_back(j);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return breakpoint[a] < breakpoint[b] || (breakpoint[a] == breakpoint[b] && a < b);
  });

  const double radius_sq = radius * radius;
  double t_stop = kInf;
  std::size_t pinned = 0;
  while (pinned <= order.size()) {
    double pinned_sq = 0.0;
    double free_gsq = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const int j = order[k];
      if (k < pinned) {
        pinned_sq += pinned_offset[j] * pinned_offset[j];
      } else {
        free_gsq += g[j] * g[j];
      }
    }
    if (free_gsq == 0.0) break;  // every moving coordinate is pinned
    const double t_next = pinned < order.size() ? breakpoint[order[pinned]] : kInf;
    const double norm_sq_next = pinned_sq + t_next * t_next * free_gsq;
    if (norm_sq_next >= radius_sq) {
      t_stop = std::sqrt(std::max(0.0, radius_sq - pinned_sq) / free_gsq);
      t_stop = std::min(t_stop, t_next);
      break;
    }
    ++pinned;
  }

  Vector d = Vector::Zero(n);
  for (int j = 0; j < n; ++j) {
    if (g[j] == 0.0) continue;
    d[j] = breakpoint[j] <= t_stop ? pinned_offset[j] : -t_stop * g[j];
  }
  enforce_step_bounds(base, box, radius, d);
  return d;
}

Vector trsbox_linear(const LinearModel& model, const FeasibleBox& box, double radius) {
  return projected_path_step(model.base, model.g, box, radius);
}

bool check_sufficient_decrease(const LinearModel& model, const Vector& d, double pi,
                               double radius, double theta) {
  const double decrease = -model.g.dot(d);
  return decrease >= theta * pi * std::min({pi, radius, 1.0});
}

AltmovStep altmov_linear(const SampleSet& sample, const LagrangeBasis& basis,
                         const FeasibleBox& box, double radius, int target) {
  if (target < 1 || target >= sample.size()) {
    throw StructuralError("altmov_linear: target must be a non-base sample index");
  }
  const Vector grad = basis.gradient(target);
  if (!(grad.norm() > 0.0)) {
    throw GeometryFailure("degenerate Lagrange polynomial: zero gradient");
  }
  const Vector& base = sample.base();
  const Vector up = projected_path_step(base, -grad, box, radius);
  const Vector down = projected_path_step(base, grad, box, radius);
  const double v_up = std::abs(basis.value(target, base + up));
  const double v_down = std::abs(basis.value(target, base + down));

  AltmovStep step;
  if (v_up >= v_down) {
    step.d = up;
    step.lagrange_value = v_up;
  } else {
    step.d = down;
    step.lagrange_value = v_down;
  }
  step.flat = step.d.isZero(0.0) ||
              !(step.lagrange_value > std::abs(basis.value(target, base)));
  return step;
}

int select_target_for_altmov(const SampleSet& sample) {
  if (sample.size() < 2) throw StructuralError("sample has no non-base points");
  int best = 1;
  double best_dist = -1.0;
  for (int t = 1; t < sample.size(); ++t) {
    const double dist = (sample.points[t] - sample.base()).norm();
    if (dist >= best_dist) {
      best_dist = dist;
      best = t;
    }
  }
  return best;
}

}  // namespace lovo
