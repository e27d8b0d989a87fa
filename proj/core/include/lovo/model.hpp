#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/QR>

#include "lovo/box.hpp"
#include "lovo/problem.hpp"
#include "lovo/types.hpp"

namespace lovo {

/// n+1 interpolation points; points[0] is the base point (the current
/// iterate) and values[j] = f_{model_index}(points[j]).
struct SampleSet {
  std::vector<Vector> points;
  std::vector<double> values;
  ComponentIndex model_index = 0;

  int dimension() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }
  int size() const { return static_cast<int>(points.size()); }
  const Vector& base() const { return points.front(); }
};

/// m(x) = b + g^T (x - base). The Hessian is identically zero.
struct LinearModel {
  double b = 0.0;
  Vector g;
  Vector base;

  double operator()(const Vector& x) const { return b + g.dot(x - base); }
};

/// Factorization of the interpolation matrix whose rows are
/// [1, (y^j - base)^T / scale], kept for Lagrange-polynomial queries.
/// The displacement columns are scaled by the sample radius so the
/// condition estimate measures geometry rather than radius.
class LagrangeBasis {
 public:
  /// Throws GeometryFailure when the condition estimate exceeds
  /// kMaxCondition or the factorization produces non-finite values.
  explicit LagrangeBasis(const SampleSet& sample);

  static constexpr double kMaxCondition = 1e12;

  int size() const { return static_cast<int>(inverse_.cols()); }
  double value(int j, const Vector& x) const;
  Vector gradient(int j) const;
  double condition() const { return condition_; }
  const Vector& base() const { return base_; }

  /// Coefficients [c0, c] of the interpolant in scaled coordinates, solved
  /// from the retained factorization.
  Vector solve(const Vector& rhs) const;
  double scale() const { return scale_; }

 private:
  Vector base_;
  double scale_ = 1.0;
  Eigen::HouseholderQR<Matrix> qr_;
  Matrix inverse_;  // column j holds the scaled coefficients of l_j
  double condition_ = 0.0;
};

struct ModelFit {
  LinearModel model;
  LagrangeBasis basis;
};

/// BOBYQA-style coordinate sample: x0 and x0 +- delta0 e_j, stepping down
/// from the upper bound when x0_j + delta0 would leave the box. Values are
/// left as NaN for the caller to fill in.
SampleSet initial_sample(const FeasibleBox& box, const Vector& x0, double delta0);
SampleSet initial_sample(const LovoProblem& problem, const Vector& x0, double delta0);

/// Evaluates f_index at every point whose value is missing (NaN).
void evaluate_sample(SampleSet& sample, const LovoProblem& problem, EvalLedger& ledger,
                     ComponentIndex index);

ModelFit fit_model(const SampleSet& sample);
LinearModel build_model(const SampleSet& sample);
LagrangeBasis lagrange_polynomials(const SampleSet& sample);

enum class BasePolicy {
  kPromoteIfBetter,  // x_new becomes the base if f_new < values[0]
  kForceNewBase,     // x_new becomes the base (accepted step)
  kKeepBase,         // base stays, x_new takes a non-base slot
};

/// Inserts x_new and removes the point y^t maximizing
/// |l_t(x_new)| * ||y^t - x_best||^2 (ties go to the larger index), where
/// x_best is the base after insertion. A point coincident with x_new only has
/// its value refreshed. Throws RejectionError when no admissible t has
/// |l_t(x_new)| >= 1e-14.
SampleSet exchange_point(const SampleSet& sample, const Vector& x_new, double f_new,
                         BasePolicy policy = BasePolicy::kPromoteIfBetter);

/// Overwrites slot t (t >= 1) with (x, f).
SampleSet replace_point(const SampleSet& sample, int t, const Vector& x, double f);

/// Re-evaluates f_{new_index} at the current points (n+1 evaluations) and
/// refits. Same index: no evaluations, plain refit.
std::pair<SampleSet, ModelFit> rebuild_for_index(const SampleSet& sample,
                                                 const LovoProblem& problem,
                                                 EvalLedger& ledger,
                                                 ComponentIndex new_index);

/// pi = || P(base - g) - base ||.
double model_stationarity(const LinearModel& model, const FeasibleBox& box);

/// {points, values, model_index, condition} as a JSON document.
std::string sample_to_json(const SampleSet& sample);

}  // namespace lovo
