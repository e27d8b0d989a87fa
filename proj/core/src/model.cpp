#include "lovo/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <json.hpp>

#include "lovo/errors.hpp"
#include "lovo/log.hpp"

namespace lovo {

LagrangeBasis::LagrangeBasis(const SampleSet& sample) {
  const int m = sample.size();
  const int n = sample.dimension();
  if (m != n + 1 || n < 1) throw StructuralError("sample must hold n+1 points");
  base_ = sample.base();
  scale_ = 0.0;
  for (int j = 1; j < m; ++j) scale_ = std::max(scale_, (sample.points[j] - base_).norm());
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
    throw GeometryFailure("sample points coincide with the base point");
  }
  Matrix matrix(m, m);
  for (int j = 0; j < m; ++j) {
    matrix(j, 0) = 1.0;
    matrix.row(j).tail(n) = ((sample.points[j] - base_) / scale_).transpose();
  }
  Eigen::JacobiSVD<Matrix> svd(matrix);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  condition_ = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  if (!(condition_ <= kMaxCondition)) {
    std::ostringstream msg;
    msg << "interpolation matrix is numerically singular (condition " << condition_ << ")";
    throw GeometryFailure(msg.str());
  }
  qr_.compute(matrix);
  inverse_ = qr_.solve(Matrix::Identity(m, m));
  if (!inverse_.allFinite()) throw GeometryFailure("non-finite Lagrange coefficients");
}

Vector LagrangeBasis::solve(const Vector& rhs) const {
  return qr_.solve(rhs);
}

double LagrangeBasis::value(int j, const Vector& x) const {
  const int n = static_cast<int>(base_.size());
  return inverse_(0, j) + ((x - base_) / scale_).dot(inverse_.col(j).tail(n));
}

Vector LagrangeBasis::gradient(int j) const {
  const int n = static_cast<int>(base_.size());
  return inverse_.col(j).tail(n) / scale_;
}

SampleSet initial_sample(const FeasibleBox& box, const Vector& x0, double delta0) {
  const int n = box.dimension();
  if (x0.size() != n) throw StructuralError("initial_sample: dimension mismatch");
  if (!(delta0 > 0.0)) throw StructuralError("initial_sample: delta0 must be positive");
  if (!box.contains(x0)) throw StructuralError("initial_sample: x0 is infeasible");
  SampleSet s;
  s.points.assign(n + 1, x0);
  s.values.assign(n + 1, std::numeric_limits<double>::quiet_NaN());
  for (int j = 0; j < n; ++j) {
    const double lo = box.lower()[j];
    const double hi = box.upper()[j];
    double step = delta0;
    if (x0[j] + step > hi && x0[j] - step < lo) {
      step = (hi - lo) / 2.0;
      std::ostringstream msg;
      msg << "box is thinner than the sampling radius in coordinate " << j + 1
          << "; offset shrunk to " << step;
      warn(msg.str());
    }
    double y = x0[j] + step <= hi ? x0[j] + step : x0[j] - step;
    if (y < lo || y > hi || y == x0[j]) {
      throw GeometryFailure("initial_sample: no admissible offset in coordinate " +
                            std::to_string(j + 1));
    }
    s.points[j + 1][j] = y;
  }
  return s;
}

SampleSet initial_sample(const LovoProblem& problem, const Vector& x0, double delta0) {
  return initial_sample(problem.box, x0, delta0);
}

void evaluate_sample(SampleSet& sample, const LovoProblem& problem, EvalLedger& ledger,
                     ComponentIndex index) {
  for (int j = 0; j < sample.size(); ++j) {
    if (std::isnan(sample.values[j])) {
      sample.values[j] = eval_component(problem, ledger, index, sample.points[j]);
    }
  }
  sample.model_index = index;
}

ModelFit fit_model(const SampleSet& sample) {
  LagrangeBasis basis(sample);
  const int m = sample.size();
  Vector rhs(m);
  for (int j = 0; j < m; ++j) rhs[j] = sample.values[j];
  const Vector coeffs = basis.solve(rhs);
  LinearModel model;
  model.base = sample.base();
  model.b = coeffs[0];
  model.g = coeffs.tail(m - 1) / basis.scale();
  if (!std::isfinite(model.b) || !model.g.allFinite()) {
    throw GeometryFailure("non-finite model coefficients");
  }
  return {std::move(model), std::move(basis)};
}

LinearModel build_model(const SampleSet& sample) { return fit_model(sample).model; }

LagrangeBasis lagrange_polynomials(const SampleSet& sample) { return LagrangeBasis(sample); }

SampleSet exchange_point(const SampleSet& sample, const Vector& x_new, double f_new,
                         BasePolicy policy) {
  for (int t = 0; t < sample.size(); ++t) {
    if (sample.points[t] == x_new) {
      SampleSet out = sample;
      out.values[t] = f_new;
      return out;
    }
  }
  const LagrangeBasis basis(sample);
  const bool new_base = policy == BasePolicy::kForceNewBase ||
                        (policy == BasePolicy::kPromoteIfBetter && f_new < sample.values[0]);
  const Vector& x_best = new_base ? x_new : sample.base();

  int chosen = -1;
  double best_score = -1.0;
  for (int t = new_base ? 0 : 1; t < sample.size(); ++t) {
    const double lt = std::abs(basis.value(t, x_new));
    if (lt < 1e-14) continue;
    const double score = lt * (sample.points[t] - x_best).squaredNorm();
    if (score >= best_score) {
      best_score = score;
      chosen = t;
    }
  }
  if (chosen < 0) throw RejectionError("new point adds no information to the sample");

  SampleSet out = sample;
  out.points[chosen] = x_new;
  out.values[chosen] = f_new;
  if (new_base && chosen != 0) {
    std::swap(out.points[0], out.points[chosen]);
    std::swap(out.values[0], out.values[chosen]);
  }
  return out;
}

SampleSet replace_point(const SampleSet& sample, int t, const Vector& x, double f) {
  if (t < 1 || t >= sample.size()) throw StructuralError("replace_point: bad slot");
  SampleSet out = sample;
  out.points[t] = x;
  out.values[t] = f;
  return out;
}

std::pair<SampleSet, ModelFit> rebuild_for_index(const SampleSet& sample,
                                                 const LovoProblem& problem,
                                                 EvalLedger& ledger,
                                                 ComponentIndex new_index) {
  if (new_index == sample.model_index) return {sample, fit_model(sample)};
  SampleSet out = sample;
  for (int j = 0; j < out.size(); ++j) {
    out.values[j] = eval_component(problem, ledger, new_index, out.points[j]);
  }
  out.model_index = new_index;
  ModelFit fit = fit_model(out);
  return {std::move(out), std::move(fit)};
}

double model_stationarity(const LinearModel& model, const FeasibleBox& box) {
  return (box.project(model.base - model.g) - model.base).norm();
}

std::string sample_to_json(const SampleSet& sample) {
  nlohmann::json j;
  j["model_index"] = sample.model_index;
  auto& pts = j["points"] = nlohmann::json::array();
  for (const auto& p : sample.points) pts.push_back(std::vector<double>(p.begin(), p.end()));
  j["values"] = sample.values;
  try {
    j["condition"] = LagrangeBasis(sample).condition();
  } catch (const GeometryFailure&) {
    j["condition"] = nullptr;
  }
  return j.dump();
}

}  // namespace lovo
