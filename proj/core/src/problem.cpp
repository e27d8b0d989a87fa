#include "lovo/problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lovo/errors.hpp"

namespace lovo {

OracleFailure::OracleFailure(ComponentIndex index, Vector x)
    : Error("oracle f_" + std::to_string(index) + " returned a non-finite value"),
      index_(index),
      x_(std::move(x)) {}

void LovoProblem::validate() const {
  if (n < 1) throw StructuralError(name + ": dimension must be >= 1");
  if (r < 1) throw StructuralError(name + ": need at least one component");
  if (static_cast<int>(components.size()) != r) {
    throw StructuralError(name + ": component count differs from r");
  }
  if (box.dimension() != n || x0.size() != n) {
    throw StructuralError(name + ": box or x0 dimension differs from n");
  }
  if (!box.contains(x0)) throw StructuralError(name + ": x0 is infeasible");
}

EvalLedger::EvalLedger(int r, Metering metering, std::optional<long long> budget)
    : metering_(metering), budget_(budget), component_evals_(std::max(r, 1), 0) {}

long long EvalLedger::component_evals(ComponentIndex i) const {
  if (i < 1 || i > r()) throw StructuralError("ledger: component index out of range");
  return component_evals_[i - 1];
}

long long EvalLedger::total() const {
  return metering_ == Metering::kComponent ? component_total_ : fmin_evals_;
}

void EvalLedger::push_best(std::vector<TracePoint>& trace, long long t, double v) {
  if (!trace.empty() && !(v < trace.back().f_best)) return;
  if (!trace.empty() && trace.back().t == t) {
    trace.back().f_best = v;
  } else {
    trace.push_back({t, v});
  }
}

void EvalLedger::charge_component(ComponentIndex i, double value) {
  ++component_evals_[i - 1];
  ++component_total_;
  push_best(provisional_, total(), value);
}

void EvalLedger::charge_fmin() { ++fmin_evals_; }

void EvalLedger::certify(double fmin_value) { push_best(trace_, total(), fmin_value); }

namespace {

void check_query(const LovoProblem& problem, const Vector& x) {
  if (x.size() != problem.n) throw StructuralError("query dimension differs from n");
  if (!problem.box.contains(x)) {
    throw StructuralError(problem.name + ": oracle query outside the feasible box");
  }
}

double call_oracle(const LovoProblem& problem, ComponentIndex i, const Vector& x) {
  const double v = problem.components[i - 1](x);
  if (!std::isfinite(v)) throw OracleFailure(i, x);
  return v;
}

void check_budget(const EvalLedger& ledger) {
  if (ledger.exhausted()) throw BudgetExhausted("evaluation budget exhausted");
}

}  // namespace

double eval_component(const LovoProblem& problem, EvalLedger& ledger,
                      ComponentIndex i, const Vector& x) {
  if (i < 1 || i > problem.r) throw StructuralError("component index out of range");
  check_query(problem, x);
  if (ledger.metering() == Metering::kFmin) {
    return eval_fmin(problem, ledger, x).components[i - 1];
  }
  check_budget(ledger);
  const double v = call_oracle(problem, i, x);
  ledger.charge_component(i, v);
  if (problem.r == 1) ledger.certify(v);
  return v;
}

FminEvaluation eval_fmin(const LovoProblem& problem, EvalLedger& ledger,
                         const Vector& x, double tie_tolerance) {
  check_query(problem, x);
  check_budget(ledger);
  FminEvaluation out;
  out.components.resize(problem.r);
  for (ComponentIndex i = 1; i <= problem.r; ++i) {
    out.components[i - 1] = call_oracle(problem, i, x);
  }
  // Charge only after every component succeeded so a failure leaves the
  // ledger consistent.
  for (ComponentIndex i = 1; i <= problem.r; ++i) {
    ledger.charge_component(i, out.components[i - 1]);
  }
  ledger.charge_fmin();
  out.value = *std::min_element(out.components.begin(), out.components.end());
  for (ComponentIndex i = 1; i <= problem.r; ++i) {
    if (out.components[i - 1] <= out.value + tie_tolerance) out.imin.push_back(i);
  }
  ledger.certify(out.value);
  return out;
}

ComponentIndex choose_imin(std::span<const ComponentIndex> imin_set,
                           ComponentIndex previous_index) {
  if (imin_set.empty()) throw StructuralError("choose_imin: empty index set");
  if (std::find(imin_set.begin(), imin_set.end(), previous_index) != imin_set.end()) {
    return previous_index;
  }
  return *std::min_element(imin_set.begin(), imin_set.end());
}

}  // namespace lovo
