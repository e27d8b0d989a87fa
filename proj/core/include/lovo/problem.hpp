#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lovo/box.hpp"
#include "lovo/types.hpp"

namespace lovo {

/// Deterministic black box f_i : R^n -> R. Must be finite on the box.
using ComponentFn = std::function<double(const Vector&)>;

/// Provenance of a generated problem, enough to regenerate it.
/// `params` is a JSON object serialized to text.
struct GeneratorSpec {
  std::string kind;
  std::string params = "{}";
};

/// min_{x in box} min{f_1(x), ..., f_r(x)}.
struct LovoProblem {
  std::string name;
  int n = 0;
  int r = 0;
  std::vector<ComponentFn> components;  // components[i-1] is f_i
  FeasibleBox box;
  Vector x0;
  GeneratorSpec generator;

  /// Throws StructuralError unless n, r, box, x0 and components agree and
  /// x0 is feasible.
  void validate() const;
};

/// How evaluations are charged against a budget.
///   kComponent: every component call costs 1; budget counts component calls.
///   kFmin: the oracle only exposes whole f_min evaluations; any request
///          evaluates all r components and costs 1 f_min evaluation.
enum class Metering { kComponent, kFmin };

struct TracePoint {
  long long t = 0;      // cumulative cost, in the ledger's metering unit
  double f_best = 0.0;  // best value so far
};

/// Evaluation accounting for one solver run. Not thread-safe; one ledger per
/// run.
class EvalLedger {
 public:
  explicit EvalLedger(int r = 1, Metering metering = Metering::kComponent,
                      std::optional<long long> budget = std::nullopt);

  int r() const { return static_cast<int>(component_evals_.size()); }
  Metering metering() const { return metering_; }
  std::optional<long long> budget() const { return budget_; }

  long long component_evals(ComponentIndex i) const;
  long long component_total() const { return component_total_; }
  long long fmin_evals() const { return fmin_evals_; }

  /// Cost spent so far in the metering unit (component calls or f_min calls).
  long long total() const;
  bool exhausted() const { return budget_ && total() >= *budget_; }

  /// Best certified f_min values; t strictly increasing, f_best decreasing.
  const std::vector<TracePoint>& trace() const { return trace_; }
  /// Best of every component value observed; an upper bound for the best
  /// f_min at the evaluated points.
  const std::vector<TracePoint>& provisional_trace() const { return provisional_; }

  // Bookkeeping hooks used by eval_component / eval_fmin.
  void charge_component(ComponentIndex i, double value);
  void charge_fmin();
  void certify(double fmin_value);

 private:
  static void push_best(std::vector<TracePoint>& trace, long long t, double v);

  Metering metering_;
  std::optional<long long> budget_;
  std::vector<long long> component_evals_;
  long long component_total_ = 0;
  long long fmin_evals_ = 0;
  std::vector<TracePoint> trace_;
  std::vector<TracePoint> provisional_;
};

/// f_i(x), metered. Throws StructuralError for a bad index or an infeasible
/// x, OracleFailure for a non-finite value and BudgetExhausted when the
/// ledger budget is already spent.
double eval_component(const LovoProblem& problem, EvalLedger& ledger,
                      ComponentIndex i, const Vector& x);

struct FminEvaluation {
  double value = 0.0;
  std::vector<ComponentIndex> imin;  // ascending
  std::vector<double> components;    // components[i-1] = f_i(x)
};

/// Evaluates every component at x and returns f_min(x) together with
/// I_min(x) = { i : f_i(x) <= f_min(x) + tie_tolerance }. The default
/// tolerance 0 means exact floating-point ties.
FminEvaluation eval_fmin(const LovoProblem& problem, EvalLedger& ledger,
                         const Vector& x, double tie_tolerance = 0.0);

/// Sticky-then-smallest selection from I_min.
ComponentIndex choose_imin(std::span<const ComponentIndex> imin_set,
                           ComponentIndex previous_index);

}  // namespace lovo
