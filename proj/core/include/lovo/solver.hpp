#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lovo/model.hpp"
#include "lovo/problem.hpp"
#include "lovo/types.hpp"

namespace lovo {

/// Parameters of the trust-region LOVO iteration. Defaults for beta,
/// delta_min and nrhomax are the reference values; the remaining defaults
/// are ordinary trust-region choices.
struct SolverConfig {
  double beta = 1.0;  // criticality threshold: criticality when delta > beta * pi
  double delta0 = 1.0;
  double Delta0 = 1.0;
  double tau1 = 0.5;
  double tau2 = 0.95;
  double tau3 = 1.4;
  double tau4 = 2.0;
  double eta = 0.05;
  double eta1 = 0.25;
  double eta2 = 0.75;
  int gamma_max = 3;
  int nrhomax = 3;
  bool use_cheap_rho = true;  // allow rho-hat for up to nrhomax iterations in a row
  double delta_min = 1e-8;
  std::optional<int> maxalt;   // default n
  std::optional<int> maxcrit;  // default n
  /// In the ledger's metering unit. Default 1000 r (n+1) component calls,
  /// or 1000 (n+1) f_min calls under Metering::kFmin.
  std::optional<long long> budget;
  Metering metering = Metering::kComponent;
  double theta_diag = 0.01;
  double tie_tolerance = 0.0;

  /// Throws ConfigError if any ordering 0 < tau1 <= tau2 < 1 <= tau3 <= tau4,
  /// 0 <= eta < eta1 <= eta2, eta1 < 1, 0 < delta0 <= Delta0, ... fails.
  void validate() const;
};

enum class StepKind {
  kCriticality,
  kUnsuccessful,
  kAcceptableAdjusted,
  kAcceptablePlain,
  kSuccessfulAdjusted,
  kSuccessfulPlain,
  kAltmov,
};

std::string_view to_string(StepKind kind);

/// Snapshot of one iteration. Carries the inputs of the radii rules
/// (rho, swap, Gamma, ||d||) next to the radii before and after so a
/// history can be replayed.
struct StepOutcome {
  long long k = 0;
  StepKind kind = StepKind::kCriticality;
  bool evaluated = false;  // a trial point x + d was evaluated
  double rho = 0.0;
  bool rho_was_cheap = false;
  std::optional<double> rho_hat_check;  // rho-hat at the same point on full iterations
  bool accepted = false;
  bool index_swapped = false;
  bool radii_adjusted = false;
  bool altmov = false;
  bool sufficient_decrease = true;
  Vector d;
  double step_norm = 0.0;
  double pi = 0.0;
  double delta_before = 0.0;
  double Delta_before = 0.0;
  double delta_after = 0.0;
  double Delta_after = 0.0;
  int gamma_before = 0;
  int gamma_after = 0;
  ComponentIndex index = 0;  // i_{k+1}
  double fx = 0.0;           // f_{i_{k+1}}(x_{k+1})
  bool fx_certified = false;
  long long evals_total = 0;
};

struct SolverState {
  Vector x;
  ComponentIndex i = 0;
  double delta = 0.0;
  double Delta = 0.0;
  int gamma = 0;
  double fx = 0.0;            // f_i(x); equals f_min(x) when fx_certified
  bool fx_certified = false;
  SampleSet sample;
  LinearModel model;
  std::optional<LagrangeBasis> basis;
  double pi = 0.0;  // model stationarity of the installed model
  int rho_cheap_streak = 0;
  int consec_crit = 0;
  int consec_alt = 0;
  long long k = 0;
  bool warned_radii_order = false;
};

enum class SolveStatus { kSuccess, kStalled, kBudgetExhausted, kMaxcritExceeded };

std::string_view to_string(SolveStatus status);

struct SolveResult {
  Vector x_final;
  double f_final = 0.0;  // f_{final_index}(x_final); f_min when certified
  bool f_final_certified = false;
  ComponentIndex final_index = 0;
  SolveStatus status = SolveStatus::kStalled;
  long long iterations = 0;
  double delta_final = 0.0;
  double Delta_final = 0.0;
  double pi_final = 0.0;
  EvalLedger ledger;
  std::vector<StepOutcome> history;
};

using IterationCallback =
    std::function<void(long long k, const StepOutcome& outcome, const EvalLedger& ledger)>;

/// Evaluates f_min(x0), picks i_0, builds the initial sample and model.
SolverState initialize(const LovoProblem& problem, const SolverConfig& config,
                       EvalLedger& ledger);

/// One iteration: criticality phase, or trial step with acceptance, Gamma
/// reset, radii adjustment/update and sample maintenance.
StepOutcome iterate(SolverState& state, const LovoProblem& problem,
                    const SolverConfig& config, EvalLedger& ledger);

/// Stopping rules in priority order success, stalled, maxcrit, budget.
std::optional<SolveStatus> check_stopping(const SolverState& state,
                                          const SolverConfig& config,
                                          const EvalLedger& ledger);

/// Called with the full state after initialization and after every iteration.
using StateObserver = std::function<void(const SolverState& state, const EvalLedger& ledger)>;

SolveResult solve(const LovoProblem& problem, const SolverConfig& config,
                  const IterationCallback& callback = {}, const StateObserver& observer = {});

/// Effective budget for `problem` under `config`.
long long effective_budget(const LovoProblem& problem, const SolverConfig& config);

/// One JSON object per line: {k, kind, rho, rho_cheap, delta, Delta, index,
/// fx, evals_total, ...}.
std::string history_to_jsonl(const std::vector<StepOutcome>& history);
std::string outcome_to_json(const StepOutcome& outcome);

std::string config_to_json(const SolverConfig& config);
/// Missing keys keep their defaults; unknown keys are a ConfigError.
SolverConfig config_from_json(std::string_view text);

}  // namespace lovo
