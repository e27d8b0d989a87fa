#include "lovo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "lovo/errors.hpp"
#include "lovo/log.hpp"
#include "lovo/subproblem.hpp"

namespace lovo {

void SolverConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid solver config: ") + what);
  };
  require(beta > 0.0, "beta > 0");
  require(delta0 > 0.0 && delta0 <= Delta0, "0 < delta0 <= Delta0");
  require(tau1 > 0.0 && tau1 <= tau2 && tau2 < 1.0 && 1.0 <= tau3 && tau3 <= tau4,
          "0 < tau1 <= tau2 < 1 <= tau3 <= tau4");
  require(eta >= 0.0 && eta < eta1 && eta1 <= eta2, "0 <= eta < eta1 <= eta2");
  require(eta1 > 0.0 && eta1 < 1.0, "eta1 in (0, 1)");
  require(gamma_max >= 1, "gamma_max >= 1");
  require(nrhomax >= 1, "nrhomax >= 1");
  require(delta_min > 0.0, "delta_min > 0");
  require(!maxalt || *maxalt >= 0, "maxalt >= 0");
  require(!maxcrit || *maxcrit >= 0, "maxcrit >= 0");
  require(!budget || *budget > 0, "budget > 0");
  require(theta_diag > 0.0, "theta_diag > 0");
  require(tie_tolerance >= 0.0, "tie_tolerance >= 0");
}

std::string_view to_string(StepKind kind) {
  switch (kind) {
    case StepKind::kCriticality: return "criticality";
    case StepKind::kUnsuccessful: return "unsuccessful";
    case StepKind::kAcceptableAdjusted: return "acceptable_adjusted";
    case StepKind::kAcceptablePlain: return "acceptable_plain";
    case StepKind::kSuccessfulAdjusted: return "successful_adjusted";
    case StepKind::kSuccessfulPlain: return "successful_plain";
    case StepKind::kAltmov: return "altmov";
  }
  return "unknown";
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kSuccess: return "success";
    case SolveStatus::kStalled: return "stalled";
    case SolveStatus::kBudgetExhausted: return "budget_exhausted";
    case SolveStatus::kMaxcritExceeded: return "maxcrit_exceeded";
  }
  return "unknown";
}

long long effective_budget(const LovoProblem& problem, const SolverConfig& config) {
  if (config.budget) return *config.budget;
  const long long simplex = problem.n + 1;
  return config.metering == Metering::kComponent ? 1000LL * problem.r * simplex
                                                 : 1000LL * simplex;
}

namespace {

void install_fit(SolverState& state, const FeasibleBox& box, SampleSet sample,
                 ModelFit fit) {
  state.sample = std::move(sample);
  state.model = std::move(fit.model);
  state.basis = std::move(fit.basis);
  state.pi = model_stationarity(state.model, box);
}

// Fresh coordinate sample of radius `radius` around the iterate, reusing the
// known value at the base point.
void resample(SolverState& state, const LovoProblem& problem, EvalLedger& ledger,
              double radius) {
  SampleSet sample = initial_sample(problem.box, state.x, radius);
  sample.values[0] = state.fx;
  evaluate_sample(sample, problem, ledger, state.i);
  ModelFit fit = fit_model(sample);
  install_fit(state, problem.box, std::move(sample), std::move(fit));
}

// Refit after a sample change; a singular system triggers a fresh sample.
void refit_or_resample(SolverState& state, SampleSet sample, const LovoProblem& problem,
                       EvalLedger& ledger, double radius) {
  try {
    ModelFit fit = fit_model(sample);
    install_fit(state, problem.box, std::move(sample), std::move(fit));
  } catch (const GeometryFailure&) {
    resample(state, problem, ledger, radius);
  }
}

double sample_radius(const SampleSet& sample) {
  double r = 0.0;
  for (const auto& y : sample.points) r = std::max(r, (y - sample.base()).norm());
  return r;
}

}  // namespace

SolverState initialize(const LovoProblem& problem, const SolverConfig& config,
                       EvalLedger& ledger) {
  problem.validate();
  config.validate();
  SolverState state;
  state.x = problem.x0;
  const FminEvaluation f0 = eval_fmin(problem, ledger, state.x, config.tie_tolerance);
  state.i = f0.imin.front();
  state.fx = f0.value;
  state.fx_certified = true;
  state.delta = config.delta0;
  state.Delta = config.Delta0;
  resample(state, problem, ledger, config.delta0);
  return state;
}

StepOutcome iterate(SolverState& state, const LovoProblem& problem,
                    const SolverConfig& config, EvalLedger& ledger) {
  StepOutcome out;
  out.k = state.k;
  out.delta_before = state.delta;
  out.Delta_before = state.Delta;
  out.gamma_before = state.gamma;
  out.d = Vector::Zero(problem.n);

  const double pi = state.pi;
  out.pi = pi;

  if (state.delta > config.beta * pi) {
    // Criticality phase.
    state.delta *= config.tau1;
    state.Delta *= 0.5 * (config.tau1 + config.tau2);
    ++state.consec_crit;
    state.consec_alt = 0;
    out.kind = StepKind::kCriticality;
    out.rho = 0.0;
    resample(state, problem, ledger, state.delta);
  } else {
    state.consec_crit = 0;
    const double delta_k = state.delta;
    const double Delta_k = state.Delta;
    const ComponentIndex i_k = state.i;

    Vector d = trsbox_linear(state.model, problem.box, Delta_k);
    const Vector x_trial = state.x + d;
    const double pred = -state.model.g.dot(d);
    out.d = d;
    out.step_norm = d.norm();
    out.sufficient_decrease =
        check_sufficient_decrease(state.model, d, pi, Delta_k, config.theta_diag);
    if (!out.sufficient_decrease) {
      std::ostringstream msg;
      msg << "iteration " << state.k << ": trust-region step misses the sufficient "
          << "decrease condition (pi=" << pi << ", Delta=" << Delta_k << ")";
      warn(msg.str());
    }

    double f_trial_i = 0.0;
    std::optional<FminEvaluation> full;
    bool counted_cheap = false;
    if (pred > 0.0) {
      out.evaluated = true;
      const bool cheap = config.use_cheap_rho && state.rho_cheap_streak < config.nrhomax;
      if (cheap) {
        f_trial_i = eval_component(problem, ledger, i_k, x_trial);
        out.rho = (state.fx - f_trial_i) / pred;
        out.rho_was_cheap = true;
        ++state.rho_cheap_streak;
        counted_cheap = true;
      } else {
        full = eval_fmin(problem, ledger, x_trial, config.tie_tolerance);
        f_trial_i = full->components[i_k - 1];
        out.rho = (state.fx - full->value) / pred;
        out.rho_hat_check = (state.fx - f_trial_i) / pred;
        state.rho_cheap_streak = 0;
      }
    } else {
      out.rho = -1.0;  // no model decrease available; treated as a rejection
    }

    out.accepted = out.evaluated && out.rho >= config.eta;
    ComponentIndex i_next = i_k;
    if (out.accepted && full) i_next = choose_imin(full->imin, i_k);
    out.index_swapped = i_next != i_k;

    // Gamma reset, then radii adjustment or radii update.
    if (out.rho >= config.eta1) state.gamma = 0;
    if (out.accepted && out.index_swapped && state.gamma <= config.gamma_max) {
      state.delta = config.tau4 * delta_k;
      state.Delta = config.tau4 * Delta_k;
      ++state.gamma;
      out.radii_adjusted = true;
    } else if (out.rho < config.eta1) {
      state.delta = config.tau1 * delta_k;
      state.Delta = config.tau1 * Delta_k;
    } else if (out.rho > config.eta2 && out.step_norm >= Delta_k * (1.0 - 1e-10)) {
      state.delta = config.tau3 * delta_k;
      state.Delta = config.tau3 * Delta_k;
    }

    // Sample maintenance: insert the trial point, or improve geometry.
    if (out.accepted) {
      SampleSet next;
      try {
        next = exchange_point(state.sample, x_trial, f_trial_i, BasePolicy::kForceNewBase);
      } catch (const RejectionError&) {
        next = initial_sample(problem.box, x_trial, state.delta);
        next.values[0] = f_trial_i;
        evaluate_sample(next, problem, ledger, i_k);
      }
      state.x = x_trial;
      state.fx = f_trial_i;
      state.fx_certified = full.has_value() || problem.r == 1;
      next.model_index = i_k;
      if (out.index_swapped) {
        try {
          auto [rebuilt, fit] = rebuild_for_index(next, problem, ledger, i_next);
          state.i = i_next;
          state.fx = rebuilt.values[0];
          install_fit(state, problem.box, std::move(rebuilt), std::move(fit));
        } catch (const GeometryFailure&) {
          state.i = i_next;
          state.fx = full->components[i_next - 1];
          resample(state, problem, ledger, state.delta);
        }
        state.fx_certified = true;
      } else {
        refit_or_resample(state, std::move(next), problem, ledger, state.delta);
      }
    } else if (out.evaluated && out.rho > 0.0 && out.step_norm >= 0.5 * Delta_k) {
      try {
        SampleSet next =
            exchange_point(state.sample, x_trial, f_trial_i, BasePolicy::kKeepBase);
        refit_or_resample(state, std::move(next), problem, ledger, state.delta);
      } catch (const RejectionError&) {
        resample(state, problem, ledger, state.delta);
      }
    } else {
      out.altmov = true;
      if (counted_cheap) --state.rho_cheap_streak;
      const int target = select_target_for_altmov(state.sample);
      AltmovStep alt;
      try {
        alt = altmov_linear(state.sample, *state.basis, problem.box, state.delta, target);
      } catch (const GeometryFailure&) {
        alt.flat = true;
      }
      if (!alt.flat) {
        const Vector x_alt = state.x + alt.d;
        const double f_alt = eval_component(problem, ledger, state.i, x_alt);
        refit_or_resample(state, replace_point(state.sample, target, x_alt, f_alt), problem,
                          ledger, state.delta);
      }
      ++state.consec_alt;
    }
    if (!out.altmov) state.consec_alt = 0;

    if (out.accepted) {
      const bool successful = out.rho >= config.eta1;
      if (successful) {
        out.kind = out.radii_adjusted ? StepKind::kSuccessfulAdjusted
                                      : StepKind::kSuccessfulPlain;
      } else {
        out.kind = out.radii_adjusted ? StepKind::kAcceptableAdjusted
                                      : StepKind::kAcceptablePlain;
      }
    } else {
      out.kind = out.altmov ? StepKind::kAltmov : StepKind::kUnsuccessful;
    }
  }

  if (state.delta > state.Delta && !state.warned_radii_order) {
    state.warned_radii_order = true;
    warn("sample radius exceeds trust-region radius");
  }

  out.delta_after = state.delta;
  out.Delta_after = state.Delta;
  out.gamma_after = state.gamma;
  out.index = state.i;
  out.fx = state.fx;
  out.fx_certified = state.fx_certified;
  out.evals_total = ledger.total();
  ++state.k;
  return out;
}

std::optional<SolveStatus> check_stopping(const SolverState& state,
                                          const SolverConfig& config,
                                          const EvalLedger& ledger) {
  const int n = static_cast<int>(state.x.size());
  const int maxalt = config.maxalt.value_or(n);
  const int maxcrit = config.maxcrit.value_or(n);
  const double dmin = config.delta_min;
  if (state.delta <= dmin && config.beta * state.pi <= dmin) return SolveStatus::kSuccess;
  if (state.delta <= dmin && state.Delta <= dmin && state.consec_alt >= maxalt) {
    return SolveStatus::kStalled;
  }
  if (state.consec_crit > maxcrit) return SolveStatus::kMaxcritExceeded;
  if (ledger.exhausted()) return SolveStatus::kBudgetExhausted;
  return std::nullopt;
}

SolveResult solve(const LovoProblem& problem, const SolverConfig& config,
                  const IterationCallback& callback, const StateObserver& observer) {
  config.validate();
  problem.validate();
  SolveResult result;
  result.ledger = EvalLedger(problem.r, config.metering, effective_budget(problem, config));
  EvalLedger& ledger = result.ledger;

  SolverState state;
  std::optional<SolveStatus> status;
  try {
    state = initialize(problem, config, ledger);
  } catch (const BudgetExhausted&) {
    result.x_final = problem.x0;
    result.status = SolveStatus::kBudgetExhausted;
    return result;
  }
  if (observer) observer(state, ledger);

  while (!status) {
    try {
      StepOutcome outcome = iterate(state, problem, config, ledger);
      if (callback) callback(outcome.k, outcome, ledger);
      if (observer) observer(state, ledger);
      result.history.push_back(std::move(outcome));
      status = check_stopping(state, config, ledger);
      // success needs a model built inside the sample radius; older points
      // may sit far outside it after a run of radius reductions
      if (status == SolveStatus::kSuccess &&
          sample_radius(state.sample) > state.delta * (1.0 + 1e-12)) {
        resample(state, problem, ledger, state.delta);
        status = check_stopping(state, config, ledger);
      }
    } catch (const BudgetExhausted&) {
      status = SolveStatus::kBudgetExhausted;
    } catch (const GeometryFailure& e) {
      warn(std::string("unrecoverable sample geometry: ") + e.what());
      status = SolveStatus::kStalled;
    }
  }

  result.final_index = state.i;
  if (!state.fx_certified && *status != SolveStatus::kBudgetExhausted) {
    try {
      const FminEvaluation fe = eval_fmin(problem, ledger, state.x, config.tie_tolerance);
      state.fx = fe.value;
      state.fx_certified = true;
      result.final_index = choose_imin(fe.imin, state.i);
    } catch (const BudgetExhausted&) {
    }
  }
  result.x_final = state.x;
  result.f_final = state.fx;
  result.f_final_certified = state.fx_certified;
  result.status = *status;
  result.iterations = state.k;
  result.delta_final = state.delta;
  result.Delta_final = state.Delta;
  result.pi_final = state.pi;
  return result;
}

}  // namespace lovo
