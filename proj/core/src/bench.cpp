#include "lovo/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <thread>

#include "lovo/errors.hpp"

namespace lovo {

std::string_view to_string(BudgetRule rule) {
  return rule == BudgetRule::kComponent ? "component" : "fmin";
}

BudgetRule parse_budget_rule(std::string_view text) {
  if (text == "component") return BudgetRule::kComponent;
  if (text == "fmin") return BudgetRule::kFmin;
  throw ConfigError("budget rule must be 'component' or 'fmin'");
}

long long campaign_budget(BudgetRule rule, int r_p, int n_max) {
  const long long simplex = static_cast<long long>(n_max) + 1;
  return rule == BudgetRule::kComponent ? 100LL * r_p * simplex : 100LL * simplex;
}

namespace {

RunTrace run_one(const LovoProblem& source, const SolverConfig& base_config,
                 const CampaignOptions& options, int n_max) {
  RunTrace trace;
  trace.problem_name = source.name;
  trace.n_p = source.n;
  trace.r_p = source.r;
  trace.metering = options.rule == BudgetRule::kComponent ? Metering::kComponent : Metering::kFmin;
  trace.budget = campaign_budget(options.rule, source.r, n_max);
  trace.f0 = std::numeric_limits<double>::quiet_NaN();

  // Every oracle call is checked against the box independently of the
  // ledger's own guard.
  auto violations = std::make_shared<long long>(0);
  LovoProblem problem = source;
  for (auto& f : problem.components) {
    f = [inner = f, box = source.box, violations](const Vector& x) {
      if (!box.contains(x)) ++*violations;
      return inner(x);
    };
  }

  SolverConfig config = base_config;
  config.metering = trace.metering;
  config.budget = trace.budget;

  auto snapshot = [&](const SolverState&, const EvalLedger& ledger) {
    if (ledger.trace().size() != trace.samples.size()) trace.samples = ledger.trace();
    if (ledger.provisional_trace().size() != trace.provisional.size() ||
        (!trace.provisional.empty() &&
         ledger.provisional_trace().back().t != trace.provisional.back().t))
      trace.provisional = ledger.provisional_trace();
    trace.evals_used = ledger.total();
  };

  try {
    SolveResult result = solve(problem, config, {}, snapshot);
    trace.samples = result.ledger.trace();
    trace.provisional = result.ledger.provisional_trace();
    trace.evals_used = result.ledger.total();
    trace.status = std::string(to_string(result.status));
    trace.x_final = result.x_final;
    trace.final_index = result.final_index;
    trace.f_final = result.f_final;
    trace.f_final_certified = result.f_final_certified;
    if (options.keep_history) trace.history = std::move(result.history);
  } catch (const std::exception& e) {
    trace.status = "failed";
    trace.error = e.what();
  }
  if (!trace.samples.empty()) trace.f0 = trace.samples.front().f_best;
  trace.feasibility_violations = *violations;
  return trace;
}

}  // namespace

std::vector<RunTrace> run_campaign(const std::vector<LovoProblem>& problems,
                                   const SolverConfig& config, const CampaignOptions& options) {
  std::vector<RunTrace> out(problems.size());
  if (problems.empty()) return out;
  config.validate();
  int n_max = 0;
  for (const auto& p : problems) n_max = std::max(n_max, p.n);
  if (options.n_max) n_max = *options.n_max;

  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(problems.size())));
  if (threads == 1) {
    for (std::size_t k = 0; k < problems.size(); ++k)
      out[k] = run_one(problems[k], config, options, n_max);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < problems.size(); k = next++)
        out[k] = run_one(problems[k], config, options, n_max);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

FLTable best_values(const std::vector<const std::vector<RunTrace>*>& campaigns) {
  FLTable table;
  for (const auto* traces : campaigns) {
    for (const auto& t : *traces) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& s : t.samples) best = std::min(best, s.f_best);
      if (std::isfinite(t.f0)) best = std::min(best, t.f0);
      auto it = table.find(t.problem_name);
      if (it == table.end())
        table.emplace(t.problem_name, best);
      else
        it->second = std::min(it->second, best);
    }
  }
  return table;
}

FLTable best_values(const std::vector<RunTrace>& traces) { return best_values({&traces}); }

double solve_threshold(double f0, double f_L, double tau) { return f_L + tau * (f0 - f_L); }

double DataProfile::value_at(double kappa) const {
  double v = 0.0;
  for (const auto& s : steps) {
    if (s.kappa > kappa) break;
    v = s.fraction;
  }
  return v;
}

DataProfile data_profile(const std::vector<RunTrace>& traces, double tau,
                         const FLTable& f_L_table, std::string tag) {
  DataProfile profile;
  profile.tag = std::move(tag);
  profile.tau = tau;
  profile.num_problems = static_cast<int>(traces.size());
  std::vector<double> kappas;
  for (const auto& t : traces) {
    auto it = f_L_table.find(t.problem_name);
    if (it == f_L_table.end())
      throw ConfigError("data profile: no f_L for problem '" + t.problem_name + "'");
    SolvePoint sp{t.problem_name, std::nullopt};
    if (!t.samples.empty() && std::isfinite(t.f0)) {
      const double threshold = solve_threshold(t.f0, it->second, tau);
      const double unit = t.metering == Metering::kComponent
                              ? static_cast<double>(t.r_p) * (t.n_p + 1)
                              : static_cast<double>(t.n_p + 1);
      for (const auto& s : t.samples) {
        if (s.f_best <= threshold) {
          sp.kappa = static_cast<double>(s.t) / unit;
          kappas.push_back(*sp.kappa);
          break;
        }
      }
    }
    profile.solves.push_back(std::move(sp));
  }
  std::sort(kappas.begin(), kappas.end());
  const double total = std::max(1, profile.num_problems);
  for (std::size_t k = 0; k < kappas.size(); ++k) {
    const double fraction = static_cast<double>(k + 1) / total;
    if (!profile.steps.empty() && profile.steps.back().kappa == kappas[k])
      profile.steps.back().fraction = fraction;
    else
      profile.steps.push_back({kappas[k], fraction});
  }
  return profile;
}

std::vector<SimplexGradientRow> summarize_simplex_gradients(
    const DataProfile& profile, const std::vector<double>& fractions) {
  std::vector<SimplexGradientRow> rows;
  for (double f : fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("fractions must lie in (0, 1]");
    SimplexGradientRow row{f, std::numeric_limits<double>::infinity()};
    for (const auto& s : profile.steps) {
      // Fractions are ratios of small integers; allow for the rounding in k/|P|.
      if (s.fraction >= f - 1e-12) {
        row.kappa = s.kappa;
        break;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lovo
