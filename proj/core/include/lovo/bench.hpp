#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lovo/problem.hpp"
#include "lovo/solver.hpp"

namespace lovo {

enum class BudgetRule { kComponent, kFmin };

std::string_view to_string(BudgetRule rule);
BudgetRule parse_budget_rule(std::string_view text);

/// 100 r_p (n_max+1) component calls, or 100 (n_max+1) f_min evaluations.
long long campaign_budget(BudgetRule rule, int r_p, int n_max);

struct RunTrace {
  std::string problem_name;
  int n_p = 0;
  int r_p = 0;
  Metering metering = Metering::kComponent;
  long long budget = 0;
  std::string status;          // solve status, or "failed"
  std::string error;           // message when status == "failed"
  double f0 = 0.0;             // f_min(x0)
  long long evals_used = 0;    // in the metering unit
  long long feasibility_violations = 0;
  std::vector<TracePoint> samples;      // certified f_min bests
  std::vector<TracePoint> provisional;  // best component values seen

  // Filled when the run completes.
  Vector x_final;
  ComponentIndex final_index = 0;
  double f_final = 0.0;
  bool f_final_certified = false;
  std::vector<StepOutcome> history;  // only with CampaignOptions::keep_history
};

struct CampaignOptions {
  BudgetRule rule = BudgetRule::kComponent;
  std::optional<int> n_max;  // default: largest n in the problem list
  int threads = 1;
  bool keep_history = false;
};

/// One trace per problem, in input order. Solver failures are caught and
/// flagged with status "failed"; the trace keeps everything recorded up to
/// the last completed iteration.
std::vector<RunTrace> run_campaign(const std::vector<LovoProblem>& problems,
                                   const SolverConfig& config, const CampaignOptions& options);

using FLTable = std::map<std::string, double>;

/// Per-problem minimum of every certified value (including f0) across all
/// traces.
FLTable best_values(const std::vector<const std::vector<RunTrace>*>& campaigns);
FLTable best_values(const std::vector<RunTrace>& traces);

double solve_threshold(double f0, double f_L, double tau);

struct SolvePoint {
  std::string problem;
  std::optional<double> kappa;  // unsolved within the trace when empty
};

struct ProfileStep {
  double kappa = 0.0;
  double fraction = 0.0;
};

struct DataProfile {
  std::string tag;
  double tau = 0.0;
  int num_problems = 0;
  std::vector<SolvePoint> solves;
  std::vector<ProfileStep> steps;  // kappa strictly increasing, fraction increasing

  double value_at(double kappa) const;
};

/// Throws ConfigError when f_L_table has no entry for a traced problem.
DataProfile data_profile(const std::vector<RunTrace>& traces, double tau,
                         const FLTable& f_L_table, std::string tag = {});

struct SimplexGradientRow {
  double fraction = 0.0;
  double kappa = 0.0;  // +inf when the curve never reaches the fraction
};

std::vector<SimplexGradientRow> summarize_simplex_gradients(
    const DataProfile& profile, const std::vector<double>& fractions);

enum class EmitFormat { kCsv, kJson, kSvg };
EmitFormat parse_emit_format(std::string_view text);

/// Rendering; output is a pure function of the inputs.
std::string profiles_to_csv(const std::vector<DataProfile>& profiles);
std::string profiles_to_json(const std::vector<DataProfile>& profiles);
std::string profiles_to_svg(const std::vector<DataProfile>& profiles);
std::string table_to_csv(const std::vector<std::pair<double, std::vector<SimplexGradientRow>>>& rows);

/// Parses the CSV written by profiles_to_csv; only steps are recovered.
std::vector<DataProfile> profiles_from_csv(std::string_view text);

/// Writes the rendering to `path`; IoError when the file cannot be written.
void emit(const std::vector<DataProfile>& profiles, EmitFormat format,
          const std::filesystem::path& path);
void emit_table(const std::vector<std::pair<double, std::vector<SimplexGradientRow>>>& rows,
                const std::filesystem::path& path);

/// `<dir>/<name>.csv` with header t,f_best, `<dir>/<name>.provisional.csv`,
/// and `<dir>/manifest.json` listing {problem, n, r, budget, status, ...}.
void write_traces(const std::vector<RunTrace>& traces, const std::filesystem::path& dir);
std::vector<RunTrace> read_traces(const std::filesystem::path& dir);

std::string trace_to_csv(const std::vector<TracePoint>& samples);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace lovo
