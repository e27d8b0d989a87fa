#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lovo/bench.hpp"
#include "lovo/errors.hpp"
#include "lovo/model.hpp"
#include "lovo/solver.hpp"
#include "lovo/testsets.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw lovo::ConfigError("not a number: '" + item + "'");
    }
  }
  return out;
}

void write_problems(const std::vector<lovo::LovoProblem>& problems, const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& p : problems) lovo::write_text_file(dir / (p.name + ".json"), lovo::problem_to_json(p));
  std::cout << "wrote " << problems.size() << " problems to " << dir.string() << "\n";
}

std::vector<lovo::LovoProblem> load_problems(const fs::path& path) {
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& e : fs::directory_iterator(path))
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  std::vector<lovo::LovoProblem> out;
  for (const auto& f : files) out.push_back(lovo::problem_from_json(lovo::read_text_file(f)));
  return out;
}

lovo::SolverConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  return lovo::config_from_json(lovo::read_text_file(path));
}

json vec_json(const lovo::Vector& v) {
  json a = json::array();
  for (Eigen::Index j = 0; j < v.size(); ++j) a.push_back(v[j]);
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Derivative-free trust-region solver for low order-value optimization"};
  app.require_subcommand(1);

  // gen-qd
  auto* gen_qd = app.add_subcommand("gen-qd", "Generate QD problems");
  int qd_n = 10, qd_r = 10, qd_count = 50;
  std::uint64_t qd_seed = 1;
  std::string qd_out;
  gen_qd->add_option("--n", qd_n, "dimension")->capture_default_str();
  gen_qd->add_option("--r", qd_r, "component count")->capture_default_str();
  gen_qd->add_option("--seed", qd_seed, "64-bit seed")->capture_default_str();
  gen_qd->add_option("--count", qd_count, "number of problems")->capture_default_str();
  gen_qd->add_option("--out", qd_out, "output directory")->required();

  // gen-hs
  auto* gen_hs = app.add_subcommand("gen-hs", "Generate HS-style combinations");
  std::string hs_combo, hs_out;
  gen_hs->add_option("--combo", hs_combo, "comma-separated catalog ids (default: all combinations)");
  gen_hs->add_option("--out", hs_out, "output directory")->required();

  // gen-mw
  auto* gen_mw = app.add_subcommand("gen-mw", "Generate least-squares compositions");
  std::string mw_id, mw_out;
  int mw_n = 0, mw_r = 0;
  double mw_scale = 1.0;
  bool mw_list = false;
  gen_mw->add_option("--id", mw_id, "family id (default: the shipped campaign list)");
  gen_mw->add_option("--n", mw_n, "dimension");
  gen_mw->add_option("--r", mw_r, "component count");
  gen_mw->add_option("--scale", mw_scale, "start-point scale")->capture_default_str();
  gen_mw->add_flag("--list", mw_list, "print registry ids and exit");
  gen_mw->add_option("--out", mw_out, "output directory");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one problem");
  std::string solve_problem, solve_config, solve_history;
  int verbosity = 0;
  solve->add_option("--problem", solve_problem, "problem JSON file")->required();
  solve->add_option("--config", solve_config, "solver config JSON");
  solve->add_option("--history", solve_history, "write iteration history as JSON lines");
  solve->add_flag("-v,--verbose", verbosity, "dump the sample set after every iteration (stderr)");

  // bench
  auto* bench = app.add_subcommand("bench", "Benchmark campaigns and data profiles");
  bench->require_subcommand(1);
  auto* run = bench->add_subcommand("run", "Run a campaign");
  std::string run_problems, run_config, run_rule = "component", run_out;
  int run_threads = 1, run_nmax = 0;
  run->add_option("--problems", run_problems, "problem directory or file")->required();
  run->add_option("--config", run_config, "solver config JSON");
  run->add_option("--budget-rule", run_rule, "component | fmin")->capture_default_str();
  run->add_option("--n-max", run_nmax, "n_max for the budget (default: largest n)");
  run->add_option("--threads", run_threads, "worker threads")->capture_default_str();
  run->add_option("--out", run_out, "trace directory")->required();

  auto* profile = bench->add_subcommand("profile", "Compute data profiles");
  std::vector<std::string> prof_traces;
  std::string prof_tau = "1e-1,1e-3,1e-5,1e-7", prof_out, prof_fl;
  profile->add_option("--traces", prof_traces, "trace directories (one tag each)")->required();
  profile->add_option("--tau", prof_tau, "comma-separated tolerances")->capture_default_str();
  profile->add_option("--fl", prof_fl, "JSON object of f_L overrides by problem name");
  profile->add_option("--out", prof_out, "output directory")->required();

  auto* table = bench->add_subcommand("table", "Simplex gradients needed per solved fraction");
  std::string table_profile, table_fractions = "0.2,0.4,0.6,0.8,0.85", table_out;
  table->add_option("--profile", table_profile, "profile CSV")->required();
  table->add_option("--fractions", table_fractions, "comma-separated fractions")->capture_default_str();
  table->add_option("--out", table_out, "write the table as CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_qd) {
      write_problems(lovo::gen_qd(qd_n, qd_r, qd_seed, qd_count), qd_out);
    } else if (*gen_hs) {
      std::vector<lovo::LovoProblem> ps;
      if (hs_combo.empty()) {
        ps = lovo::gen_hs_all(lovo::default_hs_catalog());
      } else {
        std::vector<int> ids;
        for (double v : parse_list(hs_combo)) ids.push_back(static_cast<int>(v));
        ps.push_back(lovo::gen_hs(lovo::default_hs_catalog(), ids));
      }
      write_problems(ps, hs_out);
    } else if (*gen_mw) {
      if (mw_list) {
        for (const auto& f : lovo::mw_registry()) std::cout << f.id << "\n";
        return 0;
      }
      if (mw_out.empty()) throw lovo::ConfigError("--out is required");
      std::vector<lovo::LovoProblem> ps;
      if (mw_id.empty()) {
        for (const auto& s : lovo::default_mw_specs())
          ps.push_back(lovo::gen_mw(s.id, s.n, s.r, s.start_scale));
      } else {
        if (mw_n < 1 || mw_r < 1) throw lovo::ConfigError("--n and --r are required with --id");
        ps.push_back(lovo::gen_mw(mw_id, mw_n, mw_r, mw_scale));
      }
      write_problems(ps, mw_out);
    } else if (*solve) {
      const auto problems = load_problems(solve_problem);
      const lovo::SolverConfig config = load_config(solve_config);
      lovo::StateObserver observer;
      if (verbosity > 0)
        observer = [](const lovo::SolverState& s, const lovo::EvalLedger&) {
          std::cerr << "k=" << s.k << " sample=" << lovo::sample_to_json(s.sample) << "\n";
        };
      for (const auto& p : problems) {
        const lovo::SolveResult res = lovo::solve(p, config, {}, observer);
        if (!solve_history.empty()) lovo::write_text_file(solve_history, lovo::history_to_jsonl(res.history));
        json out = {{"problem", p.name},
                    {"status", std::string(lovo::to_string(res.status))},
                    {"f_final", res.f_final},
                    {"f_final_certified", res.f_final_certified},
                    {"final_index", res.final_index},
                    {"iterations", res.iterations},
                    {"evals", res.ledger.total()},
                    {"delta", res.delta_final},
                    {"Delta", res.Delta_final},
                    {"pi", res.pi_final},
                    {"x_final", vec_json(res.x_final)}};
        std::cout << out.dump() << "\n";
      }
    } else if (*run) {
      const auto problems = load_problems(run_problems);
      lovo::CampaignOptions opts;
      opts.rule = lovo::parse_budget_rule(run_rule);
      opts.threads = run_threads;
      if (run_nmax > 0) opts.n_max = run_nmax;
      const auto traces = lovo::run_campaign(problems, load_config(run_config), opts);
      lovo::write_traces(traces, run_out);
      int failed = 0;
      long long violations = 0;
      for (const auto& t : traces) {
        failed += t.status == "failed";
        violations += t.feasibility_violations;
      }
      std::cout << "ran " << traces.size() << " problems (" << failed << " failed, " << violations
                << " feasibility violations); traces in " << run_out << "\n";
    } else if (*profile) {
      const std::vector<double> taus = parse_list(prof_tau);
      std::vector<std::vector<lovo::RunTrace>> campaigns;
      std::vector<std::string> tags;
      for (const auto& d : prof_traces) {
        campaigns.push_back(lovo::read_traces(d));
        std::string tag = fs::path(d).lexically_normal().filename().string();
        if (tag.empty()) tag = fs::path(d).lexically_normal().parent_path().filename().string();
        tags.push_back(tag);
      }
      std::vector<const std::vector<lovo::RunTrace>*> ptrs;
      for (const auto& c : campaigns) ptrs.push_back(&c);
      lovo::FLTable fl = lovo::best_values(ptrs);
      if (!prof_fl.empty()) {
        const json over = json::parse(lovo::read_text_file(prof_fl));
        for (const auto& [name, v] : over.items()) {
          const double value = v.get<double>();
          auto it = fl.find(name);
          fl[name] = it == fl.end() ? value : std::min(it->second, value);
        }
      }
      fs::create_directories(prof_out);
      std::vector<lovo::DataProfile> all;
      for (std::size_t c = 0; c < campaigns.size(); ++c) {
        std::vector<lovo::DataProfile> mine;
        for (double tau : taus) mine.push_back(lovo::data_profile(campaigns[c], tau, fl, tags[c]));
        lovo::emit(mine, lovo::EmitFormat::kCsv, fs::path(prof_out) / (tags[c] + ".csv"));
        lovo::emit(mine, lovo::EmitFormat::kJson, fs::path(prof_out) / (tags[c] + ".json"));
        lovo::emit(mine, lovo::EmitFormat::kSvg, fs::path(prof_out) / (tags[c] + ".svg"));
        all.insert(all.end(), mine.begin(), mine.end());
      }
      lovo::emit(all, lovo::EmitFormat::kSvg, fs::path(prof_out) / "profiles.svg");
      json fl_json = json::object();
      for (const auto& [k, v] : fl) fl_json[k] = v;
      lovo::write_text_file(fs::path(prof_out) / "f_L.json", fl_json.dump(2) + "\n");
      std::cout << "wrote " << all.size() << " profiles to " << prof_out << "\n";
    } else if (*table) {
      const auto profiles = lovo::profiles_from_csv(lovo::read_text_file(table_profile));
      const std::vector<double> fractions = parse_list(table_fractions);
      std::vector<std::pair<double, std::vector<lovo::SimplexGradientRow>>> rows;
      for (const auto& p : profiles) rows.emplace_back(p.tau, lovo::summarize_simplex_gradients(p, fractions));
      if (!table_out.empty()) lovo::emit_table(rows, table_out);
      std::cout << "tau";
      for (double f : fractions) std::cout << "\t" << f * 100 << "%";
      std::cout << "\n";
      for (const auto& [tau, rs] : rows) {
        std::cout << tau;
        for (const auto& r : rs) {
          if (std::isinf(r.kappa))
            std::cout << "\tinf";
          else
            std::cout << "\t" << std::ceil(r.kappa);
        }
        std::cout << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "lovo: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
