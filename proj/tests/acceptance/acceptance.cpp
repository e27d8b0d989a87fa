// Acceptance run: prints one PASS/FAIL line per criterion, exits nonzero on
// any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "lovo/bench.hpp"
#include "lovo/log.hpp"
#include "lovo/model.hpp"
#include "lovo/rng.hpp"
#include "lovo/solver.hpp"
#include "lovo/subproblem.hpp"
#include "lovo/testsets.hpp"

using namespace lovo;

namespace {

constexpr std::uint64_t kQdSeed = 20240601;
constexpr int kQdN = 10;
constexpr int kQdCount = 50;
constexpr double kTau = 1e-5;
const int kRs[] = {10, 25, 50, 75, 100};

int failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int threads() { return std::max(1u, std::thread::hardware_concurrency()); }

struct QdCampaign {
  int r = 0;
  std::vector<RunTrace> primary, reference;
  FLTable fl;
  DataProfile profile;
};

std::vector<QdCampaign> run_qd_campaigns() {
  std::vector<QdCampaign> out;
  SolverConfig primary, reference;
  reference.use_cheap_rho = false;
  CampaignOptions opt;
  opt.rule = BudgetRule::kComponent;
  opt.n_max = kQdN;
  opt.threads = threads();
  opt.keep_history = true;
  for (int r : kRs) {
    const auto problems = gen_qd(kQdN, r, kQdSeed, kQdCount);
    QdCampaign c;
    c.r = r;
    c.primary = run_campaign(problems, primary, opt);
    c.reference = run_campaign(problems, reference, opt);
    c.fl = best_values(std::vector<const std::vector<RunTrace>*>{&c.primary, &c.reference});
    c.profile = data_profile(c.primary, kTau, c.fl, "qd" + std::to_string(r));
    out.push_back(std::move(c));
  }
  return out;
}

void criterion1(const std::vector<QdCampaign>& cs) {
  bool ok = true;
  std::string detail;
  for (const auto& c : cs) {
    const double v = c.profile.value_at(100.0);
    ok &= v >= 0.75;
    detail += " QD" + std::to_string(c.r) + "=" + fmt("%.2f", v);
  }
  report(1, ok, "solved fraction at kappa=100, tau=1e-5, >= 0.75 for every r:" + detail);
}

void criterion2(const std::vector<QdCampaign>& cs) {
  bool ok = true;
  std::string detail;
  double prev = std::numeric_limits<double>::infinity();
  double qd10 = 0.0;
  for (const auto& c : cs) {
    const double k = summarize_simplex_gradients(c.profile, {0.6})[0].kappa;
    ok &= k <= prev;
    prev = k;
    if (c.r == 10) qd10 = k;
    detail += " QD" + std::to_string(c.r) + "=" + (std::isinf(k) ? "inf" : fmt("%.0f", std::ceil(k)));
  }
  const bool band = qd10 >= 3.5 && qd10 <= 14.0;
  report(2, ok && band,
         "60% simplex-gradient counts nonincreasing in r and QD10 in [3.5, 14]:" + detail +
             (ok ? "" : " (not monotone)") + (band ? "" : " (QD10 outside band)"));
}

void criterion3(const std::vector<QdCampaign>& cs) {
  int checked = 0, bad = 0;
  double worst = 0.0;
  int profile_solved = 0, profile_solved_bad = 0;
  for (const auto& c : cs) {
    for (int k = 0; k < kQdCount; ++k) {
      const RunTrace& t = c.primary[k];
      if (t.x_final.size() != kQdN) continue;
      const auto inst = make_qd_instance(kQdN, c.r, kQdSeed, k);
      const FeasibleBox box = FeasibleBox::uniform(kQdN, 0.0, 10.0);
      const Vector g = qd_gradient(inst, t.final_index, t.x_final);
      const double pif = (box.project(t.x_final - g) - t.x_final).norm();
      if (c.profile.solves[k].kappa) {
        ++profile_solved;
        profile_solved_bad += pif >= 1e-4;
      }
      if (t.status != "success") continue;
      ++checked;
      worst = std::max(worst, pif);
      bad += pif >= 1e-4;
    }
  }
  report(3, checked > 0 && bad == 0,
         "projected analytic gradient < 1e-4 at x_final of every run ending in success: " +
             std::to_string(checked - bad) + "/" + std::to_string(checked) + " ok, worst " +
             fmt("%.3g", worst) + " (budget-solved runs within tolerance at stop: " +
             std::to_string(profile_solved - profile_solved_bad) + "/" +
             std::to_string(profile_solved) + ")");
}

bool same_sequence(const std::vector<StepOutcome>& a, const std::vector<StepOutcome>& b) {
  if (a.size() != b.size()) return false;
  for (size_t k = 0; k < a.size(); ++k)
    if (a[k].kind != b[k].kind || a[k].delta_after != b[k].delta_after ||
        a[k].Delta_after != b[k].Delta_after || a[k].d != b[k].d || a[k].fx != b[k].fx)
      return false;
  return true;
}

void criterion4() {
  int cases = 0, ok_cases = 0;
  double worst = 0.0;
  bool identical = true;
  for (int n : {2, 5, 10}) {
    Rng rng(31, static_cast<std::uint64_t>(n));
    for (int variant = 0; variant < 2; ++variant) {
      Vector c(n);
      for (int j = 0; j < n; ++j) c[j] = rng.uniform(1.0, 9.0);
      if (variant == 1)
        for (int j = 0; j < n; j += 2) c[j] = (j / 2) % 2 == 0 ? 0.0 : 10.0;
      const FeasibleBox box = FeasibleBox::uniform(n, 0.0, 10.0);
      const auto p = sphere_problem(c, box, Vector::Constant(n, 5.0));
      const double fstar = (box.project(c) - c).squaredNorm();
      SolverConfig with, without;
      with.budget = without.budget = 200LL * (n + 1);
      without.use_cheap_rho = false;
      const auto a = solve(p, with);
      const auto b = solve(p, without);
      for (const auto* res : {&a, &b}) {
        const double gap = (res->x_final - c).squaredNorm() - fstar;
        worst = std::max(worst, gap);
        ++cases;
        ok_cases += gap <= 1e-6 && res->ledger.component_total() <= 200LL * (n + 1);
      }
      identical &= same_sequence(a.history, b.history);
    }
  }
  report(4, ok_cases == cases && identical,
         "sphere n in {2,5,10}, interior and boundary centre, 200(n+1) evaluations: " +
             std::to_string(ok_cases) + "/" + std::to_string(cases) + " within 1e-6 (worst gap " +
             fmt("%.3g", worst) + "), rho-hat on/off sequences " +
             (identical ? "identical" : "differ"));
}

struct LinearInstance {
  FeasibleBox box;
  LinearModel model;
  double radius;
};

LinearInstance random_linear(Rng& rng, int n) {
  Vector lo(n), hi(n), base(n), g(n);
  for (int j = 0; j < n; ++j) {
    lo[j] = -rng.uniform(0.0, 5.0);
    hi[j] = rng.uniform(0.0, 5.0) + 1e-3;
    const double w = rng.uniform01();
    base[j] = w < 0.15 ? lo[j] : w < 0.3 ? hi[j] : rng.uniform(lo[j], hi[j]);
    // Box-Muller keeps the draw sequence explicit
    const double u1 = 1.0 - rng.uniform01(), u2 = rng.uniform01();
    g[j] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }
  return {FeasibleBox(lo, hi), LinearModel{0.0, g, base}, std::pow(10.0, rng.uniform(-2.0, 1.0))};
}

void criterion5() {
  Rng rng(5, 0);
  int pass = 0;
  for (int k = 0; k < 1000; ++k) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 10);
    const auto inst = random_linear(rng, n);
    const Vector d = trsbox_linear(inst.model, inst.box, inst.radius);
    const double pi = model_stationarity(inst.model, inst.box);
    pass += check_sufficient_decrease(inst.model, d, pi, inst.radius, 0.01);
  }
  report(5, pass == 1000, "sufficient decrease with theta=0.01 on random linear subproblems: " +
                              std::to_string(pass) + "/1000");
}

// Exact minimum of g.e over {lo <= e <= hi, |e| <= R} by enumerating which
// coordinates sit at a bound; the free ones follow -g scaled to the sphere or
// stay at the free minimizer when the ball is inactive.
double enumerate_minimum(const Vector& g, const Vector& lo, const Vector& hi, double R) {
  const int n = static_cast<int>(g.size());
  int patterns = 1;
  for (int j = 0; j < n; ++j) patterns *= 3;
  double best = std::numeric_limits<double>::infinity();
  for (int p = 0; p < patterns; ++p) {
    Vector e = Vector::Zero(n);
    std::vector<int> free;
    int code = p;
    double fixed_sq = 0.0;
    for (int j = 0; j < n; ++j, code /= 3) {
      const int s = code % 3;
      if (s == 0) e[j] = lo[j];
      else if (s == 1) e[j] = hi[j];
      else free.push_back(j);
      if (s != 2) fixed_sq += e[j] * e[j];
    }
    if (fixed_sq > R * R * (1 + 1e-12)) continue;
    double gf = 0.0;
    for (int j : free) gf += g[j] * g[j];
    gf = std::sqrt(gf);
    const double rem = std::sqrt(std::max(0.0, R * R - fixed_sq));
    for (int j : free) e[j] = gf > 0 ? -rem * g[j] / gf : 0.0;
    bool feasible = true;
    for (int j : free) feasible &= e[j] >= lo[j] - 1e-12 && e[j] <= hi[j] + 1e-12;
    if (feasible) best = std::min(best, g.dot(e));
  }
  return best;
}

void criterion6() {
  Rng rng(6, 0);
  int match = 0;
  double worst_grid = 0.0, worst_exact = 0.0, worst_gap = 0.0;
  for (int k = 0; k < 200; ++k) {
    const int n = 1 + k % 3;
    auto inst = random_linear(rng, n);
    const Vector& b = inst.model.base;
    const Vector& g = inst.model.g;
    const double R = inst.radius;
    const Vector d = trsbox_linear(inst.model, inst.box, R);
    const double trs = g.dot(d);
    const double tol = 1e-6 * g.norm() * R;
    const Vector lo = inst.box.lower() - b, hi = inst.box.upper() - b;

    const int per_axis = n == 1 ? 1000000 : n == 2 ? 1000 : 100;
    double grid = 0.0;  // e = 0 is always feasible
    Vector e(n);
    std::vector<int> idx(n, 0);
    for (bool more = true; more;) {
      for (int j = 0; j < n; ++j) e[j] = -R + 2.0 * R * idx[j] / (per_axis - 1);
      if (e.squaredNorm() <= R * R && (e.array() >= lo.array()).all() && (e.array() <= hi.array()).all())
        grid = std::min(grid, g.dot(e));
      int j = 0;
      while (j < n && ++idx[j] == per_axis) idx[j++] = 0;
      more = j < n;
    }
    const double exact = enumerate_minimum(g, lo, hi, R);
    const bool feasible = inst.box.contains(b + d) && d.norm() <= R * (1 + 1e-12);
    worst_grid = std::max(worst_grid, (trs - grid) / (g.norm() * R));
    worst_exact = std::max(worst_exact, std::abs(trs - exact) / (g.norm() * R));
    worst_gap = std::max(worst_gap, (grid - trs) / (g.norm() * R));
    match += feasible && trs <= grid + tol && std::abs(trs - exact) <= tol;
  }
  report(6, match == 200,
         "trsbox vs 1e6-point grid on box and ball, n <= 3: " + std::to_string(match) +
             "/200 with no grid point better by more than 1e-6|g|Delta (worst " +
             fmt("%.2g", worst_grid) + ") and exact active-set optimum matched (worst " +
             fmt("%.2g", worst_exact) + "); grid discretisation gap up to " + fmt("%.2g", worst_gap));
}

struct OtherCampaigns {
  std::vector<RunTrace> hs, mw, mw_fmin;
};

OtherCampaigns run_other_campaigns() {
  CampaignOptions opt;
  opt.threads = threads();
  opt.keep_history = true;
  std::vector<LovoProblem> hs = gen_hs_all(default_hs_catalog());
  std::vector<LovoProblem> mw;
  for (const auto& s : default_mw_specs()) mw.push_back(gen_mw(s.id, s.n, s.r, s.start_scale));
  OtherCampaigns out;
  out.hs = run_campaign(hs, SolverConfig{}, opt);
  out.mw = run_campaign(mw, SolverConfig{}, opt);
  CampaignOptions fmin = opt;
  fmin.rule = BudgetRule::kFmin;
  out.mw_fmin = run_campaign(mw, SolverConfig{}, fmin);
  return out;
}

// Independent restatement of the radii rules, driven by the logged stream.
// Histories with index swaps come first so the adjustment phase is exercised.
void criterion7(const std::vector<QdCampaign>& cs, const OtherCampaigns& other) {
  std::vector<const RunTrace*> pool;
  auto has_swap = [](const RunTrace& t) {
    return std::any_of(t.history.begin(), t.history.end(),
                       [](const StepOutcome& o) { return o.index_swapped; });
  };
  for (const auto* traces : {&other.hs, &other.mw})
    for (const auto& t : *traces)
      if (pool.size() < 20 && has_swap(t)) pool.push_back(&t);
  for (const auto& t : cs.front().primary)
    if (pool.size() < 20 && !t.history.empty()) pool.push_back(&t);

  const SolverConfig c;
  int histories = 0, replay_ok = 0, bound_ok = 0, with_swaps = 0;
  long long total_ar = 0, total_s = 0;
  std::string worst;
  for (const RunTrace* tp : pool) {
    const RunTrace& t = *tp;
    ++histories;
    with_swaps += has_swap(t);
    double delta = c.delta0, Delta = c.Delta0;
    int gamma = 0;
    bool exact = true;
    long long ar = 0, s = 0;
    for (const auto& o : t.history) {
      if (o.kind == StepKind::kCriticality) {
        delta *= c.tau1;
        Delta *= 0.5 * (c.tau1 + c.tau2);
      } else {
        const bool accepted = o.rho >= c.eta;
        if (o.rho >= c.eta1) gamma = 0;
        if (accepted && o.index_swapped && gamma <= c.gamma_max) {
          delta = c.tau4 * delta;
          Delta = c.tau4 * Delta;
          ++gamma;
          if (o.rho < c.eta1) ++ar;
        } else if (o.rho < c.eta1) {
          delta = c.tau1 * delta;
          Delta = c.tau1 * Delta;
        } else if (o.rho > c.eta2 && o.step_norm >= o.Delta_before * (1.0 - 1e-10)) {
          delta = c.tau3 * delta;
          Delta = c.tau3 * Delta;
        }
        if (o.rho >= c.eta1) ++s;
      }
      exact &= delta == o.delta_after && Delta == o.Delta_after && gamma == o.gamma_after;
    }
    replay_ok += exact;
    const bool bound = ar <= static_cast<long long>(c.gamma_max) * s;
    bound_ok += bound;
    total_ar += ar;
    total_s += s;
    if (!bound && worst.empty())
      worst = " first violation " + t.problem_name + " |A^R|=" + std::to_string(ar) +
              " |S|=" + std::to_string(s);
  }
  report(7, histories == 20 && replay_ok == 20 && bound_ok == 20,
         "replayed radii match " + std::to_string(replay_ok) + "/" + std::to_string(histories) +
             " histories (" + std::to_string(with_swaps) + " with index swaps); |A^R| <= Gamma_max |S| in " + std::to_string(bound_ok) + "/" +
             std::to_string(histories) + " (totals " + std::to_string(total_ar) + " vs " +
             std::to_string(total_s) + ")" + worst);
}

void criterion8(const std::vector<QdCampaign>& cs, const OtherCampaigns& other) {
  std::vector<const std::vector<RunTrace>*> all;
  for (const auto& c : cs) {
    all.push_back(&c.primary);
    all.push_back(&c.reference);
  }
  all.push_back(&other.hs);
  all.push_back(&other.mw);
  all.push_back(&other.mw_fmin);

  long long runs = 0, nonmonotone = 0, violations = 0, failed = 0;
  for (const auto* traces : all)
    for (const auto& t : *traces) {
      ++runs;
      failed += t.status == "failed";
      violations += t.feasibility_violations;
      for (size_t k = 1; k < t.samples.size(); ++k)
        if (!(t.samples[k].f_best <= t.samples[k - 1].f_best && t.samples[k].t > t.samples[k - 1].t)) {
          ++nonmonotone;
          break;
        }
    }
  report(8, nonmonotone == 0 && violations == 0,
         std::to_string(runs) + " runs (QD, HS, MW): " + std::to_string(nonmonotone) +
             " nonmonotone certified traces, " + std::to_string(violations) +
             " out-of-box oracle queries, " + std::to_string(failed) + " failed runs");
}

Vector central_gradient(const ComponentFn& f, const Vector& x) {
  Vector g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
    Vector p = x, m = x;
    p[j] += h;
    m[j] -= h;
    g[j] = (f(p) - f(m)) / (2.0 * h);
  }
  return g;
}

void criterion9() {
  struct Case {
    const char* id;
    int n;
  };
  bool ok = true;
  std::string detail;
  for (const Case& cs : {Case{"rosenbrock", 2}, Case{"helical_valley", 3}, Case{"trigonometric", 5}}) {
    const auto p = gen_mw(cs.id, cs.n, 1);
    const Vector x = p.x0;
    const Vector grad = central_gradient(p.components[0], x);
    std::vector<double> errs;
    for (double delta : {1e-1, 1e-2, 1e-3}) {
      SampleSet s = initial_sample(p.box, x, delta);
      for (int j = 0; j < s.size(); ++j) s.values[j] = p.components[0](s.points[j]);
      errs.push_back((build_model(s).g - grad).norm());
    }
    const double slope = (std::log10(errs[0]) - std::log10(errs[2])) / 2.0;
    ok &= slope >= 0.9;
    detail += std::string(" ") + cs.id + "=" + fmt("%.3f", slope);
  }
  report(9, ok, "log-log slope of model-gradient error vs delta >= 0.9:" + detail);
}

}  // namespace

int main() {
  set_warning_sink([](std::string_view) {});
  const auto t0 = std::chrono::steady_clock::now();
  const auto campaigns = run_qd_campaigns();
  criterion1(campaigns);
  criterion2(campaigns);
  criterion3(campaigns);
  criterion4();
  criterion5();
  criterion6();
  const auto other = run_other_campaigns();
  criterion7(campaigns, other);
  criterion8(campaigns, other);
  criterion9();
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d of 9 criteria failed (%.0f s)\n", failures, secs);
  return failures == 0 ? 0 : 1;
}
