#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <json.hpp>

#include "lovo/errors.hpp"
#include "lovo/log.hpp"
#include "lovo/rng.hpp"
#include "lovo/solver.hpp"
#include "lovo/testsets.hpp"
#include "support.hpp"

using namespace lovo;
using lovo::testing::random_point;
using lovo::testing::vec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Box for random sampling: clamp infinite bounds to +-20.
FeasibleBox sampling_box(const FeasibleBox& box) {
  Vector lo = box.lower().cwiseMax(-20.0), hi = box.upper().cwiseMin(20.0);
  return FeasibleBox(lo, hi);
}

double eval_min(const LovoProblem& p, const Vector& x) {
  EvalLedger ledger(p.r);
  return eval_fmin(p, ledger, x).value;
}

}  // namespace

TEST(Rng, KnownSplitmixSequence) {
  // reference values of splitmix64 from state 0
  std::uint64_t s = 0;
  EXPECT_EQ(splitmix64(s), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(splitmix64(s), 0x6E789E6AA1B965F4ULL);
}

TEST(Rng, UniformInRangeAndStreamsDiffer) {
  Rng a(7, 0), b(7, 1), c(7, 0);
  bool differ = false;
  for (int k = 0; k < 1000; ++k) {
    const double u = a.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = b.uniform(2.0, 3.0);
    ASSERT_GE(v, 2.0);
    ASSERT_LT(v, 3.0);
    differ |= u != v - 2.0;
    ASSERT_EQ(u, c.uniform01());
  }
  EXPECT_TRUE(differ);
}

TEST(Qd, NestingAcrossR) {
  const auto small = gen_qd(10, 10, 99, 5);
  const auto large = gen_qd(10, 25, 99, 5);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 5; ++k) {
    const auto a = make_qd_instance(10, 10, 99, k), b = make_qd_instance(10, 25, 99, k);
    for (int i = 0; i < 10; ++i) {
      EXPECT_EQ(a.a[i], b.a[i]);
      EXPECT_EQ(a.b[i], b.b[i]);
    }
    for (int t = 0; t < 20; ++t) {
      const Vector x = random_point(rng, small[k].box);
      for (int i = 0; i < 10; ++i) EXPECT_EQ(small[k].components[i](x), large[k].components[i](x));
    }
  }
}

TEST(Qd, RangesAndShape) {
  const auto inst = make_qd_instance(10, 10, 5, 3);
  ASSERT_EQ(inst.a.size(), 10u);
  for (int i = 0; i < 10; ++i) {
    EXPECT_TRUE((inst.a[i].array() >= 0).all() && (inst.a[i].array() <= 1000).all());
    EXPECT_TRUE((inst.b[i].array() >= 0).all() && (inst.b[i].array() <= 10).all());
  }
  const auto p = qd_problem(inst);
  EXPECT_EQ(p.box.lower(), Vector::Zero(10));
  EXPECT_EQ(p.box.upper(), Vector::Constant(10, 10.0));
  EXPECT_EQ(p.x0, Vector::Constant(10, 5.0));
  EXPECT_EQ(p.name, "qd_n10_r10_s5_3");
}

TEST(Qd, ComponentAtItsCenter) {
  for (int k = 0; k < 10; ++k) {
    const auto inst = make_qd_instance(10, 10, 123, k);
    const auto p = qd_problem(inst);
    EXPECT_EQ(p.components[0](inst.b[0]), 5.0);
    EXPECT_EQ(qd_component(inst, 3, inst.b[2]), 125.0);
  }
}

TEST(Qd, FminBelowFirstComponent) {
  const auto p = gen_qd(10, 10, 7, 1)[0];
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const Vector x = random_point(rng, p.box);
    EXPECT_LE(eval_min(p, x), p.components[0](x));
  }
}

TEST(Qd, GradientMatchesFiniteDifferences) {
  const auto inst = make_qd_instance(6, 4, 11, 0);
  std::mt19937_64 rng(3);
  const auto p = qd_problem(inst);
  for (int t = 0; t < 20; ++t) {
    const Vector x = random_point(rng, p.box);
    for (int i = 1; i <= 4; ++i) {
      const Vector g = qd_gradient(inst, i, x);
      const Vector fd = lovo::testing::central_difference(
          [&](const Vector& y) { return qd_component(inst, i, y); }, x, 1e-4);
      EXPECT_LE((g - fd).norm(), 1e-6 * (1 + g.norm()));
    }
  }
}

TEST(Qd, SingleComponentSolveReachesItsMinimum) {
  const auto prev = set_warning_sink([](std::string_view) {});
  const auto inst = make_qd_instance(4, 1, 21, 0);
  const auto res = solve(qd_problem(inst), SolverConfig{});
  set_warning_sink(prev);
  EXPECT_NEAR(res.f_final, 5.0, 1e-6);
}

TEST(Qd, Errors) {
  EXPECT_THROW(make_qd_instance(0, 1, 1, 0), StructuralError);
  EXPECT_THROW(make_qd_instance(2, 0, 1, 0), StructuralError);
  EXPECT_THROW(gen_qd(2, 2, 1, 0), StructuralError);
}

TEST(Hs, CatalogOptima) {
  const auto& cat = default_hs_catalog();
  auto value = [&](int id, const Vector& x) {
    for (const auto& e : cat)
      if (e.id == id) {
        EXPECT_TRUE(e.box.contains(x)) << id;
        return e.f(x);
      }
    ADD_FAILURE() << "missing " << id;
    return 0.0;
  };
  EXPECT_NEAR(value(1, vec({1, 1})), 0.0, 1e-14);
  EXPECT_NEAR(value(2, vec({1.2243707487363527, 1.5})), 0.0504261879366463, 1e-10);
  EXPECT_NEAR(value(3, vec({0, 0})), 0.0, 1e-14);
  EXPECT_NEAR(value(4, vec({1, 0})), 8.0 / 3.0, 1e-14);
  const double pi3 = std::numbers::pi / 3.0;
  EXPECT_NEAR(value(5, vec({0.5 - pi3, -0.5 - pi3})), -std::sqrt(3.0) / 2.0 - pi3, 1e-12);
  EXPECT_NEAR(value(38, vec({1, 1, 1, 1})), 0.0, 1e-14);
  EXPECT_NEAR(value(45, vec({1, 2, 3, 4, 5})), 1.0, 1e-14);
  EXPECT_NEAR(value(110, Vector::Constant(10, 9.35025655)), -45.77846971, 1e-6);
  EXPECT_EQ(cat.size(), 8u);
}

TEST(Hs, IdenticalEntries) {
  const auto p = gen_hs(default_hs_catalog(), {38, 38});
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const Vector x = random_point(rng, p.box);
    EvalLedger ledger(2);
    const auto fe = eval_fmin(p, ledger, x);
    EXPECT_EQ(fe.imin, (std::vector<ComponentIndex>{1, 2}));
  }
}

TEST(Hs, BoxIntersection) {
  HsCatalog cat;
  auto zero = [](const Vector&) { return 0.0; };
  cat.push_back({101, 2, FeasibleBox(vec({0, 0}), vec({1, 2})), vec({0.2, 0.2}), zero});
  cat.push_back({102, 2, FeasibleBox(vec({0.5, 1}), vec({2, 2})), vec({1, 1}), zero});
  cat.push_back({103, 1, FeasibleBox(vec({0}), vec({1})), vec({0}), zero});
  cat.push_back({104, 1, FeasibleBox(vec({1}), vec({2})), vec({2}), zero});
  const auto p = gen_hs(cat, {101, 102});
  EXPECT_EQ(p.box.lower(), vec({0.5, 1}));
  EXPECT_EQ(p.box.upper(), vec({1, 2}));
  EXPECT_EQ(p.x0, vec({0.5, 1}));
  EXPECT_THROW(gen_hs(cat, {103, 104}), RejectionError);
  // padded coordinates stay free for the shorter member
  const auto q = gen_hs(cat, {103, 102});
  EXPECT_EQ(q.n, 2);
  EXPECT_EQ(q.box.lower(), vec({0.5, 1}));
  EXPECT_EQ(q.box.upper(), vec({1, 2}));
}

TEST(Hs, Errors) {
  const auto& cat = default_hs_catalog();
  EXPECT_THROW(gen_hs(cat, {1}), StructuralError);
  EXPECT_THROW(gen_hs(cat, {1, 2, 3, 4, 5}), StructuralError);
  EXPECT_THROW(gen_hs(cat, {1, 999}), RegistryError);
}

TEST(Hs, AllCombinationsAreValid) {
  const auto all = gen_hs_all(default_hs_catalog());
  // C(8,2) + C(8,3) + C(8,4) = 154 before rejection
  EXPECT_GT(all.size(), 50u);
  EXPECT_LE(all.size(), 154u);
  std::set<std::string> names;
  for (const auto& p : all) {
    EXPECT_NO_THROW(p.validate());
    EXPECT_TRUE(names.insert(p.name).second);
    EXPECT_TRUE(std::isfinite(eval_min(p, p.x0))) << p.name;
  }
}

TEST(Mw, SingleBlockIsFullSum) {
  for (const auto& [id, n] : std::vector<std::pair<std::string, int>>{
           {"rosenbrock", 4}, {"bard", 3}, {"trigonometric", 5}, {"linear_full_rank", 6}}) {
    const auto& fam = find_mw_family(id);
    const auto p = gen_mw(id, n, 1);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
      const Vector x = random_point(rng, sampling_box(p.box));
      Vector res(fam.residual_count(n));
      fam.residuals(x, res);
      EXPECT_NEAR(p.components[0](x), res.squaredNorm(), 1e-12 * (1 + res.squaredNorm()));
    }
  }
}

TEST(Mw, BlocksSumToFullObjective) {
  const auto full = gen_mw("osborne2", 11, 1);
  const auto split = gen_mw("osborne2", 11, 7);
  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    const Vector x = random_point(rng, sampling_box(full.box));
    double sum = 0.0;
    for (const auto& f : split.components) sum += f(x);
    EXPECT_NEAR(sum, full.components[0](x), 1e-10 * (1 + sum));
  }
}

TEST(Mw, RosenbrockAtMinimizer) {
  const auto p = gen_mw("rosenbrock", 2, 2);
  EvalLedger ledger(2);
  const auto fe = eval_fmin(p, ledger, vec({1, 1}));
  EXPECT_EQ(fe.value, 0.0);
  EXPECT_EQ(fe.imin, (std::vector<ComponentIndex>{1, 2}));
}

TEST(Mw, KnownMinima) {
  auto full = [](const char* id, int n, const Vector& x) { return gen_mw(id, n, 1).components[0](x); };
  EXPECT_NEAR(full("powell_singular", 4, Vector::Zero(4)), 0.0, 1e-14);
  EXPECT_NEAR(full("helical_valley", 3, vec({1, 0, 0})), 0.0, 1e-14);
  EXPECT_NEAR(full("freudenstein_roth", 2, vec({5, 4})), 0.0, 1e-14);
  EXPECT_NEAR(full("beale", 2, vec({3, 0.5})), 0.0, 1e-14);
  EXPECT_NEAR(full("box3d", 3, vec({1, 10, 1})), 0.0, 1e-14);
  EXPECT_NEAR(full("brown_almost_linear", 5, Vector::Ones(5)), 0.0, 1e-14);
  EXPECT_NEAR(full("variably_dimensioned", 6, Vector::Ones(6)), 0.0, 1e-14);
  EXPECT_NEAR(full("linear_full_rank", 5, Vector::Constant(5, -1.0)), 45.0, 1e-12);
  EXPECT_NEAR(full("bard", 3, vec({0.08241056, 1.133036, 2.343695})), 8.214877e-3, 1e-8);
  EXPECT_NEAR(full("kowalik_osborne", 4, vec({0.1928069, 0.1912823, 0.1230565, 0.1360623})),
              3.075056e-4, 1e-9);
  EXPECT_NEAR(full("brown_dennis", 4, vec({-11.59444, 13.20363, -0.4034394, 0.2367787})),
              85822.2, 0.1);
}

TEST(Mw, BalancedPartition) {
  EXPECT_EQ(balanced_partition(10, 3), (std::vector<int>{4, 3, 3}));
  EXPECT_EQ(balanced_partition(6, 6), (std::vector<int>(6, 1)));
  EXPECT_EQ(balanced_partition(65, 2), (std::vector<int>{33, 32}));
  EXPECT_THROW(balanced_partition(3, 4), StructuralError);
  EXPECT_THROW(balanced_partition(3, 0), StructuralError);
}

TEST(Mw, Errors) {
  EXPECT_THROW(find_mw_family("no_such_family"), RegistryError);
  EXPECT_THROW(gen_mw("no_such_family", 2, 1), RegistryError);
  EXPECT_THROW(gen_mw("rosenbrock", 3, 1), StructuralError);
  EXPECT_THROW(gen_mw("beale", 2, 4), StructuralError);
}

TEST(Mw, DefaultSpecsAreFiniteOnTheirBoxes) {
  const auto specs = default_mw_specs();
  EXPECT_EQ(specs.size(), 53u);
  std::mt19937_64 rng(8);
  for (const auto& s : specs) {
    const auto p = gen_mw(s.id, s.n, s.r, s.start_scale);
    EXPECT_GE(p.n, 2);
    EXPECT_LE(p.n, 12);
    EXPECT_TRUE(p.box.contains(p.x0)) << p.name;
    for (int t = 0; t < 20; ++t) {
      const Vector x = t == 0 ? p.x0 : random_point(rng, sampling_box(p.box));
      for (const auto& f : p.components) ASSERT_TRUE(std::isfinite(f(x))) << p.name;
    }
  }
}

TEST(Serialization, RoundTripRegeneratesComponents) {
  std::vector<LovoProblem> problems = {
      gen_qd(5, 7, 42, 3)[2], gen_hs(default_hs_catalog(), {1, 38, 45}),
      gen_mw("osborne1", 5, 4), gen_mw("trigonometric", 6, 3, 10.0),
      sphere_problem(vec({1, 2}), FeasibleBox(vec({0, -kInf}), vec({5, kInf})), vec({3, 3}))};
  std::mt19937_64 rng(9);
  for (const auto& p : problems) {
    const std::string text = problem_to_json(p);
    const auto q = problem_from_json(text);
    EXPECT_EQ(q.name, p.name);
    EXPECT_EQ(q.n, p.n);
    EXPECT_EQ(q.r, p.r);
    EXPECT_EQ(q.x0, p.x0);
    EXPECT_EQ(q.box.lower(), p.box.lower());
    EXPECT_EQ(q.box.upper(), p.box.upper());
    EXPECT_EQ(problem_to_json(q), text);
    for (int t = 0; t < 100; ++t) {
      const Vector x = random_point(rng, sampling_box(p.box));
      for (int i = 0; i < p.r; ++i) ASSERT_EQ(q.components[i](x), p.components[i](x)) << p.name;
    }
  }
}

TEST(Serialization, InfiniteBoundsAreNull) {
  const auto p = sphere_problem(vec({1}), FeasibleBox(vec({-kInf}), vec({kInf})), vec({0}));
  const auto j = nlohmann::json::parse(problem_to_json(p));
  EXPECT_TRUE(j["lower"][0].is_null());
  EXPECT_TRUE(j["upper"][0].is_null());
}

TEST(Serialization, Errors) {
  auto j = nlohmann::json::parse(problem_to_json(gen_qd(2, 2, 1, 1)[0]));
  EXPECT_THROW(problem_from_json("not json"), IoError);
  auto bad_kind = j;
  bad_kind["generator"]["kind"] = "nope";
  EXPECT_THROW(problem_from_json(bad_kind.dump()), RegistryError);
  auto bad_n = j;
  bad_n["n"] = 3;
  EXPECT_THROW(problem_from_json(bad_n.dump()), StructuralError);
  auto infeasible = j;
  infeasible["x0"] = {11.0, 1.0};
  EXPECT_THROW(problem_from_json(infeasible.dump()), StructuralError);
}
