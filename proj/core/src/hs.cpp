#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include <json.hpp>

#include "lovo/errors.hpp"
#include "lovo/testsets.hpp"

namespace lovo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double e : v) x[k++] = e;
  return x;
}

HsCatalog build_catalog() {
  HsCatalog c;
  auto rosen = [](const Vector& x) {
    const double a = x[1] - x[0] * x[0], b = 1.0 - x[0];
    return 100.0 * a * a + b * b;
  };
  c.push_back({1, 2, FeasibleBox(vec({-kInf, -1.5}), vec({kInf, kInf})), vec({-2.0, 1.0}), rosen});
  c.push_back({2, 2, FeasibleBox(vec({-kInf, 1.5}), vec({kInf, kInf})), vec({-2.0, 1.0}), rosen});
  c.push_back({3, 2, FeasibleBox(vec({-kInf, 0.0}), vec({kInf, kInf})), vec({10.0, 1.0}),
               [](const Vector& x) {
                 const double d = x[1] - x[0];
                 return x[1] + 1e-5 * d * d;
               }});
  c.push_back({4, 2, FeasibleBox(vec({1.0, 0.0}), vec({kInf, kInf})), vec({1.125, 0.125}),
               [](const Vector& x) {
                 const double a = x[0] + 1.0;
                 return a * a * a / 3.0 + x[1];
               }});
  c.push_back({5, 2, FeasibleBox(vec({-1.5, -3.0}), vec({4.0, 3.0})), vec({0.0, 0.0}),
               [](const Vector& x) {
                 const double d = x[0] - x[1];
                 return std::sin(x[0] + x[1]) + d * d - 1.5 * x[0] + 2.5 * x[1] + 1.0;
               }});
  c.push_back({38, 4, FeasibleBox::uniform(4, -10.0, 10.0), vec({-3.0, -1.0, -3.0, -1.0}),
               [](const Vector& x) {
                 const double a = x[1] - x[0] * x[0], b = 1.0 - x[0];
                 const double e = x[3] - x[2] * x[2], f = 1.0 - x[2];
                 const double p = x[1] - 1.0, q = x[3] - 1.0;
                 return 100.0 * a * a + b * b + 90.0 * e * e + f * f +
                        10.1 * (p * p + q * q) + 19.8 * p * q;
               }});
  c.push_back({45, 5, FeasibleBox(Vector::Zero(5), vec({1.0, 2.0, 3.0, 4.0, 5.0})),
               Vector::Constant(5, 2.0),
               [](const Vector& x) { return 2.0 - x.prod() / 120.0; }});
  c.push_back({110, 10, FeasibleBox::uniform(10, 2.001, 9.999), Vector::Constant(10, 9.0),
               [](const Vector& x) {
                 double s = 0.0, p = 1.0;
                 for (Eigen::Index j = 0; j < x.size(); ++j) {
                   const double a = std::log(x[j] - 2.0), b = std::log(10.0 - x[j]);
                   s += a * a + b * b;
                   p *= x[j];
                 }
                 return s - std::pow(p, 0.2);
               }});
  return c;
}

const HsEntry& find_entry(const HsCatalog& catalog, int id) {
  for (const auto& e : catalog)
    if (e.id == id) return e;
  throw RegistryError("unknown catalog id " + std::to_string(id));
}

}  // namespace

const HsCatalog& default_hs_catalog() {
  static const HsCatalog c = build_catalog();
  return c;
}

LovoProblem gen_hs(const HsCatalog& catalog, const std::vector<int>& combo) {
  if (combo.size() < 2 || combo.size() > 4)
    throw StructuralError("gen_hs: combination must have 2 to 4 members");
  std::vector<const HsEntry*> members;
  int n = 0;
  for (int id : combo) {
    members.push_back(&find_entry(catalog, id));
    n = std::max(n, members.back()->n);
  }

  Vector lo = Vector::Constant(n, -kInf), hi = Vector::Constant(n, kInf);
  Vector start = Vector::Zero(n);
  std::vector<bool> started(n, false);
  for (const HsEntry* e : members) {
    for (int j = 0; j < e->n; ++j) {
      lo[j] = std::max(lo[j], e->box.lower()[j]);
      hi[j] = std::min(hi[j], e->box.upper()[j]);
      if (!started[j]) {
        start[j] = e->x0[j];
        started[j] = true;
      }
    }
  }
  std::string name = "hs";
  for (int id : combo) name += "_" + std::to_string(id);
  for (int j = 0; j < n; ++j)
    if (!(lo[j] < hi[j]))
      throw RejectionError(name + ": intersected box is degenerate in coordinate " +
                           std::to_string(j + 1));

  LovoProblem p;
  p.name = name;
  p.n = n;
  p.r = static_cast<int>(members.size());
  p.box = FeasibleBox(lo, hi);
  p.x0 = p.box.project(start);
  for (const HsEntry* e : members) {
    const int k = e->n;
    auto f = e->f;
    p.components.push_back([f, k](const Vector& x) { return f(x.head(k)); });
  }
  nlohmann::json params = {{"combo", combo}};
  p.generator = {"hs", params.dump()};
  return p;
}

std::vector<LovoProblem> gen_hs_all(const HsCatalog& catalog) {
  std::vector<LovoProblem> out;
  const int m = static_cast<int>(catalog.size());
  std::vector<int> ids;
  for (const auto& e : catalog) ids.push_back(e.id);
  for (int size = 2; size <= 4; ++size) {
    std::vector<bool> pick(m, false);
    std::fill(pick.begin(), pick.begin() + std::min(size, m), true);
    if (size > m) break;
    do {
      std::vector<int> combo;
      for (int k = 0; k < m; ++k)
        if (pick[k]) combo.push_back(ids[k]);
      try {
        out.push_back(gen_hs(catalog, combo));
      } catch (const RejectionError&) {
      }
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return out;
}

}  // namespace lovo
