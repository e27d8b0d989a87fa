#include <cmath>
#include <memory>
#include <string>

#include <json.hpp>

#include "lovo/errors.hpp"
#include "lovo/rng.hpp"
#include "lovo/testsets.hpp"

namespace lovo {

QdInstance make_qd_instance(int n, int r, std::uint64_t seed, int ordinal) {
  if (n < 1 || r < 1) throw StructuralError("qd: n and r must be positive");
  if (ordinal < 0) throw StructuralError("qd: ordinal must be nonnegative");
  QdInstance inst;
  inst.n = n;
  inst.r = r;
  inst.seed = seed;
  inst.ordinal = ordinal;
  Rng rng(seed, static_cast<std::uint64_t>(ordinal));
  inst.a.reserve(r);
  inst.b.reserve(r);
  for (int i = 0; i < r; ++i) {
    Vector a(n), b(n);
    for (int j = 0; j < n; ++j) a[j] = rng.uniform(0.0, 1000.0);
    for (int j = 0; j < n; ++j) b[j] = rng.uniform(0.0, 10.0);
    inst.a.push_back(std::move(a));
    inst.b.push_back(std::move(b));
  }
  return inst;
}

double qd_component(const QdInstance& inst, ComponentIndex i, const Vector& x) {
  const Vector& a = inst.a.at(i - 1);
  const Vector& b = inst.b.at(i - 1);
  double q = 0.0;
  for (int j = 0; j < inst.n; ++j) {
    const double e = x[j] - b[j];
    q += a[j] * e * e;
  }
  return std::pow(5.0, i) + 0.5 * q;
}

Vector qd_gradient(const QdInstance& inst, ComponentIndex i, const Vector& x) {
  return inst.a.at(i - 1).cwiseProduct(x - inst.b.at(i - 1));
}

LovoProblem qd_problem(const QdInstance& source) {
  auto inst = std::make_shared<const QdInstance>(source);
  LovoProblem p;
  p.name = "qd_n" + std::to_string(inst->n) + "_r" + std::to_string(inst->r) + "_s" +
           std::to_string(inst->seed) + "_" + std::to_string(inst->ordinal);
  p.n = inst->n;
  p.r = inst->r;
  p.box = FeasibleBox::uniform(inst->n, 0.0, 10.0);
  p.x0 = Vector::Constant(inst->n, 5.0);
  for (int i = 1; i <= inst->r; ++i)
    p.components.push_back([inst, i](const Vector& x) { return qd_component(*inst, i, x); });
  nlohmann::json params = {{"n", inst->n}, {"r", inst->r}, {"seed", inst->seed},
                           {"ordinal", inst->ordinal}};
  p.generator = {"qd", params.dump()};
  return p;
}

std::vector<LovoProblem> gen_qd(int n, int r, std::uint64_t seed, int count) {
  if (count < 1) throw StructuralError("gen_qd: count must be positive");
  std::vector<LovoProblem> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) out.push_back(qd_problem(make_qd_instance(n, r, seed, k)));
  return out;
}

}  // namespace lovo
