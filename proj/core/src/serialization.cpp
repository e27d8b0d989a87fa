#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>

#include "lovo/errors.hpp"
#include "lovo/testsets.hpp"

namespace lovo {
namespace {

using nlohmann::json;

json bounds_to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (std::isfinite(v[j]))
      a.push_back(v[j]);
    else
      a.push_back(nullptr);
  }
  return a;
}

Vector vector_from_json(const json& a, double null_value, const char* what) {
  if (!a.is_array()) throw IoError(std::string("problem file: '") + what + "' must be an array");
  Vector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j].is_null())
      v[static_cast<Eigen::Index>(j)] = null_value;
    else if (a[j].is_number())
      v[static_cast<Eigen::Index>(j)] = a[j].get<double>();
    else
      throw IoError(std::string("problem file: non-numeric entry in '") + what + "'");
  }
  return v;
}

}  // namespace

LovoProblem sphere_problem(const Vector& center, const FeasibleBox& box, const Vector& x0) {
  if (center.size() != box.dimension())
    throw StructuralError("sphere: center dimension does not match the box");
  LovoProblem p;
  p.n = static_cast<int>(center.size());
  p.r = 1;
  p.name = "sphere_n" + std::to_string(p.n);
  p.box = box;
  p.x0 = x0;
  p.components.push_back([center](const Vector& x) { return (x - center).squaredNorm(); });
  json c = json::array();
  for (Eigen::Index j = 0; j < center.size(); ++j) c.push_back(center[j]);
  p.generator = {"sphere", json{{"center", c}}.dump()};
  p.validate();
  return p;
}

std::string problem_to_json(const LovoProblem& problem) {
  json params = json::parse(problem.generator.params.empty() ? "{}" : problem.generator.params);
  json x0 = json::array();
  for (Eigen::Index j = 0; j < problem.x0.size(); ++j) x0.push_back(problem.x0[j]);
  json doc = {{"name", problem.name},
              {"n", problem.n},
              {"r", problem.r},
              {"lower", bounds_to_json(problem.box.lower())},
              {"upper", bounds_to_json(problem.box.upper())},
              {"x0", x0},
              {"generator", {{"kind", problem.generator.kind}, {"params", params}}}};
  return doc.dump(2) + "\n";
}

LovoProblem problem_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("problem file: ") + e.what());
  }
  try {
    const int n = doc.at("n").get<int>();
    const int r = doc.at("r").get<int>();
    const Vector lower = vector_from_json(doc.at("lower"), -std::numeric_limits<double>::infinity(), "lower");
    const Vector upper = vector_from_json(doc.at("upper"), std::numeric_limits<double>::infinity(), "upper");
    const Vector x0 = vector_from_json(doc.at("x0"), std::nan(""), "x0");
    const FeasibleBox box(lower, upper);
    const json& gen = doc.at("generator");
    const std::string kind = gen.at("kind").get<std::string>();
    const json params = gen.contains("params") ? gen.at("params") : json::object();

    LovoProblem p;
    if (kind == "qd") {
      p = qd_problem(make_qd_instance(params.at("n").get<int>(), params.at("r").get<int>(),
                                      params.at("seed").get<std::uint64_t>(),
                                      params.at("ordinal").get<int>()));
    } else if (kind == "hs") {
      p = gen_hs(default_hs_catalog(), params.at("combo").get<std::vector<int>>());
    } else if (kind == "mw") {
      p = gen_mw(params.at("id").get<std::string>(), params.at("n").get<int>(),
                 params.at("r").get<int>(), params.value("start_scale", 1.0));
    } else if (kind == "sphere") {
      p = sphere_problem(vector_from_json(params.at("center"), std::nan(""), "center"), box, x0);
    } else {
      throw RegistryError("problem file: unknown generator kind '" + kind + "'");
    }
    if (p.n != n || p.r != r)
      throw StructuralError("problem file: n/r disagree with the generator parameters");
    p.name = doc.value("name", p.name);
    p.box = box;
    p.x0 = x0;
    p.validate();
    return p;
  } catch (const json::exception& e) {
    throw IoError(std::string("problem file: ") + e.what());
  }
}

}  // namespace lovo
