#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lovo/box.hpp"
#include "lovo/problem.hpp"
#include "lovo/types.hpp"

namespace lovo::testing {

inline Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double e : v) x[k++] = e;
  return x;
}

inline LovoProblem make_problem(std::vector<ComponentFn> fs, const FeasibleBox& box,
                                const Vector& x0, std::string name = "test") {
  LovoProblem p;
  p.name = std::move(name);
  p.n = box.dimension();
  p.r = static_cast<int>(fs.size());
  p.components = std::move(fs);
  p.box = box;
  p.x0 = x0;
  p.validate();
  return p;
}

inline Vector random_point(std::mt19937_64& rng, const FeasibleBox& box) {
  Vector x(box.dimension());
  for (int j = 0; j < box.dimension(); ++j) {
    std::uniform_real_distribution<double> u(box.lower()[j], box.upper()[j]);
    x[j] = u(rng);
  }
  return x;
}

inline Vector central_difference(const std::function<double(const Vector&)>& f, const Vector& x,
                                 double h) {
  Vector g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Vector p = x, m = x;
    p[j] += h;
    m[j] -= h;
    g[j] = (f(p) - f(m)) / (2.0 * h);
  }
  return g;
}

}  // namespace lovo::testing
