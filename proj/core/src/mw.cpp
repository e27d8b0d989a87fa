#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include <json.hpp>

#include "lovo/errors.hpp"
#include "lovo/testsets.hpp"

namespace lovo {
namespace {


std::function<bool(int)> exactly(int k) {
  return [k](int n) { return n == k; };
}
std::function<bool(int)> at_least(int k) {
  return [k](int n) { return n >= k; };
}
std::function<int(int)> fixed_m(int m) {
  return [m](int) { return m; };
}
std::function<int(int)> same_m() {
  return [](int n) { return n; };
}
std::function<Vector(int)> fixed_start(std::vector<double> v) {
  return [v](int) { return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())); };
}
std::function<Vector(int)> constant_start(double c) {
  return [c](int n) { return Vector::Constant(n, c); };
}

// Coordinates listed in `nonneg` get [lo, 50]; the rest [-50, 50].
std::function<FeasibleBox(int)> box_with_floor(std::vector<int> coords, double lo) {
  return [coords, lo](int n) {
    Vector l = Vector::Constant(n, -50.0), u = Vector::Constant(n, 50.0);
    for (int j : coords) l[j] = lo;
    return FeasibleBox(l, u);
  };
}

const double kBardY[15] = {0.14, 0.18, 0.22, 0.25, 0.29, 0.32, 0.35, 0.39,
                           0.37, 0.58, 0.73, 0.96, 1.34, 2.10, 4.39};
const double kKowalikY[11] = {0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627,
                              0.0456, 0.0342, 0.0323, 0.0235, 0.0246};
const double kKowalikU[11] = {4.0, 2.0, 1.0, 0.5, 0.25, 0.167, 0.125, 0.1, 0.0833, 0.0714, 0.0625};
const double kOsborne1Y[33] = {0.844, 0.908, 0.932, 0.936, 0.925, 0.908, 0.881, 0.850, 0.818,
                               0.784, 0.751, 0.718, 0.685, 0.658, 0.628, 0.603, 0.580, 0.558,
                               0.538, 0.522, 0.506, 0.490, 0.478, 0.467, 0.457, 0.448, 0.438,
                               0.431, 0.424, 0.420, 0.414, 0.411, 0.406};
const double kOsborne2Y[65] = {
    1.366, 1.191, 1.112, 1.013, 0.991, 0.885, 0.831, 0.847, 0.786, 0.725, 0.746, 0.679, 0.608,
    0.655, 0.616, 0.606, 0.602, 0.626, 0.651, 0.724, 0.649, 0.649, 0.694, 0.644, 0.624, 0.661,
    0.612, 0.558, 0.533, 0.495, 0.500, 0.423, 0.395, 0.375, 0.372, 0.391, 0.396, 0.405, 0.428,
    0.429, 0.523, 0.562, 0.607, 0.653, 0.672, 0.708, 0.633, 0.668, 0.645, 0.632, 0.591, 0.559,
    0.597, 0.625, 0.739, 0.710, 0.729, 0.720, 0.636, 0.581, 0.428, 0.292, 0.162, 0.098, 0.054};
const double kGaussianY[15] = {0.0009, 0.0044, 0.0175, 0.0540, 0.1295, 0.2420, 0.3521, 0.3989,
                               0.3521, 0.2420, 0.1295, 0.0540, 0.0175, 0.0044, 0.0009};
const double kBealeY[3] = {1.5, 2.25, 2.625};

std::vector<MwFamily> build_registry() {
  std::vector<MwFamily> reg;

  reg.push_back({"rosenbrock", [](int n) { return n >= 2 && n % 2 == 0; }, same_m(),
                 [](int n) {
                   Vector x(n);
                   for (int j = 0; j < n; ++j) x[j] = (j % 2 == 0) ? -1.2 : 1.0;
                   return x;
                 },
                 [](const Vector& x, Vector& F) {
                   for (Eigen::Index i = 0; i + 1 < x.size(); i += 2) {
                     F[i] = 10.0 * (x[i + 1] - x[i] * x[i]);
                     F[i + 1] = 1.0 - x[i];
                   }
                 },
                 {}});

  reg.push_back({"helical_valley", exactly(3), fixed_m(3), fixed_start({-1.0, 0.0, 0.0}),
                 [](const Vector& x, Vector& F) {
                   double theta;
                   if (x[0] > 0.0)
                     theta = std::atan(x[1] / x[0]) / (2.0 * std::numbers::pi);
                   else if (x[0] < 0.0)
                     theta = std::atan(x[1] / x[0]) / (2.0 * std::numbers::pi) + 0.5;
                   else
                     theta = x[1] >= 0.0 ? 0.25 : -0.25;
                   F[0] = 10.0 * (x[2] - 10.0 * theta);
                   F[1] = 10.0 * (std::hypot(x[0], x[1]) - 1.0);
                   F[2] = x[2];
                 },
                 {}});

  reg.push_back({"powell_singular", [](int n) { return n >= 4 && n % 4 == 0; }, same_m(),
                 [](int n) {
                   Vector x(n);
                   const double s[4] = {3.0, -1.0, 0.0, 1.0};
                   for (int j = 0; j < n; ++j) x[j] = s[j % 4];
                   return x;
                 },
                 [](const Vector& x, Vector& F) {
                   for (Eigen::Index i = 0; i + 3 < x.size(); i += 4) {
                     F[i] = x[i] + 10.0 * x[i + 1];
                     F[i + 1] = std::sqrt(5.0) * (x[i + 2] - x[i + 3]);
                     const double a = x[i + 1] - 2.0 * x[i + 2];
                     F[i + 2] = a * a;
                     const double b = x[i] - x[i + 3];
                     F[i + 3] = std::sqrt(10.0) * b * b;
                   }
                 },
                 {}});

  reg.push_back({"freudenstein_roth", exactly(2), fixed_m(2), fixed_start({0.5, -2.0}),
                 [](const Vector& x, Vector& F) {
                   F[0] = -13.0 + x[0] + ((5.0 - x[1]) * x[1] - 2.0) * x[1];
                   F[1] = -29.0 + x[0] + ((x[1] + 1.0) * x[1] - 14.0) * x[1];
                 },
                 {}});

  reg.push_back({"bard", exactly(3), fixed_m(15), fixed_start({1.0, 1.0, 1.0}),
                 [](const Vector& x, Vector& F) {
                   for (int i = 1; i <= 15; ++i) {
                     const double u = i, v = 16 - i, w = std::min(u, v);
                     F[i - 1] = kBardY[i - 1] - (x[0] + u / (v * x[1] + w * x[2]));
                   }
                 },
                 box_with_floor({1, 2}, 0.01)});

  reg.push_back({"kowalik_osborne", exactly(4), fixed_m(11), fixed_start({0.25, 0.39, 0.415, 0.39}),
                 [](const Vector& x, Vector& F) {
                   for (int i = 0; i < 11; ++i) {
                     const double u = kKowalikU[i];
                     F[i] = kKowalikY[i] - x[0] * (u * u + u * x[1]) / (u * u + u * x[2] + x[3]);
                   }
                 },
                 box_with_floor({2, 3}, 0.0)});

  reg.push_back({"osborne1", exactly(5), fixed_m(33), fixed_start({0.5, 1.5, -1.0, 0.01, 0.02}),
                 [](const Vector& x, Vector& F) {
                   for (int i = 0; i < 33; ++i) {
                     const double t = 10.0 * i;
                     F[i] = kOsborne1Y[i] -
                            (x[0] + x[1] * std::exp(-t * x[3]) + x[2] * std::exp(-t * x[4]));
                   }
                 },
                 box_with_floor({3, 4}, 0.0)});

  reg.push_back({"osborne2", exactly(11), fixed_m(65),
                 fixed_start({1.3, 0.65, 0.65, 0.7, 0.6, 3.0, 5.0, 7.0, 2.0, 4.5, 5.5}),
                 [](const Vector& x, Vector& F) {
                   for (int i = 0; i < 65; ++i) {
                     const double t = i / 10.0;
                     const double a = t - x[8], b = t - x[9], c = t - x[10];
                     F[i] = kOsborne2Y[i] -
                            (x[0] * std::exp(-t * x[4]) + x[1] * std::exp(-a * a * x[5]) +
                             x[2] * std::exp(-b * b * x[6]) + x[3] * std::exp(-c * c * x[7]));
                   }
                 },
                 box_with_floor({4, 5, 6, 7}, 0.0)});

  reg.push_back({"brown_dennis", exactly(4), fixed_m(20), fixed_start({25.0, 5.0, -5.0, -1.0}),
                 [](const Vector& x, Vector& F) {
                   for (int i = 1; i <= 20; ++i) {
                     const double t = i / 5.0;
                     const double p = x[0] + t * x[1] - std::exp(t);
                     const double q = x[2] + x[3] * std::sin(t) - std::cos(t);
                     F[i - 1] = p * p + q * q;
                   }
                 },
                 {}});

  reg.push_back({"trigonometric", at_least(1), same_m(),
                 [](int n) { return Vector::Constant(n, 1.0 / n); },
                 [](const Vector& x, Vector& F) {
                   const Eigen::Index n = x.size();
                   const double c = x.array().cos().sum();
                   for (Eigen::Index i = 0; i < n; ++i)
                     F[i] = n - c + (i + 1) * (1.0 - std::cos(x[i])) - std::sin(x[i]);
                 },
                 {}});

  reg.push_back({"broyden_tridiagonal", at_least(1), same_m(), constant_start(-1.0),
                 [](const Vector& x, Vector& F) {
                   const Eigen::Index n = x.size();
                   for (Eigen::Index i = 0; i < n; ++i) {
                     const double lo = i > 0 ? x[i - 1] : 0.0;
                     const double hi = i + 1 < n ? x[i + 1] : 0.0;
                     F[i] = (3.0 - 2.0 * x[i]) * x[i] - lo - 2.0 * hi + 1.0;
                   }
                 },
                 {}});

  reg.push_back({"broyden_banded", at_least(1), same_m(), constant_start(-1.0),
                 [](const Vector& x, Vector& F) {
                   const Eigen::Index n = x.size();
                   for (Eigen::Index i = 0; i < n; ++i) {
                     double s = 0.0;
                     for (Eigen::Index j = std::max<Eigen::Index>(0, i - 5);
                          j <= std::min<Eigen::Index>(n - 1, i + 1); ++j)
                       if (j != i) s += x[j] * (1.0 + x[j]);
                     F[i] = x[i] * (2.0 + 5.0 * x[i] * x[i]) + 1.0 - s;
                   }
                 },
                 {}});

  reg.push_back({"box3d", exactly(3), fixed_m(10), fixed_start({0.0, 10.0, 20.0}),
                 [](const Vector& x, Vector& F) {
                   for (int i = 1; i <= 10; ++i) {
                     const double t = 0.1 * i;
                     F[i - 1] = std::exp(-t * x[0]) - std::exp(-t * x[1]) -
                                x[2] * (std::exp(-t) - std::exp(-10.0 * t));
                   }
                 },
                 {}});

  reg.push_back({"jennrich_sampson", exactly(2), fixed_m(10), fixed_start({0.3, 0.4}),
                 [](const Vector& x, Vector& F) {
                   for (int i = 1; i <= 10; ++i)
                     F[i - 1] = 2.0 + 2.0 * i - (std::exp(i * x[0]) + std::exp(i * x[1]));
                 },
                 [](int n) { return FeasibleBox::uniform(n, -1.0, 1.0); }});

  reg.push_back({"beale", exactly(2), fixed_m(3), fixed_start({1.0, 1.0}),
                 [](const Vector& x, Vector& F) {
                   for (int i = 1; i <= 3; ++i)
                     F[i - 1] = kBealeY[i - 1] - x[0] * (1.0 - std::pow(x[1], i));
                 },
                 {}});

  reg.push_back({"discrete_boundary_value", at_least(1), same_m(),
                 [](int n) {
                   Vector x(n);
                   const double h = 1.0 / (n + 1);
                   for (int j = 0; j < n; ++j) x[j] = (j + 1) * h * ((j + 1) * h - 1.0);
                   return x;
                 },
                 [](const Vector& x, Vector& F) {
                   const Eigen::Index n = x.size();
                   const double h = 1.0 / (n + 1);
                   for (Eigen::Index i = 0; i < n; ++i) {
                     const double lo = i > 0 ? x[i - 1] : 0.0;
                     const double hi = i + 1 < n ? x[i + 1] : 0.0;
                     const double c = x[i] + (i + 1) * h + 1.0;
                     F[i] = 2.0 * x[i] - lo - hi + h * h * c * c * c / 2.0;
                   }
                 },
                 {}});

  reg.push_back({"brown_almost_linear", at_least(1), same_m(), constant_start(0.5),
                 [](const Vector& x, Vector& F) {
                   const Eigen::Index n = x.size();
                   const double s = x.sum();
                   for (Eigen::Index i = 0; i + 1 < n; ++i) F[i] = x[i] + s - (n + 1.0);
                   F[n - 1] = x.prod() - 1.0;
                 },
                 {}});

  reg.push_back({"linear_full_rank", [](int n) { return n >= 1 && n <= 50; }, fixed_m(50),
                 constant_start(1.0),
                 [](const Vector& x, Vector& F) {
                   const Eigen::Index n = x.size(), m = F.size();
                   const double s = 2.0 * x.sum() / static_cast<double>(m);
                   for (Eigen::Index i = 0; i < m; ++i) F[i] = (i < n ? x[i] : 0.0) - s - 1.0;
                 },
                 {}});

  reg.push_back({"linear_rank1", at_least(1), fixed_m(50), constant_start(1.0),
                 [](const Vector& x, Vector& F) {
                   double s = 0.0;
                   for (Eigen::Index j = 0; j < x.size(); ++j) s += (j + 1) * x[j];
                   for (Eigen::Index i = 0; i < F.size(); ++i) F[i] = (i + 1) * s - 1.0;
                 },
                 {}});

  reg.push_back({"gaussian", exactly(3), fixed_m(15), fixed_start({0.4, 1.0, 0.0}),
                 [](const Vector& x, Vector& F) {
                   for (int i = 1; i <= 15; ++i) {
                     const double t = (8.0 - i) / 2.0;
                     const double e = t - x[2];
                     F[i - 1] = x[0] * std::exp(-x[1] * e * e / 2.0) - kGaussianY[i - 1];
                   }
                 },
                 box_with_floor({1}, 0.0)});

  reg.push_back({"powell_badly_scaled", exactly(2), fixed_m(2), fixed_start({0.0, 1.0}),
                 [](const Vector& x, Vector& F) {
                   F[0] = 1e4 * x[0] * x[1] - 1.0;
                   F[1] = std::exp(-x[0]) + std::exp(-x[1]) - 1.0001;
                 },
                 {}});

  reg.push_back({"variably_dimensioned", at_least(1), [](int n) { return n + 2; },
                 [](int n) {
                   Vector x(n);
                   for (int j = 0; j < n; ++j) x[j] = 1.0 - (j + 1.0) / n;
                   return x;
                 },
                 [](const Vector& x, Vector& F) {
                   const Eigen::Index n = x.size();
                   double s = 0.0;
                   for (Eigen::Index j = 0; j < n; ++j) {
                     F[j] = x[j] - 1.0;
                     s += (j + 1) * (x[j] - 1.0);
                   }
                   F[n] = s;
                   F[n + 1] = s * s;
                 },
                 {}});

  reg.push_back({"penalty1", at_least(1), [](int n) { return n + 1; },
                 [](int n) {
                   Vector x(n);
                   for (int j = 0; j < n; ++j) x[j] = j + 1.0;
                   return x;
                 },
                 [](const Vector& x, Vector& F) {
                   const Eigen::Index n = x.size();
                   for (Eigen::Index j = 0; j < n; ++j) F[j] = std::sqrt(1e-5) * (x[j] - 1.0);
                   F[n] = x.squaredNorm() - 0.25;
                 },
                 {}});

  reg.push_back({"chebyquad", at_least(1), same_m(),
                 [](int n) {
                   Vector x(n);
                   for (int j = 0; j < n; ++j) x[j] = (j + 1.0) / (n + 1);
                   return x;
                 },
                 [](const Vector& x, Vector& F) {
                   const Eigen::Index n = x.size(), m = F.size();
                   F.setZero();
                   for (Eigen::Index j = 0; j < n; ++j) {
                     const double z = 2.0 * x[j] - 1.0;
                     double t0 = 1.0, t1 = z;
                     for (Eigen::Index i = 0; i < m; ++i) {
                       F[i] += t1;
                       const double t2 = 2.0 * z * t1 - t0;
                       t0 = t1;
                       t1 = t2;
                     }
                   }
                   for (Eigen::Index i = 0; i < m; ++i) {
                     F[i] /= static_cast<double>(n);
                     const Eigen::Index k = i + 1;
                     if (k % 2 == 0) F[i] += 1.0 / (static_cast<double>(k * k) - 1.0);
                   }
                 },
                 [](int n) { return FeasibleBox::uniform(n, 0.0, 1.0); }});

  return reg;
}

}  // namespace

const std::vector<MwFamily>& mw_registry() {
  static const std::vector<MwFamily> reg = build_registry();
  return reg;
}

const MwFamily& find_mw_family(std::string_view id) {
  for (const auto& f : mw_registry())
    if (f.id == id) return f;
  throw RegistryError("unknown least-squares family '" + std::string(id) + "'");
}

std::vector<int> balanced_partition(int m, int r) {
  if (r < 1 || m < r) throw StructuralError("partition: need 1 <= r <= residual count");
  std::vector<int> sizes(r, m / r);
  for (int i = 0; i < m % r; ++i) ++sizes[i];
  return sizes;
}

LovoProblem gen_mw(std::string_view function_id, int n, int r, double start_scale) {
  const MwFamily& fam = find_mw_family(function_id);
  if (!fam.valid_n(n))
    throw StructuralError("gen_mw: dimension " + std::to_string(n) + " not supported by " +
                          fam.id);
  const int m = fam.residual_count(n);
  const std::vector<int> sizes = balanced_partition(m, r);

  LovoProblem p;
  p.name = "mw_" + fam.id + "_n" + std::to_string(n) + "_r" + std::to_string(r);
  if (start_scale != 1.0) {
    nlohmann::json s = start_scale;
    p.name += "_x" + s.dump();
  }
  p.n = n;
  p.r = r;
  p.box = fam.box ? fam.box(n) : FeasibleBox::uniform(n, -50.0, 50.0);
  p.x0 = p.box.project(fam.start(n) * start_scale);

  auto residuals = fam.residuals;
  int first = 0;
  for (int i = 0; i < r; ++i) {
    const int begin = first, count = sizes[i];
    p.components.push_back([residuals, m, begin, count](const Vector& x) {
      Vector F = Vector::Zero(m);
      residuals(x, F);
      return F.segment(begin, count).squaredNorm();
    });
    first += count;
  }
  nlohmann::json params = {{"id", fam.id}, {"n", n}, {"r", r}, {"start_scale", start_scale}};
  p.generator = {"mw", params.dump()};
  return p;
}

std::vector<MwSpec> default_mw_specs() {
  return {
      {"rosenbrock", 2, 2, 1.0},          {"rosenbrock", 8, 4, 1.0},
      {"rosenbrock", 12, 6, 10.0},        {"helical_valley", 3, 2, 1.0},
      {"helical_valley", 3, 3, 10.0},     {"powell_singular", 4, 2, 1.0},
      {"powell_singular", 8, 4, 1.0},     {"powell_singular", 12, 3, 10.0},
      {"freudenstein_roth", 2, 2, 1.0},   {"freudenstein_roth", 2, 2, 10.0},
      {"bard", 3, 5, 1.0},                {"bard", 3, 15, 10.0},
      {"kowalik_osborne", 4, 11, 1.0},    {"kowalik_osborne", 4, 4, 10.0},
      {"osborne1", 5, 33, 1.0},           {"osborne1", 5, 11, 10.0},
      {"osborne2", 11, 65, 1.0},          {"osborne2", 11, 13, 10.0},
      {"brown_dennis", 4, 20, 1.0},       {"brown_dennis", 4, 5, 10.0},
      {"trigonometric", 5, 5, 1.0},       {"trigonometric", 10, 2, 1.0},
      {"trigonometric", 8, 4, 10.0},      {"broyden_tridiagonal", 6, 3, 1.0},
      {"broyden_tridiagonal", 12, 12, 10.0}, {"broyden_banded", 7, 7, 1.0},
      {"broyden_banded", 10, 5, 10.0},    {"box3d", 3, 10, 1.0},
      {"box3d", 3, 5, 10.0},              {"jennrich_sampson", 2, 10, 1.0},
      {"jennrich_sampson", 2, 5, 10.0},   {"beale", 2, 3, 1.0},
      {"beale", 2, 2, 10.0},              {"discrete_boundary_value", 8, 4, 1.0},
      {"discrete_boundary_value", 12, 6, 10.0}, {"brown_almost_linear", 10, 10, 1.0},
      {"brown_almost_linear", 7, 2, 10.0}, {"linear_full_rank", 9, 50, 1.0},
      {"linear_full_rank", 12, 25, 10.0}, {"linear_rank1", 7, 50, 1.0},
      {"linear_rank1", 10, 10, 10.0},     {"gaussian", 3, 15, 1.0},
      {"gaussian", 3, 3, 10.0},           {"powell_badly_scaled", 2, 2, 1.0},
      {"powell_badly_scaled", 2, 2, 10.0}, {"variably_dimensioned", 10, 12, 1.0},
      {"variably_dimensioned", 6, 4, 10.0}, {"penalty1", 4, 5, 1.0},
      {"penalty1", 10, 11, 10.0},         {"penalty1", 8, 3, 1.0},
      {"chebyquad", 6, 6, 1.0},           {"chebyquad", 9, 3, 1.0},
      {"chebyquad", 8, 8, 10.0},
  };
}

}  // namespace lovo
