#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "lovo/box.hpp"
#include "lovo/problem.hpp"
#include "lovo/types.hpp"

namespace lovo {

// ---------------------------------------------------------------------------
// QD: f_i(x) = 5^i + 1/2 sum_j a^i_j (x_j - b^i_j)^2 on [0, 10]^n, x0 = 5.

struct QdInstance {
  int n = 10;
  int r = 10;
  std::uint64_t seed = 0;
  int ordinal = 0;          // position of the problem within its subset
  std::vector<Vector> a;    // a[i-1] in [0, 1000]^n
  std::vector<Vector> b;    // b[i-1] in [0, 10]^n
};

/// Draws a^1, b^1, a^2, b^2, ... from Rng(seed, ordinal), so a larger r
/// extends the component list without reshuffling the first ones.
QdInstance make_qd_instance(int n, int r, std::uint64_t seed, int ordinal);

double qd_component(const QdInstance& inst, ComponentIndex i, const Vector& x);
Vector qd_gradient(const QdInstance& inst, ComponentIndex i, const Vector& x);

LovoProblem qd_problem(const QdInstance& inst);

/// `count` problems, ordinals 0..count-1.
std::vector<LovoProblem> gen_qd(int n, int r, std::uint64_t seed, int count);

// ---------------------------------------------------------------------------
// HS-style combinations of bound-constrained objectives.

struct HsEntry {
  int id = 0;
  int n = 0;
  FeasibleBox box;
  Vector x0;
  std::function<double(const Vector&)> f;
};

using HsCatalog = std::vector<HsEntry>;

/// Hock-Schittkowski problems 1, 2, 3, 4, 5, 38, 45 and 110.
const HsCatalog& default_hs_catalog();

/// Combines 2..4 catalog entries: dimension is the largest member dimension,
/// each f_i only reads its own leading coordinates, the box is the
/// intersection (absent coordinates unconstrained by that member) and x0 is
/// the first member's start, extended by later members, projected onto the
/// box. Throws RejectionError on a degenerate intersection and
/// RegistryError on an unknown id.
LovoProblem gen_hs(const HsCatalog& catalog, const std::vector<int>& combo);

/// All 2-, 3- and 4-element combinations that survive the intersection rule.
std::vector<LovoProblem> gen_hs_all(const HsCatalog& catalog);

// ---------------------------------------------------------------------------
// MW-style compositions of least-squares families.

struct MwFamily {
  std::string id;
  std::function<bool(int n)> valid_n;
  std::function<int(int n)> residual_count;
  std::function<Vector(int n)> start;
  std::function<void(const Vector& x, Vector& residuals)> residuals;
  std::function<FeasibleBox(int n)> box;  // empty: [-50, 50]^n
};

const std::vector<MwFamily>& mw_registry();
const MwFamily& find_mw_family(std::string_view id);

/// Sizes of r contiguous, nearly equal blocks of m residuals (larger blocks
/// first; sizes differ by at most one).
std::vector<int> balanced_partition(int m, int r);

/// f_i = sum of squared residuals in block i; x0 = P(start * start_scale).
LovoProblem gen_mw(std::string_view function_id, int n, int r, double start_scale = 1.0);

struct MwSpec {
  std::string id;
  int n;
  int r;
  double start_scale;
};

/// A default MW-style campaign with n in [2, 12] and r in [2, 65].
std::vector<MwSpec> default_mw_specs();

// ---------------------------------------------------------------------------
// Analytic single-component problem ||x - c||^2.

LovoProblem sphere_problem(const Vector& center, const FeasibleBox& box, const Vector& x0);

// ---------------------------------------------------------------------------
// Serialization: {name, n, r, lower[], upper[], x0[], generator: {kind, params}}.
// Infinite bounds are written as null.

std::string problem_to_json(const LovoProblem& problem);
LovoProblem problem_from_json(std::string_view text);

}  // namespace lovo
