#pragma once

#include "lovo/types.hpp"

namespace lovo {

/// Convex feasible set with an exact Euclidean projection. Only the box
/// implementation ships; solvers see the set through this interface.
class ConvexSet {
 public:
  virtual ~ConvexSet() = default;
  virtual int dimension() const = 0;
  virtual Vector project(const Vector& x) const = 0;
  virtual bool contains(const Vector& x) const = 0;
};

/// Omega = { x : lower <= x <= upper }. Bounds may be infinite, but
/// lower_j < upper_j must hold for every coordinate.
class FeasibleBox final : public ConvexSet {
 public:
  FeasibleBox() = default;
  FeasibleBox(Vector lower, Vector upper);

  int dimension() const override { return static_cast<int>(lower_.size()); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  Vector project(const Vector& x) const override;
  bool contains(const Vector& x) const override;

  /// Coordinatewise intersection; throws StructuralError if any coordinate
  /// ends up with lower_j >= upper_j.
  static FeasibleBox intersect(const FeasibleBox& a, const FeasibleBox& b);

  static FeasibleBox uniform(int n, double lower, double upper);

 private:
  Vector lower_;
  Vector upper_;
};

Vector project(const FeasibleBox& box, const Vector& x);

}  // namespace lovo
