#include "lovo/box.hpp"

#include <string>
#include <utility>

#include "lovo/errors.hpp"

namespace lovo {

FeasibleBox::FeasibleBox(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw StructuralError("box bounds have different dimensions");
  }
  for (Eigen::Index j = 0; j < lower_.size(); ++j) {
    if (!(lower_[j] < upper_[j])) {
      throw StructuralError("degenerate box: lower >= upper in coordinate " +
                            std::to_string(j + 1));
    }
  }
}

Vector FeasibleBox::project(const Vector& x) const {
  if (x.size() != lower_.size()) {
    throw StructuralError("projection: dimension mismatch");
  }
  return x.cwiseMax(lower_).cwiseMin(upper_);
}

bool FeasibleBox::contains(const Vector& x) const {
  if (x.size() != lower_.size()) return false;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (!(x[j] >= lower_[j] && x[j] <= upper_[j])) return false;
  }
  return true;
}

FeasibleBox FeasibleBox::intersect(const FeasibleBox& a, const FeasibleBox& b) {
  if (a.dimension() != b.dimension()) {
    throw StructuralError("box intersection: dimension mismatch");
  }
  return FeasibleBox(a.lower_.cwiseMax(b.lower_), a.upper_.cwiseMin(b.upper_));
}

FeasibleBox FeasibleBox::uniform(int n, double lower, double upper) {
  return FeasibleBox(Vector::Constant(n, lower), Vector::Constant(n, upper));
}

Vector project(const FeasibleBox& box, const Vector& x) { return box.project(x); }

}  // namespace lovo
