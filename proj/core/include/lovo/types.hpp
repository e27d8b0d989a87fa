#pragma once

#include <Eigen/Core>

namespace lovo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// 1-based index of a component function f_i, i in 1..r.
using ComponentIndex = int;

}  // namespace lovo
