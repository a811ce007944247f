#pragma once

#include <Eigen/Core>
#include <vector>

namespace evos {

template <class S>
using MatrixX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using VectorX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using IndexVec = std::vector<int>;

// Round half up, the convention used for every fractional count in this
// library (selection sizes, mutation counts, balancer splits).
inline int roundHalfUp(double x) { return static_cast<int>(std::floor(x + 0.5)); }

}  // namespace evos
