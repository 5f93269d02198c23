#pragma once

#include <Eigen/Core>

namespace spgm {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace spgm
