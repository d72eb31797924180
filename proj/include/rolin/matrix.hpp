#pragma once

#include <Eigen/Dense>

namespace rolin {

// Sample matrices are row-major so that each observation is a contiguous row.
using DataMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace rolin
