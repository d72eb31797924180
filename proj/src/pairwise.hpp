#pragma once

// Internal helpers over the strict upper triangle of an n x n symmetric
// matrix, stored row by row: (0,1), (0,2), ..., (0,n-1), (1,2), ...

#include <vector>

#include "rolin/kernels.hpp"
#include "rolin/matrix.hpp"

namespace rolin::detail {

inline std::size_t packed_size(Eigen::Index n) {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
}

// Squared Euclidean distances between rows.
std::vector<double> packed_squared_distances(const DataMatrix& data);

// Kernel exponent per pair: sum ((a - b) / w)^2 / 2 (Gaussian) or sum |a - b| / w
// (Laplace). Equal to the exponent evaluate_kernel uses up to rounding.
std::vector<double> packed_exponents(const DataMatrix& data, const KernelSpec& spec);

// values[i] = peak * exp(-values[i]) with Eigen's vectorized exp.
void exp_negate_inplace(std::vector<double>& values, double peak);

// Type-7 quantile of sqrt(squared) without taking every square root.
// Entries must be non-negative and finite.
double quantile_of_root(const std::vector<double>& squared, double prob);

// Symmetric matrix from packed off-diagonal entries and a constant diagonal.
Matrix unpack_symmetric(const std::vector<double>& packed, Eigen::Index n, double diagonal);

}  // namespace rolin::detail
