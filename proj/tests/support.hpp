#pragma once

// Small generators for property tests. Everything is seeded so failures replay.

#include <cstdint>
#include <random>
#include <vector>

#include "rolin/dataset.hpp"
#include "rolin/kernels.hpp"
#include "rolin/matrix.hpp"
#include "rolin/rng.hpp"

namespace testing_support {

inline rolin::DataMatrix normal_matrix(rolin::Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> nd;
    rolin::DataMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = nd(rng);
    return m;
}

inline rolin::Dataset normal_dataset(rolin::Rng& rng, Eigen::Index n, Eigen::Index p, Eigen::Index q) {
    return {normal_matrix(rng, n, p), normal_matrix(rng, n, q), "random"};
}

// Random symmetric matrix with entries in [-1, 1).
inline rolin::Matrix symmetric_matrix(rolin::Rng& rng, Eigen::Index n) {
    rolin::Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) m(i, j) = m(j, i) = 2.0 * rng.uniform() - 1.0;
    return m;
}

inline std::vector<Eigen::Index> random_permutation(rolin::Rng& rng, Eigen::Index n) {
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    return perm;
}

inline rolin::DataMatrix permute_rows(const rolin::DataMatrix& m, const std::vector<Eigen::Index>& perm) {
    rolin::DataMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) out.row(i) = m.row(perm[static_cast<std::size_t>(i)]);
    return out;
}

inline rolin::KernelSpec random_spec(rolin::Rng& rng, Eigen::Index dim) {
    rolin::KernelSpec spec;
    spec.family = rng.below(2) ? rolin::KernelFamily::Gaussian : rolin::KernelFamily::Laplace;
    for (Eigen::Index k = 0; k < dim; ++k) spec.widths.push_back(0.5 + 1.5 * rng.uniform());
    return spec;
}

inline double rel_diff(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

}  // namespace testing_support
