#pragma once

#include <cstdint>
#include <span>

#include "rolin/dataset.hpp"
#include "rolin/kernels.hpp"
#include "rolin/statistic.hpp"

namespace rolin {

// Biased (V-statistic) HSIC: (1/n^2) sum_{i,j} (C Gx C)_ij (C Gy C)_ij.
double hsic_vstat(const GramMatrix& gx, const GramMatrix& gy);

// (1/n^2) sum_{i,j} vx_ij vy_{perm(i), perm(j)} for V-centered vx, vy.
// Centering commutes with relabeling, so this is the HSIC of the permuted sample.
double permuted_hsic(const Matrix& vx, const Matrix& vy, std::span<const Eigen::Index> perm);

// Permutation test with B Y-permutations. p = (1 + #{permuted >= observed}) / (B + 1).
// Permutation b draws from substream (seed, b), so the result does not depend
// on `threads`.
TestResult hsic_permutation_test(const Dataset& data, const KernelSpec& xspec, const KernelSpec& yspec,
                                 std::size_t permutations, double alpha, std::uint64_t seed, std::size_t threads = 1);

// Gamma approximation to the null of n * HSIC_b, fitted by matching the
// estimated null mean and variance. Deterministic. Throws NumericalError when
// the fitted moments are not positive.
TestResult hsic_gamma_test(const Dataset& data, const KernelSpec& xspec, const KernelSpec& yspec, double alpha);

}  // namespace rolin
