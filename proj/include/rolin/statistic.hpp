#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "rolin/dataset.hpp"
#include "rolin/kernels.hpp"
#include "rolin/lifter.hpp"
#include "rolin/matrix.hpp"

namespace rolin {

enum class Method { Rolin, HsicPermutation, HsicGamma };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

struct TestResult {
    Method method = Method::Rolin;
    double statistic = 0.0;
    double p_value = 1.0;
    bool reject = false;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::size_t p = 0;
    std::size_t q = 0;
    double bandwidth_b = 0.0;  // 0 for the HSIC baselines
    std::map<std::string, double> diagnostics;
};

// Standard normal CDF via erfc.
double standard_normal_cdf(double x);
// 1 - Phi(x), computed without cancellation in the upper tail.
double standard_normal_upper_tail(double x);

// T_{n,b} from U-centered matrices: sum_{i != j} Ux_ij Uyz_ij / (n (n - 3)).
// The normalizer makes this equal to numerator_oracle. Requires n >= 6.
double numerator_fast(const Matrix& ux, const Matrix& uyz);

// Reference O(n^4) evaluation of the three permutation sums
//   1/P(n,2) sum_{i,j} zx_ij y_ij z_ij
//   - 2/P(n,3) sum_{i,j,s} zx_ij y_is z_is
//   + 1/P(n,4) sum_{i,j,s,t} zx_ij y_st z_st
// over pairwise-distinct indices. Requires n >= 4.
double numerator_oracle(const GramMatrix& gx, const GramMatrix& gy, const GramMatrix& gz);

// 2 (n-4)(n-5) / (n^2 (n-1)^2 (n-2)(n-3)).
double variance_prefactor(Eigen::Index n);

// prefactor * sum_{i != j} (Vx_ij Vyz_ij)^2 for V-centered inputs. No degeneracy check.
double variance_from_centered(const Matrix& vx, const Matrix& vyz);

// S^2_{n,b} from the raw Gram on X and the lifted Gram eta o kappa_b.
// Throws SampleSizeError for n < 6 and DegenerateSampleError when S^2 == 0.
double variance_estimate(const GramMatrix& gx, const GramMatrix& gyz);

struct RolinStatistic {
    double numerator = 0.0;  // T_{n,b}
    double variance = 0.0;   // S^2_{n,b}
    double statistic = 0.0;  // T / S
};

// Studentized statistic from the X Gram and the lifted (Y, Z) Gram.
RolinStatistic rolin_statistic(const GramMatrix& gx, const GramMatrix& gyz);

// Same quantity computed straight from data and a lifter sample in O(n^2)
// memory passes, without materializing the centered matrices. Agrees with
// rolin_statistic on the corresponding Gram matrices up to rounding.
RolinStatistic rolin_statistic_fused(const Dataset& data, const KernelSpec& xspec, const KernelSpec& yspec,
                                     const Vector& z, double bandwidth_b, LifterKernel kernel);

// Kernel spec whose widths come from `rule` applied to `data`.
KernelSpec heuristic_spec(KernelFamily family, const DataMatrix& data, WidthRule rule);

// One-sided test: statistic = T/S, p = 1 - Phi(statistic), reject iff p < alpha.
TestResult rolin_test(const Dataset& data, const KernelSpec& xspec, const KernelSpec& yspec, const LifterConfig& lifter,
                      double alpha);

void validate_alpha(double alpha);

}  // namespace rolin
