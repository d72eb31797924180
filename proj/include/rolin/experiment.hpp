#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rolin/lifter.hpp"
#include "rolin/simgen.hpp"
#include "rolin/statistic.hpp"

namespace rolin {

// Defaults used across the CLI and the studies:
//   Rolin: Gaussian kernels, widths from the lower-quartile rule, Beta(2,1)
//          lifter with Laplace kernel, b = sqrt(pq/n)
//   HSIC:  Gaussian kernels, median-heuristic widths, B = 399 permutations
struct TestOptions {
    KernelFamily x_kernel = KernelFamily::Gaussian;
    KernelFamily y_kernel = KernelFamily::Gaussian;
    std::optional<double> bandwidth_b;  // Rolin lifter bandwidth; default sqrt(pq/n)
    LifterDistribution lifter = LifterDistribution::Beta21;
    LifterKernel lifter_kernel = LifterKernel::LaplaceScalar;
    std::size_t permutations = 399;
    std::size_t permutation_threads = 1;
};

// Runs one test with the method's default kernel widths. `seed` drives the
// lifter draw (Rolin) or the permutations (HSIC); the gamma test ignores it.
TestResult run_test(Method method, const Dataset& data, double alpha, std::uint64_t seed,
                    const TestOptions& options = {});

struct ExperimentConfig {
    ScenarioSpec scenario;  // n and seed are overridden per cell and replication
    std::vector<Method> methods{Method::Rolin};
    double alpha = 0.05;
    std::size_t replications = 1000;
    std::vector<std::size_t> n_grid{50, 100, 200, 400};
    std::uint64_t seed = 0;
    std::string output_path;
    TestOptions options;
    std::size_t threads = 1;

    void validate() const;
};

struct RejectionCell {
    Method method = Method::Rolin;
    std::size_t n = 0;
    std::size_t replications = 0;  // completed replications
    std::size_t rejections = 0;
    std::size_t failures = 0;
    double rejection_rate = 0.0;   // rejections / replications
    double monte_carlo_se = 0.0;
    bool se_defined = false;       // false when fewer than 2 replications completed
    double mean_statistic = 0.0;
    double mean_runtime_ms = 0.0;
    std::string first_failure;
};

struct RejectionReport {
    std::vector<RejectionCell> cells;  // ordered by n, then by method as configured

    const RejectionCell& cell(Method method, std::size_t n) const;
};

// Replication r at sample size n draws its data from substream (seed, n, r),
// shared by all methods, and its test randomness from (seed, method, n, r).
// Failed replications are counted and excluded; they never abort the study.
RejectionReport run_rejection_study(const ExperimentConfig& config);

// Tidy CSV: scenario,method,n,replications,rejections,failures,rejection_rate,se,mean_statistic
// plus mean_runtime_ms when `with_timing` (timing is not reproducible).
void write_rejection_csv(std::ostream& out, const ExperimentConfig& config, const RejectionReport& report,
                         bool with_timing = false);

struct NullDistribution {
    std::vector<double> statistics;
    std::size_t failures = 0;
    double ks_distance = 0.0;
    double mean = 0.0;
    bool low_power = false;  // too few replications for the KS distance to mean much
};

// Rolin statistics over `replications` draws of a null scenario.
// Throws ArgumentError for scenarios that are not null-flagged.
NullDistribution run_null_distribution(const ScenarioSpec& scenario, std::size_t n, std::size_t replications,
                                       std::uint64_t seed, const TestOptions& options = {}, std::size_t threads = 1);

// Exact one-sample Kolmogorov-Smirnov distance to N(0, 1).
double ks_distance_normal(std::vector<double> sample);

struct RuntimeRow {
    Method method = Method::Rolin;
    std::size_t n = 0;
    double ms = 0.0;  // median over repeats
    bool failed = false;
    std::string failure;
};

// Median wall time of one full test per (method, n) on Case 1 data at p = q = 5.
// Timings run sequentially so they do not compete for cores.
std::vector<RuntimeRow> run_benchmark(const std::vector<std::size_t>& n_grid, const std::vector<Method>& methods,
                                      std::size_t repeats, std::uint64_t seed, const TestOptions& options = {});

void write_benchmark_csv(std::ostream& out, const std::vector<RuntimeRow>& rows);

// Summation in a fixed pairwise order, independent of thread count.
double pairwise_sum(const double* values, std::size_t count);

}  // namespace rolin
