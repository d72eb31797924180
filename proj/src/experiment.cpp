#include "rolin/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "rolin/baselines.hpp"
#include "rolin/csv_io.hpp"
#include "rolin/errors.hpp"
#include "rolin/parallel.hpp"
#include "rolin/rng.hpp"

namespace rolin {

namespace {

std::uint64_t method_key(Method m) { return static_cast<std::uint64_t>(m) + 1; }

ScenarioSpec at(const ScenarioSpec& base, std::size_t n, std::uint64_t seed) {
    ScenarioSpec s = base;
    s.n = n;
    s.seed = seed;
    return s;
}

struct Outcome {
    bool ok = false;
    bool reject = false;
    double statistic = 0.0;
    double ms = 0.0;
    std::string error;
};

}  // namespace

TestResult run_test(Method method, const Dataset& data, double alpha, std::uint64_t seed,
                    const TestOptions& options) {
    data.validate();
    switch (method) {
        case Method::Rolin: {
            const KernelSpec xs = heuristic_spec(options.x_kernel, data.x, WidthRule::LowerQuantileHalfMedianFallback);
            const KernelSpec ys = heuristic_spec(options.y_kernel, data.y, WidthRule::LowerQuantileHalfMedianFallback);
            LifterConfig lifter;
            lifter.distribution = options.lifter;
            lifter.kernel = options.lifter_kernel;
            lifter.bandwidth_b = options.bandwidth_b.value_or(default_bandwidth(
                static_cast<std::size_t>(data.n()), static_cast<std::size_t>(data.p()),
                static_cast<std::size_t>(data.q())));
            lifter.seed = seed;
            return rolin_test(data, xs, ys, lifter, alpha);
        }
        case Method::HsicPermutation: {
            const KernelSpec xs = heuristic_spec(options.x_kernel, data.x, WidthRule::Median);
            const KernelSpec ys = heuristic_spec(options.y_kernel, data.y, WidthRule::Median);
            return hsic_permutation_test(data, xs, ys, options.permutations, alpha, seed, options.permutation_threads);
        }
        case Method::HsicGamma: {
            const KernelSpec xs = heuristic_spec(options.x_kernel, data.x, WidthRule::Median);
            const KernelSpec ys = heuristic_spec(options.y_kernel, data.y, WidthRule::Median);
            TestResult r = hsic_gamma_test(data, xs, ys, alpha);
            r.seed = seed;
            return r;
        }
    }
    throw ArgumentError("unknown method");
}

void ExperimentConfig::validate() const {
    validate_alpha(alpha);
    if (replications < 1) throw ArgumentError("replications must be at least 1");
    if (n_grid.empty()) throw ArgumentError("n grid must not be empty");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1]) throw ArgumentError("n grid must be strictly increasing");
    if (methods.empty()) throw ArgumentError("at least one method is required");
}

const RejectionCell& RejectionReport::cell(Method method, std::size_t n) const {
    for (const auto& c : cells)
        if (c.method == method && c.n == n) return c;
    throw ArgumentError("no cell for method " + std::string(to_string(method)) + " at n = " + std::to_string(n));
}

double pairwise_sum(const double* values, std::size_t count) {
    if (count <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < count; ++i) s += values[i];
        return s;
    }
    const std::size_t half = count / 2;
    return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

RejectionReport run_rejection_study(const ExperimentConfig& config) {
    config.validate();
    RejectionReport report;
    for (std::size_t n : config.n_grid) {
        for (Method method : config.methods) {
            std::vector<Outcome> outcomes(config.replications);
            parallel_for(config.replications, config.threads, [&](std::size_t rep) {
                Outcome& o = outcomes[rep];
                try {
                    const Dataset data = generate(at(config.scenario, n, derive_seed(config.seed, {n, rep})));
                    const auto start = std::chrono::steady_clock::now();
                    const TestResult r = run_test(method, data, config.alpha,
                                                  derive_seed(config.seed, {method_key(method), n, rep}),
                                                  config.options);
                    o.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
                    o.ok = true;
                    o.reject = r.reject;
                    o.statistic = r.statistic;
                } catch (const Error& e) {
                    o.error = e.what();
                }
            });

            RejectionCell cell;
            cell.method = method;
            cell.n = n;
            std::vector<double> stats, times;
            for (const auto& o : outcomes) {
                if (!o.ok) {
                    if (cell.failures++ == 0) cell.first_failure = o.error;
                    continue;
                }
                ++cell.replications;
                cell.rejections += o.reject ? 1 : 0;
                stats.push_back(o.statistic);
                times.push_back(o.ms);
            }
            if (cell.replications > 0) {
                const auto reps = static_cast<double>(cell.replications);
                cell.rejection_rate = static_cast<double>(cell.rejections) / reps;
                cell.mean_statistic = pairwise_sum(stats.data(), stats.size()) / reps;
                cell.mean_runtime_ms = pairwise_sum(times.data(), times.size()) / reps;
            }
            cell.se_defined = cell.replications >= 2;
            if (cell.se_defined)
                cell.monte_carlo_se =
                    std::sqrt(cell.rejection_rate * (1.0 - cell.rejection_rate) / static_cast<double>(cell.replications));
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

void write_rejection_csv(std::ostream& out, const ExperimentConfig& config, const RejectionReport& report,
                         bool with_timing) {
    out << "scenario,method,n,replications,rejections,failures,rejection_rate,se,mean_statistic";
    if (with_timing) out << ",mean_runtime_ms";
    out << '\n';
    for (const auto& c : report.cells) {
        out << config.scenario.name() << ',' << to_string(c.method) << ',' << c.n << ',' << c.replications << ','
            << c.rejections << ',' << c.failures << ',' << format_double(c.rejection_rate) << ','
            << (c.se_defined ? format_double(c.monte_carlo_se) : "NA") << ','
            << (c.replications ? format_double(c.mean_statistic) : "NA");
        if (with_timing) out << ',' << format_double(c.mean_runtime_ms);
        out << '\n';
    }
}

double ks_distance_normal(std::vector<double> sample) {
    if (sample.empty()) throw SampleSizeError("KS distance of an empty sample");
    std::sort(sample.begin(), sample.end());
    const auto m = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = standard_normal_cdf(sample[i]);
        d = std::max({d, static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m});
    }
    return d;
}

NullDistribution run_null_distribution(const ScenarioSpec& scenario, std::size_t n, std::size_t replications,
                                       std::uint64_t seed, const TestOptions& options, std::size_t threads) {
    if (scenario.kind == ScenarioKind::CsvFile || !scenario_info(scenario.kind, scenario.id).null_hypothesis)
        throw ArgumentError("null distribution check needs a null scenario; " + scenario.name() + " is not one");
    if (replications < 1) throw ArgumentError("replications must be at least 1");

    std::vector<std::optional<double>> stats(replications);
    parallel_for(replications, threads, [&](std::size_t rep) {
        try {
            const Dataset data = generate(at(scenario, n, derive_seed(seed, {n, rep})));
            stats[rep] = run_test(Method::Rolin, data, 0.05, derive_seed(seed, {method_key(Method::Rolin), n, rep}),
                                  options)
                             .statistic;
        } catch (const Error&) {
        }
    });

    NullDistribution out;
    for (const auto& s : stats) {
        if (s) out.statistics.push_back(*s);
        else ++out.failures;
    }
    if (out.statistics.empty()) throw DegenerateSampleError("every replication failed");
    out.ks_distance = ks_distance_normal(out.statistics);
    out.mean = pairwise_sum(out.statistics.data(), out.statistics.size()) / static_cast<double>(out.statistics.size());
    out.low_power = out.statistics.size() < 30;
    return out;
}

std::vector<RuntimeRow> run_benchmark(const std::vector<std::size_t>& n_grid, const std::vector<Method>& methods,
                                      std::size_t repeats, std::uint64_t seed, const TestOptions& options) {
    if (repeats < 1) throw ArgumentError("repeats must be at least 1");
    std::vector<RuntimeRow> rows;
    for (std::size_t n : n_grid) {
        for (Method method : methods) {
            RuntimeRow row;
            row.method = method;
            row.n = n;
            std::vector<double> times;
            try {
                for (std::size_t r = 0; r < repeats; ++r) {
                    const Dataset data = generate(ScenarioSpec::make_case(1, n, derive_seed(seed, {n, r})));
                    const auto start = std::chrono::steady_clock::now();
                    run_test(method, data, 0.05, derive_seed(seed, {method_key(method), n, r}), options);
                    times.push_back(
                        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
                }
                std::sort(times.begin(), times.end());
                const std::size_t m = times.size();
                row.ms = m % 2 ? times[m / 2] : 0.5 * (times[m / 2 - 1] + times[m / 2]);
            } catch (const std::bad_alloc&) {
                row.failed = true;
                row.failure = "out of memory";
            } catch (const Error& e) {
                row.failed = true;
                row.failure = e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_benchmark_csv(std::ostream& out, const std::vector<RuntimeRow>& rows) {
    out << "method,n,ms\n";
    for (const auto& r : rows)
        out << to_string(r.method) << ',' << r.n << ',' << (r.failed ? "NA" : format_double(r.ms)) << '\n';
}

}  // namespace rolin
