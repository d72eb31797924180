// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Everything uses root seed 0 unless a criterion needs independent streams.

#include <chrono>
#include <filesystem>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "rolin/baselines.hpp"
#include "rolin/centering.hpp"
#include "rolin/cli.hpp"
#include "rolin/experiment.hpp"
#include "rolin/parallel.hpp"
#include "rolin/rng.hpp"
#include "support.hpp"

using namespace rolin;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [miss]");
        pass = pass && ok;
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

bool in(double v, double lo, double hi) { return v >= lo && v <= hi; }

RejectionReport study(const ScenarioSpec& scn, std::vector<Method> methods, std::vector<std::size_t> grid,
                      std::size_t reps, std::uint64_t seed = 0) {
    ExperimentConfig cfg;
    cfg.scenario = scn;
    cfg.methods = std::move(methods);
    cfg.n_grid = std::move(grid);
    cfg.replications = reps;
    cfg.seed = seed;
    cfg.threads = worker_count();
    return run_rejection_study(cfg);
}

Verdict constants() {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    const auto normal = lifter_constants(LifterDistribution::StandardNormal, LifterKernel::LaplaceScalar, 0.1);
    v.require(std::abs(normal.a1 - 0.2821) <= 0.0005, "normal A1 " + fmt("%.5f", normal.a1));
    v.require(std::abs(normal.a2 - 0.0919) <= 0.0005, "A2 " + fmt("%.5f", normal.a2));
    v.require(std::abs(normal.ratio - 1.1547) <= 0.001, "ratio " + fmt("%.5f", normal.ratio));
    const auto t3 = lifter_constants(LifterDistribution::StudentT3, LifterKernel::LaplaceScalar, 0.1);
    v.require(std::abs(t3.ratio - 1.2624) <= 0.002, "t3 ratio " + fmt("%.5f", t3.ratio) + " vs 1.2624+-0.002");
    for (double b : {0.05, 0.1, 0.2}) {
        const double r = lifter_constants(LifterDistribution::Beta21, LifterKernel::LaplaceScalar, b).ratio;
        v.require(in(r, 1.07, 1.10), "beta21 b=" + fmt("%g", b) + " ratio " + fmt("%.5f", r));
    }
    const double secs = seconds_since(start);
    v.require(secs < 1.0, "time " + fmt("%.3fs", secs));
    return v;
}

Verdict oracle_equivalence() {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    Rng rng(derive_seed(0, {2}));
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index n = 6 + static_cast<Eigen::Index>(rng.below(7));
        const Eigen::Index p = 1 + static_cast<Eigen::Index>(rng.below(3));
        const Eigen::Index q = 1 + static_cast<Eigen::Index>(rng.below(3));
        const Dataset d = testing_support::normal_dataset(rng, n, p, q);
        const GramMatrix gx = gram(testing_support::random_spec(rng, p), d.x);
        const GramMatrix gy = gram(testing_support::random_spec(rng, q), d.y);
        Vector z(n);
        for (auto& e : z) e = std::sqrt(rng.uniform());
        const auto kernel = rng.below(2) ? LifterKernel::LaplaceScalar : LifterKernel::GaussianScalar;
        const GramMatrix gz = lifter_gram(z, 0.05 + rng.uniform(), kernel);
        const double fast = numerator_fast(u_center(gx), u_center(gy.hadamard(gz)));
        worst = std::max(worst, testing_support::rel_diff(fast, numerator_oracle(gx, gy, gz)));
    }
    v.require(worst <= 1e-10, "max relative difference " + fmt("%.2e", worst));
    const double secs = seconds_since(start);
    v.require(secs < 60.0, "time " + fmt("%.2fs", secs));
    return v;
}

Verdict type_one() {
    Verdict v;
    std::vector<ScenarioSpec> nulls;
    for (int id = 1; id <= 4; ++id) nulls.push_back(ScenarioSpec::make_case(id, 200, 0));
    for (int id = 9; id <= 12; ++id) nulls.push_back(ScenarioSpec::make_example(id, 200, 0));
    for (const auto& scn : nulls) {
        const auto& c = study(scn, {Method::Rolin}, {200}, 1000).cells.front();
        v.require(c.failures == 0 && in(c.rejection_rate, 0.03, 0.07),
                  scn.name() + " " + fmt("%.3f", c.rejection_rate));
    }
    return v;
}

Verdict null_normality() {
    Verdict v;
    for (auto [n, bound] : {std::pair<std::size_t, double>{500, 0.06}, {1000, 0.05}}) {
        const auto nd = run_null_distribution(ScenarioSpec::make_case(1, n, 0), n, 1000, 0, {}, worker_count());
        v.require(nd.failures == 0 && nd.ks_distance <= bound,
                  "n=" + std::to_string(n) + " KS " + fmt("%.4f", nd.ks_distance) + " <= " + fmt("%g", bound));
    }
    return v;
}

Verdict variance_validity() {
    Verdict v;
    const std::size_t n = 100, reps = 2000;
    std::vector<double> t(reps), s2(reps);
    parallel_for(reps, worker_count(), [&](std::size_t r) {
        const Dataset d = generate(ScenarioSpec::make_case(1, n, derive_seed(0, {n, r})));
        const TestResult res = run_test(Method::Rolin, d, 0.05, derive_seed(0, {1, n, r}));
        t[r] = res.diagnostics.at("T_nb");
        s2[r] = res.diagnostics.at("S_nb") * res.diagnostics.at("S_nb");
    });
    const double mean_t = pairwise_sum(t.data(), reps) / reps;
    std::vector<double> dev(reps);
    for (std::size_t r = 0; r < reps; ++r) dev[r] = (t[r] - mean_t) * (t[r] - mean_t);
    const double mc_var = pairwise_sum(dev.data(), reps) / (reps - 1);
    const double mean_s2 = pairwise_sum(s2.data(), reps) / reps;
    const double rel = mean_s2 / mc_var - 1.0;
    v.require(std::abs(rel) <= 0.30, "mean S^2 / Var(T) - 1 = " + fmt("%+.3f", rel));
    return v;
}

Verdict power() {
    Verdict v;
    const std::vector<std::size_t> grid{50, 100, 200, 400};
    for (int id : {5, 9, 12, 16}) {
        const auto scn = ScenarioSpec::make_case(id, 50, 0);
        const auto rolin = study(scn, {Method::Rolin}, grid, 1000);
        std::string rates;
        bool monotone = true;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const auto& c = rolin.cell(Method::Rolin, grid[k]);
            rates += (k ? "/" : "") + fmt("%.3f", c.rejection_rate);
            if (k > 0) {
                const auto& prev = rolin.cell(Method::Rolin, grid[k - 1]);
                const double se = std::hypot(prev.monte_carlo_se, c.monte_carlo_se);
                monotone = monotone && c.rejection_rate >= prev.rejection_rate - 2.0 * se;
            }
        }
        const double r400 = rolin.cell(Method::Rolin, 400).rejection_rate;
        const double h400 =
            study(scn, {Method::HsicPermutation}, {400}, 1000).cell(Method::HsicPermutation, 400).rejection_rate;
        v.require(monotone && r400 >= 0.5 && h400 - r400 <= 0.15,
                  "case" + std::to_string(id) + " rolin " + rates + " hsic@400 " + fmt("%.3f", h400));
    }
    return v;
}

Verdict runtime() {
    Verdict v;
    const auto rows = run_benchmark({1000, 2000}, {Method::Rolin, Method::HsicPermutation}, 5, 0);
    auto ms = [&](Method m, std::size_t n) {
        for (const auto& r : rows)
            if (r.method == m && r.n == n) return r.failed ? std::nan("") : r.ms;
        return std::nan("");
    };
    const double r1 = ms(Method::Rolin, 1000), r2 = ms(Method::Rolin, 2000), h1 = ms(Method::HsicPermutation, 1000);
    v.require(h1 / r1 >= 20.0, "n=1000 rolin " + fmt("%.1fms", r1) + " hsic-perm " + fmt("%.1fms", h1) + " (x" +
                                   fmt("%.1f", h1 / r1) + ")");
    v.require(in(r2 / r1, 2.5, 6.0), "t(2000)/t(1000) " + fmt("%.2f", r2 / r1));
    return v;
}

Verdict p_floor() {
    Verdict v;
    Dataset d = generate(ScenarioSpec::make_case(1, 100, 0));
    d.y = d.x;  // observed HSIC is the maximum over relabelings
    const auto spec = heuristic_spec(KernelFamily::Gaussian, d.x, WidthRule::Median);
    const TestResult r = hsic_permutation_test(d, spec, spec, 399, 0.05, 0);
    v.require(r.p_value == 0.0025, "p = " + fmt("%.17g", r.p_value));
    return v;
}

std::string run_cli(const std::vector<std::string>& args, const std::string& threads) {
    ::setenv("ROLIN_THREADS", threads.c_str(), 1);
    std::vector<const char*> argv{"rolin"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return std::to_string(code) + "\n" + out.str();
}

Verdict determinism() {
    Verdict v;
    const std::string data = (std::filesystem::temp_directory_path() / "rolin_acceptance_case5.csv").string();
    run_cli({"generate", "--case", "5", "--n", "200", "--seed", "0", "--out", data}, "1");
    const std::vector<std::vector<std::string>> commands{
        {"constants", "--lifter", "normal"},
        {"constants", "--lifter", "t3"},
        {"constants", "--lifter", "beta21", "--bandwidth", "0.05"},
        {"generate", "--case", "12", "--n", "100", "--seed", "0"},
        {"test", "--data", data, "--method", "rolin", "--seed", "0"},
        {"test", "--data", data, "--method", "hsic-perm", "--seed", "0"},
        {"test", "--data", data, "--method", "hsic-gamma", "--seed", "0"},
        {"simulate", "--case", "1", "--n", "200", "--reps", "100", "--seed", "0"},
        {"simulate", "--example", "9", "--n", "200", "--reps", "100", "--seed", "0"},
        {"simulate", "--case", "5", "--n", "50,100,200,400", "--reps", "50", "--methods", "rolin,hsic-perm", "--seed",
         "0"},
        {"nullcheck", "--case", "1", "--n", "500", "--reps", "100", "--seed", "0"},
    };
    std::size_t identical = 0;
    for (const auto& cmd : commands) {
        const std::string one = run_cli(cmd, "1");
        bool same = one.rfind("0\n", 0) == 0;
        for (const char* t : {"1", "2", "8"}) same = same && run_cli(cmd, t) == one;
        if (same) ++identical;
        else v.require(false, cmd.front() + " " + cmd[1] + " " + cmd[2] + " differs or failed");
    }
    ::unsetenv("ROLIN_THREADS");
    v.require(identical == commands.size(),
              std::to_string(identical) + "/" + std::to_string(commands.size()) + " commands byte-identical at 1/2/8 threads");
    return v;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"constants reproduction", constants},
        {"oracle equivalence", oracle_equivalence},
        {"type-I calibration", type_one},
        {"null normality", null_normality},
        {"variance estimator", variance_validity},
        {"power behavior", power},
        {"runtime separation", runtime},
        {"permutation p-value floor", p_floor},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("error: ") + e.what();
        }
        failed += !v.pass;
        std::printf("criterion %zu %-26s %s  %s  (%.1fs)\n", i + 1, criteria[i].first, v.pass ? "PASS" : "FAIL",
                    v.detail.c_str(), seconds_since(start));
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed ? 1 : 0;
}
