#include "rolin/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "rolin/csv_io.hpp"
#include "rolin/errors.hpp"
#include "rolin/experiment.hpp"
#include "rolin/parallel.hpp"
#include "rolin/simgen.hpp"

namespace rolin {

nlohmann::ordered_json to_json(const TestResult& r) {
    nlohmann::ordered_json j;
    j["method"] = to_string(r.method);
    j["statistic"] = r.statistic;
    j["p_value"] = r.p_value;
    j["reject"] = r.reject;
    j["alpha"] = r.alpha;
    j["n"] = r.n;
    j["p"] = r.p;
    j["q"] = r.q;
    j["bandwidth_b"] = r.bandwidth_b;
    j["seed"] = r.seed;
    auto& diag = j["diagnostics"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.diagnostics) diag[k] = v;
    return j;
}

nlohmann::ordered_json to_json(const LifterConstants& c) {
    nlohmann::ordered_json j;
    j["a1"] = c.a1;
    j["a2"] = c.a2;
    j["a3"] = c.a3;
    j["ratio"] = c.ratio;
    return j;
}

namespace {

struct ScenarioArgs {
    int case_id = 0;
    int example_id = 0;
    std::string data;
    std::optional<std::size_t> p, q;

    void add_to(CLI::App* app, bool allow_csv) {
        auto* c = app->add_option("--case", case_id, "simulation case 1..16")->check(CLI::Range(1, 16));
        auto* e = app->add_option("--example", example_id, "appendix example 1..12")->check(CLI::Range(1, 12));
        c->excludes(e);
        if (allow_csv) app->add_option("--data", data, "CSV dataset (x1..xp,y1..yq)")->excludes(c)->excludes(e);
        app->add_option("--p", p, "override X dimension");
        app->add_option("--q", q, "override Y dimension");
    }

    ScenarioSpec spec(std::size_t n, std::uint64_t seed) const {
        ScenarioSpec s;
        if (!data.empty()) {
            s = ScenarioSpec::csv(data);
        } else if (example_id) {
            s = ScenarioSpec::make_example(example_id, n, seed);
        } else if (case_id) {
            s = ScenarioSpec::make_case(case_id, n, seed);
        } else {
            throw ArgumentError("one of --case, --example" + std::string(" is required"));
        }
        if (p) s.p = *p;
        if (q) s.q = *q;
        return s;
    }
};

struct OptionArgs {
    std::string x_kernel = "gaussian";
    std::string y_kernel = "gaussian";
    std::string bandwidth = "auto";
    std::string lifter = "beta21";
    std::string lifter_kernel = "laplace";
    std::size_t permutations = 399;

    void add_to(CLI::App* app) {
        app->add_option("--x-kernel", x_kernel, "gaussian|laplace")->capture_default_str();
        app->add_option("--y-kernel", y_kernel, "gaussian|laplace")->capture_default_str();
        app->add_option("--bandwidth", bandwidth, "lifter bandwidth b: auto (sqrt(pq/n)) or a positive number")
            ->capture_default_str();
        app->add_option("--lifter", lifter, "beta21|normal|t3")->capture_default_str();
        app->add_option("--lifter-kernel", lifter_kernel, "laplace|gaussian")->capture_default_str();
        app->add_option("--permutations", permutations, "HSIC permutations B")->capture_default_str();
    }

    TestOptions build() const {
        TestOptions o;
        o.x_kernel = parse_kernel_family(x_kernel);
        o.y_kernel = parse_kernel_family(y_kernel);
        if (bandwidth != "auto") {
            double b = 0.0;
            try {
                std::size_t used = 0;
                b = std::stod(bandwidth, &used);
                if (used != bandwidth.size()) throw std::invalid_argument(bandwidth);
            } catch (const std::exception&) {
                throw ArgumentError("--bandwidth must be 'auto' or a number, got '" + bandwidth + "'");
            }
            if (!(b > 0.0)) throw ArgumentError("--bandwidth must be positive");
            o.bandwidth_b = b;
        }
        o.lifter = parse_lifter_distribution(lifter);
        o.lifter_kernel = parse_lifter_kernel(lifter_kernel);
        o.permutations = permutations;
        return o;
    }
};

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<Method> out;
    for (const auto& n : names) out.push_back(parse_method(n));
    return out;
}

// Writes to `path`, or to `fallback` when path is empty.
template <class Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
    if (path.empty()) {
        write(fallback);
        return;
    }
    std::ofstream f(path);
    if (!f) throw DataError("cannot write '" + path + "'");
    write(f);
    if (!f) throw DataError("write to '" + path + "' failed");
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random-lifter (Rolin) independence test and HSIC baselines"};
    app.name("rolin");
    app.require_subcommand(1);

    // test
    auto* test_cmd = app.add_subcommand("test", "run one independence test on a CSV dataset; prints JSON");
    std::string test_data, test_method = "rolin";
    double test_alpha = 0.05;
    std::uint64_t test_seed = 0;
    OptionArgs test_opts;
    test_cmd->add_option("--data", test_data, "CSV dataset (x1..xp,y1..yq)")->required();
    test_cmd->add_option("--method", test_method, "rolin|hsic-perm|hsic-gamma")->capture_default_str();
    test_cmd->add_option("--alpha", test_alpha, "significance level")->capture_default_str();
    test_cmd->add_option("--seed", test_seed, "lifter / permutation seed")->capture_default_str();
    test_opts.add_to(test_cmd);

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "write a simulated dataset as CSV");
    ScenarioArgs gen_scn;
    std::size_t gen_n = 200;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen_scn.add_to(gen_cmd, false);
    gen_cmd->add_option("--n", gen_n, "sample size")->capture_default_str();
    gen_cmd->add_option("--seed", gen_seed, "seed")->capture_default_str();
    gen_cmd->add_option("--out", gen_out, "output path (default stdout)");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo rejection study; writes CSV");
    ScenarioArgs sim_scn;
    std::vector<std::size_t> sim_n{50, 100, 200, 400};
    std::size_t sim_reps = 1000;
    std::vector<std::string> sim_methods{"rolin"};
    double sim_alpha = 0.05;
    std::uint64_t sim_seed = 0;
    std::string sim_out;
    bool sim_timing = false;
    OptionArgs sim_opts;
    sim_scn.add_to(sim_cmd, true);
    sim_cmd->add_option("--n", sim_n, "sample sizes (increasing)")->delimiter(',')->capture_default_str();
    sim_cmd->add_option("--reps", sim_reps, "replications per cell")->capture_default_str();
    sim_cmd->add_option("--methods", sim_methods, "rolin,hsic-perm,hsic-gamma")->delimiter(',')->capture_default_str();
    sim_cmd->add_option("--alpha", sim_alpha, "significance level")->capture_default_str();
    sim_cmd->add_option("--seed", sim_seed, "root seed")->capture_default_str();
    sim_cmd->add_option("--out", sim_out, "output CSV (default stdout)");
    sim_cmd->add_flag("--timing", sim_timing, "append mean_runtime_ms (not reproducible)");
    sim_opts.add_to(sim_cmd);

    // nullcheck
    auto* null_cmd = app.add_subcommand("nullcheck", "null distribution of the Rolin statistic vs N(0,1)");
    ScenarioArgs null_scn;
    std::size_t null_n = 500, null_reps = 1000;
    std::uint64_t null_seed = 0;
    std::string null_out;
    OptionArgs null_opts;
    null_scn.add_to(null_cmd, false);
    null_cmd->add_option("--n", null_n, "sample size")->capture_default_str();
    null_cmd->add_option("--reps", null_reps, "replications")->capture_default_str();
    null_cmd->add_option("--seed", null_seed, "root seed")->capture_default_str();
    null_cmd->add_option("--out", null_out, "CSV of the statistic sample");
    null_opts.add_to(null_cmd);

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "wall-time benchmark on Case 1 data; writes CSV method,n,ms");
    std::vector<std::size_t> bench_n{200, 400, 600, 800, 1000, 1200, 1400, 1600, 1800, 2000};
    std::vector<std::string> bench_methods{"rolin", "hsic-perm"};
    std::size_t bench_repeats = 3;
    std::uint64_t bench_seed = 0;
    std::string bench_out;
    OptionArgs bench_opts;
    bench_cmd->add_option("--n", bench_n, "sample sizes")->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--methods", bench_methods, "methods")->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--repeats", bench_repeats, "repeats per cell (median reported)")->capture_default_str();
    bench_cmd->add_option("--seed", bench_seed, "root seed")->capture_default_str();
    bench_cmd->add_option("--out", bench_out, "output CSV (default stdout)");
    bench_opts.add_to(bench_cmd);

    // constants
    auto* const_cmd = app.add_subcommand("constants", "lifter constants A1, A2, A3 and A2/A1^2 as JSON");
    std::string const_lifter = "beta21", const_kernel = "laplace";
    double const_b = 0.1;
    const_cmd->add_option("--lifter", const_lifter, "beta21|normal|t3")->capture_default_str();
    const_cmd->add_option("--kernel", const_kernel, "laplace|gaussian")->capture_default_str();
    const_cmd->add_option("--bandwidth", const_b, "lifter bandwidth b")->capture_default_str();

    // scenarios
    auto* list_cmd = app.add_subcommand("scenarios", "list the simulation scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        const std::size_t threads = worker_count();
        if (*test_cmd) {
            validate_alpha(test_alpha);
            TestOptions o = test_opts.build();
            o.permutation_threads = threads;
            const Dataset data = load_dataset(test_data);
            out << to_json(run_test(parse_method(test_method), data, test_alpha, test_seed, o)).dump(2) << '\n';
        } else if (*gen_cmd) {
            const Dataset d = generate(gen_scn.spec(gen_n, gen_seed));
            emit(gen_out, out, [&](std::ostream& s) { write_dataset(s, d); });
        } else if (*sim_cmd) {
            ExperimentConfig cfg;
            cfg.scenario = sim_scn.spec(sim_n.front(), sim_seed);
            cfg.methods = parse_methods(sim_methods);
            cfg.alpha = sim_alpha;
            cfg.replications = sim_reps;
            cfg.n_grid = sim_n;
            cfg.seed = sim_seed;
            cfg.output_path = sim_out;
            cfg.options = sim_opts.build();
            cfg.threads = threads;
            const RejectionReport report = run_rejection_study(cfg);
            emit(sim_out, out, [&](std::ostream& s) { write_rejection_csv(s, cfg, report, sim_timing); });
            for (const auto& c : report.cells)
                if (c.failures)
                    err << "warning: " << to_string(c.method) << " n=" << c.n << ": " << c.failures
                        << " failed replications (" << c.first_failure << ")\n";
        } else if (*null_cmd) {
            const ScenarioSpec scn = null_scn.spec(null_n, null_seed);
            const NullDistribution nd =
                run_null_distribution(scn, null_n, null_reps, null_seed, null_opts.build(), threads);
            if (!null_out.empty())
                emit(null_out, out, [&](std::ostream& s) {
                    s << "replication,statistic\n";
                    for (std::size_t i = 0; i < nd.statistics.size(); ++i)
                        s << i << ',' << format_double(nd.statistics[i]) << '\n';
                });
            nlohmann::ordered_json j;
            j["scenario"] = scn.name();
            j["n"] = null_n;
            j["replications"] = nd.statistics.size();
            j["failures"] = nd.failures;
            j["ks_distance"] = nd.ks_distance;
            j["mean"] = nd.mean;
            j["low_power"] = nd.low_power;
            out << j.dump(2) << '\n';
        } else if (*bench_cmd) {
            TestOptions o = bench_opts.build();
            const auto rows = run_benchmark(bench_n, parse_methods(bench_methods), bench_repeats, bench_seed, o);
            emit(bench_out, out, [&](std::ostream& s) { write_benchmark_csv(s, rows); });
            for (const auto& r : rows)
                if (r.failed) err << "warning: " << to_string(r.method) << " n=" << r.n << ": " << r.failure << '\n';
        } else if (*const_cmd) {
            const auto dist = parse_lifter_distribution(const_lifter);
            const auto kern = parse_lifter_kernel(const_kernel);
            nlohmann::ordered_json j;
            j["lifter"] = to_string(dist);
            j["kernel"] = to_string(kern);
            j["bandwidth"] = const_b;
            j.update(to_json(lifter_constants(dist, kern, const_b)));
            out << j.dump(2) << '\n';
        } else if (*list_cmd) {
            for (const auto& s : list_scenarios())
                out << s.name << ',' << (s.null_hypothesis ? "null" : "alternative") << ',' << s.description << '\n';
        }
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const Error& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::bad_alloc&) {
        err << "data error: out of memory\n";
        return kExitData;
    }
    return kExitOk;
}

}  // namespace rolin
