#include "rolin/simgen.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "rolin/csv_io.hpp"
#include "rolin/errors.hpp"
#include "rolin/rng.hpp"

namespace rolin {

namespace {

// Primitive draws. Each call builds a fresh distribution object so a draw
// never depends on state cached by an earlier one.
struct Draw {
    Rng rng;

    double normal(double mean = 0.0, double sd = 1.0) { return std::normal_distribution<double>(mean, sd)(rng); }
    double uniform() { return rng.uniform(); }
    double gamma(double shape, double scale) { return std::gamma_distribution<double>(shape, scale)(rng); }
    double weibull(double shape, double scale) { return std::weibull_distribution<double>(shape, scale)(rng); }
    double lognormal() { return std::lognormal_distribution<double>(0.0, 1.0)(rng); }
    double student_t(double df) { return std::student_t_distribution<double>(df)(rng); }
    double chi_squared(double df) { return std::chi_squared_distribution<double>(df)(rng); }
    double exponential(double rate) { return std::exponential_distribution<double>(rate)(rng); }
    double binomial(int trials, double prob) { return std::binomial_distribution<int>(trials, prob)(rng); }
    double poisson(double mean) { return std::poisson_distribution<int>(mean)(rng); }
};

struct Recipe {
    std::function<double(Draw&)> x;
    // y(draw, x value of the paired coordinate, coordinate index)
    std::function<double(Draw&, double, std::size_t)> y;
};

Recipe case_recipe(int id) {
    switch (id) {
        case 1: return {[](Draw& d) { return d.normal(); }, [](Draw& d, double, std::size_t) { return d.normal(); }};
        case 2:
            return {[](Draw& d) { return d.normal(); },
                    [](Draw& d, double, std::size_t) { const double y1 = d.normal(); return y1 * d.uniform(); }};
        case 3:
            return {[](Draw& d) { return d.gamma(1.0, 1.0); },
                    [](Draw& d, double, std::size_t) { return d.gamma(1.0, 1.0); }};
        case 4:
            return {[](Draw& d) { return d.gamma(1.0, 1.0); },
                    [](Draw& d, double, std::size_t) { const double y1 = d.gamma(1.0, 1.0); return y1 * d.normal(); }};
        case 5:
            return {[](Draw& d) { return d.uniform(); },
                    [](Draw& d, double x, std::size_t) { return 0.2 * x + 0.8 * d.uniform(); }};
        case 6:
            return {[](Draw& d) { return d.weibull(1.0, 1.0); },
                    [](Draw& d, double x, std::size_t) { return 0.2 * x + 0.8 * d.weibull(1.0, 1.0); }};
        // Y = aX + b eps with a = (1, 0, ..., 0), b = (0, 1, ..., 1).
        case 7:
            return {[](Draw& d) { return d.lognormal(); },
                    [](Draw& d, double x, std::size_t k) { return k == 0 ? x : d.lognormal(); }};
        case 8:
            return {[](Draw& d) { return d.weibull(0.8, 1.0); },
                    [](Draw& d, double x, std::size_t k) { return k == 0 ? x : d.weibull(0.8, 1.0); }};
        case 9:
            return {[](Draw& d) { return d.normal(); },
                    [](Draw& d, double x, std::size_t) { return std::log1p(x * x) + d.normal(); }};
        case 10:
            return {[](Draw& d) { return d.student_t(2.0); },
                    [](Draw& d, double x, std::size_t) { return d.weibull(5.0 / 3.0, 1.0) / (1.0 + x * x); }};
        case 11:
            return {[](Draw& d) { return d.normal(); },
                    [](Draw& d, double x, std::size_t) { const double e = d.student_t(2.0); return x * e + e; }};
        case 12:
            return {[](Draw& d) { return d.normal(); },
                    [](Draw& d, double x, std::size_t) { return x * x + d.student_t(2.0); }};
        case 13:
            return {[](Draw& d) { return d.uniform(); },
                    [](Draw& d, double x, std::size_t) { return std::log1p(x * x) + d.student_t(2.0); }};
        case 14:
            return {[](Draw& d) { return d.normal(); },
                    [](Draw& d, double x, std::size_t) { return d.chi_squared(5.0 / 3.0) / (1.0 + x * x); }};
        case 15:
            return {[](Draw& d) { return d.exponential(1.0); },
                    [](Draw& d, double x, std::size_t) { const double e = d.student_t(8.0 / 3.0); return x * e + e; }};
        case 16:
            return {[](Draw& d) { return d.uniform(); },
                    [](Draw& d, double x, std::size_t) { return x * x + d.normal(); }};
        default: throw ArgumentError("unknown case id " + std::to_string(id) + " (expected 1..16)");
    }
}

Recipe example_recipe(int id) {
    switch (id) {
        case 1:
            return {[](Draw& d) { return d.binomial(1, 0.5); },
                    [](Draw& d, double x, std::size_t) {
                        const double e1 = d.binomial(2, 0.5);
                        const double e2 = d.binomial(3, 0.5);
                        return x * e1 + (1.0 - x) * e2;
                    }};
        case 2:
            return {[](Draw& d) { return d.binomial(2, 0.5); },
                    [](Draw& d, double x, std::size_t) { return std::sqrt(x) + d.binomial(10, 0.5); }};
        case 3:
            return {[](Draw& d) { return d.poisson(1.0); },
                    [](Draw& d, double x, std::size_t) { return 0.2 * (x + x * x) + d.poisson(2.0); }};
        case 4:
            return {[](Draw& d) { return d.poisson(1.0); },
                    [](Draw& d, double x, std::size_t) { const double e = d.binomial(3, 0.5); return x - e * e; }};
        case 5:
            return {[](Draw& d) { return d.binomial(1, 0.5); },
                    [](Draw& d, double x, std::size_t) { return d.normal(x, 1.0); }};
        case 6:
            return {[](Draw& d) { return d.binomial(3, 0.5); },
                    [](Draw& d, double x, std::size_t) { return x * d.normal(); }};
        case 7:
            return {[](Draw& d) { return d.binomial(1, 0.5); },
                    [](Draw& d, double x, std::size_t) {
                        const double e1 = d.chi_squared(3.0);
                        const double e2 = d.chi_squared(5.0 / 3.0);
                        return x * e1 + (1.0 - x) * e2;
                    }};
        case 8:
            return {[](Draw& d) { return d.poisson(1.0); },
                    [](Draw& d, double x, std::size_t) {
                        const double e1 = d.student_t(2.0);
                        const double e2 = d.normal(0.0, std::sqrt(2.0));
                        return x * e1 + e2;
                    }};
        case 9:
            return {[](Draw& d) { return d.binomial(5, 0.5); },
                    [](Draw& d, double, std::size_t) { return d.binomial(10, 0.5); }};
        case 10:
            return {[](Draw& d) { return d.binomial(6, 0.5); },
                    [](Draw& d, double, std::size_t) { return d.poisson(2.0); }};
        case 11:
            return {[](Draw& d) { return d.binomial(5, 0.5); },
                    [](Draw& d, double, std::size_t) { return d.normal(); }};
        case 12:
            return {[](Draw& d) { return d.poisson(2.5); },
                    [](Draw& d, double, std::size_t) { return d.normal(); }};
        default: throw ArgumentError("unknown example id " + std::to_string(id) + " (expected 1..12)");
    }
}

std::vector<ScenarioInfo> build_catalog() {
    const char* cases[] = {
        "X, Y ~ N(0,1)",
        "X, Y1 ~ N(0,1), eps ~ U[0,1], Y = Y1 eps",
        "X, Y ~ Gamma(1,1)",
        "X, Y1 ~ Gamma(1,1), eps ~ N(0,1), Y = Y1 eps",
        "X, eps ~ U[0,1], Y = 0.2 X + 0.8 eps",
        "X, eps ~ Weibull(1,1), Y = 0.2 X + 0.8 eps",
        "log X, log eps ~ N(0,1), Y = aX + b eps",
        "X, eps ~ Weibull(0.8,1), Y = aX + b eps",
        "X, eps ~ N(0,1), Y = log(1 + X^2) + eps",
        "X ~ t2, eps ~ Weibull(5/3,1), Y = eps / (1 + X^2)",
        "X ~ N(0,1), eps ~ t2, Y = X eps + eps",
        "X ~ N(0,1), eps ~ t2, Y = X^2 + eps",
        "X ~ U[0,1], eps ~ t2, Y = log(1 + X^2) + eps",
        "X ~ N(0,1), eps ~ chi2(5/3), Y = eps / (1 + X^2)",
        "X ~ Exp(1), eps ~ t(8/3), Y = X eps + eps",
        "X ~ U[0,1], eps ~ N(0,1), Y = X^2 + eps",
    };
    const char* examples[] = {
        "X ~ B(1,.5), e1 ~ B(2,.5), e2 ~ B(3,.5), Y = X e1 + (1 - X) e2",
        "X ~ B(2,.5), eps ~ B(10,.5), Y = sqrt(X) + eps",
        "X ~ Pois(1), eps ~ Pois(2), Y = 0.2 (X + X^2) + eps",
        "X ~ Pois(1), eps ~ B(3,.5), Y = X - eps^2",
        "X ~ B(1,.5), Y ~ N(X, 1)",
        "X ~ B(3,.5), eps ~ N(0,1), Y = X eps",
        "X ~ B(1,.5), e1 ~ chi2(3), e2 ~ chi2(5/3), Y = X e1 + (1 - X) e2",
        "X ~ Pois(1), e1 ~ t2, e2 ~ N(0,2), Y = X e1 + e2",
        "X ~ B(5,.5), Y ~ B(10,.5)",
        "X ~ B(6,.5), Y ~ Pois(2)",
        "X ~ B(5,.5), Y ~ N(0,1)",
        "X ~ Pois(2.5), Y ~ N(0,1)",
    };
    std::vector<ScenarioInfo> out;
    for (int i = 1; i <= 16; ++i)
        out.push_back({ScenarioKind::Case, i, "case" + std::to_string(i), cases[i - 1], i <= 4});
    for (int i = 1; i <= 12; ++i)
        out.push_back({ScenarioKind::Example, i, "example" + std::to_string(i), examples[i - 1], i >= 9});
    return out;
}

}  // namespace

ScenarioSpec ScenarioSpec::make_case(int id, std::size_t n, std::uint64_t seed) {
    const std::size_t dim = id >= 13 ? 10 : 5;
    return {ScenarioKind::Case, id, n, dim, dim, seed, {}};
}

ScenarioSpec ScenarioSpec::make_example(int id, std::size_t n, std::uint64_t seed) {
    return {ScenarioKind::Example, id, n, 5, 5, seed, {}};
}

ScenarioSpec ScenarioSpec::csv(std::string path) {
    ScenarioSpec s;
    s.kind = ScenarioKind::CsvFile;
    s.id = 0;
    s.path = std::move(path);
    return s;
}

std::string ScenarioSpec::name() const {
    switch (kind) {
        case ScenarioKind::Case: return "case" + std::to_string(id);
        case ScenarioKind::Example: return "example" + std::to_string(id);
        case ScenarioKind::CsvFile: return "csv:" + path;
    }
    return "?";
}

const std::vector<ScenarioInfo>& list_scenarios() {
    static const std::vector<ScenarioInfo> catalog = build_catalog();
    return catalog;
}

const ScenarioInfo& scenario_info(ScenarioKind kind, int id) {
    for (const auto& s : list_scenarios())
        if (s.kind == kind && s.id == id) return s;
    throw ArgumentError("unknown scenario id " + std::to_string(id));
}

Dataset generate(const ScenarioSpec& spec) {
    if (spec.kind == ScenarioKind::CsvFile) return load_dataset(spec.path);
    const Recipe recipe = spec.kind == ScenarioKind::Case ? case_recipe(spec.id) : example_recipe(spec.id);
    if (spec.n < 1) throw SampleSizeError("scenario sample size must be at least 1");
    if (spec.p < 1 || spec.q < 1) throw ArgumentError("scenario dimensions must be at least 1");

    const auto n = static_cast<Eigen::Index>(spec.n);
    const auto p = static_cast<Eigen::Index>(spec.p);
    const auto q = static_cast<Eigen::Index>(spec.q);
    Dataset d{DataMatrix(n, p), DataMatrix(n, q), spec.name()};
    Draw draw{Rng(spec.seed)};
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < p; ++k) d.x(i, k) = recipe.x(draw);
        for (Eigen::Index k = 0; k < q; ++k) d.y(i, k) = recipe.y(draw, d.x(i, k % p), static_cast<std::size_t>(k));
    }
    return d;
}

}  // namespace rolin
