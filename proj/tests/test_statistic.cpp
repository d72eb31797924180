#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "rolin/centering.hpp"
#include "rolin/errors.hpp"
#include "rolin/statistic.hpp"
#include "support.hpp"

using namespace rolin;
using testing_support::normal_dataset;
using testing_support::rel_diff;

namespace {

struct Grams {
    GramMatrix x, y, z, yz;
};

Grams random_grams(Rng& rng, Eigen::Index n, Eigen::Index p, Eigen::Index q) {
    const Dataset d = normal_dataset(rng, n, p, q);
    Grams g;
    g.x = gram(testing_support::random_spec(rng, p), d.x);
    g.y = gram(testing_support::random_spec(rng, q), d.y);
    Vector z(n);
    for (auto& v : z) v = std::sqrt(rng.uniform());
    g.z = lifter_gram(z, 0.05 + rng.uniform(), rng.below(2) ? LifterKernel::LaplaceScalar : LifterKernel::GaussianScalar);
    g.yz = g.y.hadamard(g.z);
    return g;
}

// Average of zx_ij r_ij - 2 zx_ij r_is + zx_ij r_st over ordered 4-tuples of
// distinct indices, enumerated as subsets times all 24 orderings.
double four_tuple_oracle(const GramMatrix& gx, const GramMatrix& gyz) {
    const Eigen::Index n = gx.n();
    double acc = 0.0;
    double count = 0.0;
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = a + 1; b < n; ++b)
            for (Eigen::Index c = b + 1; c < n; ++c)
                for (Eigen::Index d = c + 1; d < n; ++d) {
                    std::array<Eigen::Index, 4> idx{a, b, c, d};
                    do {
                        const auto [i, j, s, t] = idx;
                        acc += gx(i, j) * gyz(i, j) - 2.0 * gx(i, j) * gyz(i, s) + gx(i, j) * gyz(s, t);
                        count += 1.0;
                    } while (std::next_permutation(idx.begin(), idx.end()));
                }
    return acc / count;
}

double fast_numerator(const GramMatrix& gx, const GramMatrix& gyz) {
    return numerator_fast(u_center(gx), u_center(gyz));
}

}  // namespace

TEST_CASE("fast numerator equals the three-sum oracle") {
    Rng rng(20240101);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index n = 6 + static_cast<Eigen::Index>(rng.below(7));
        const Eigen::Index p = 1 + static_cast<Eigen::Index>(rng.below(3));
        const Eigen::Index q = 1 + static_cast<Eigen::Index>(rng.below(3));
        const Grams g = random_grams(rng, n, p, q);
        const double fast = fast_numerator(g.x, g.yz);
        const double slow = numerator_oracle(g.x, g.y, g.z);
        CAPTURE(trial);
        CAPTURE(n);
        CHECK(rel_diff(fast, slow) <= 1e-10);
    }
}

TEST_CASE("three-sum oracle agrees with the 4-tuple average") {
    Rng rng(77);
    for (Eigen::Index n : {4, 5, 8}) {
        const Grams g = random_grams(rng, n, 2, 1);
        CHECK(rel_diff(numerator_oracle(g.x, g.y, g.z), four_tuple_oracle(g.x, g.yz)) <= 1e-12);
    }
}

TEST_CASE("three-sum oracle: constants and relabeling") {
    const GramMatrix c = GramMatrix::from_matrix(Matrix::Constant(4, 4, 0.7));
    CHECK(std::abs(numerator_oracle(c, c, c)) < 1e-15);

    Rng rng(78);
    const Grams g = random_grams(rng, 5, 1, 2);
    const auto perm = testing_support::random_permutation(rng, 5);
    auto permuted = [&](const GramMatrix& m) {
        Matrix out(5, 5);
        for (Eigen::Index i = 0; i < 5; ++i)
            for (Eigen::Index j = 0; j < 5; ++j)
                out(i, j) = m(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        return GramMatrix::from_matrix(out);
    };
    CHECK(rel_diff(numerator_oracle(g.x, g.y, g.z), numerator_oracle(permuted(g.x), permuted(g.y), permuted(g.z))) <
          1e-12);
    CHECK_THROWS_AS(numerator_oracle(GramMatrix(3), GramMatrix(3), GramMatrix(3)), SampleSizeError);
}

TEST_CASE("fast numerator edge cases") {
    Rng rng(79);
    const Matrix u = u_center(testing_support::symmetric_matrix(rng, 8));
    CHECK(numerator_fast(u, Matrix::Zero(8, 8)) == 0.0);
    CHECK_THROWS_AS(numerator_fast(Matrix::Zero(5, 5), Matrix::Zero(5, 5)), SampleSizeError);
    CHECK_THROWS_AS(numerator_fast(Matrix::Zero(6, 6), Matrix::Zero(7, 7)), ArgumentError);
}

TEST_CASE("variance prefactor and the all-ones example") {
    // 2 * 2 * 1 / (36 * 25 * 4 * 3), times 30 off-diagonal ones.
    CHECK(variance_prefactor(6) == doctest::Approx(4.0 / 10800.0).epsilon(1e-15));
    CHECK(variance_from_centered(Matrix::Ones(6, 6), Matrix::Ones(6, 6)) ==
          doctest::Approx(120.0 / 10800.0).epsilon(1e-14));
    CHECK(120.0 / 10800.0 == doctest::Approx(0.011111).epsilon(1e-4));
    CHECK(variance_prefactor(5) == 0.0);
}

TEST_CASE("variance estimate rejects constant kernels and small n") {
    Rng rng(80);
    const Grams g = random_grams(rng, 10, 2, 2);
    const GramMatrix c = GramMatrix::from_matrix(Matrix::Constant(10, 10, 0.3));
    CHECK_THROWS_AS(variance_estimate(c, g.yz), DegenerateSampleError);
    CHECK_THROWS_AS(rolin_statistic(c, g.yz), DegenerateSampleError);
    const Grams small = random_grams(rng, 5, 1, 1);
    CHECK_THROWS_AS(variance_estimate(small.x, small.yz), SampleSizeError);
    CHECK(variance_estimate(g.x, g.yz) > 0.0);
}

TEST_CASE("studentized statistic is invariant to scaling either kernel") {
    Rng rng(81);
    for (int trial = 0; trial < 20; ++trial) {
        const Grams g = random_grams(rng, 12, 2, 2);
        const RolinStatistic base = rolin_statistic(g.x, g.yz);
        const double c = 0.01 + 100.0 * rng.uniform();
        const RolinStatistic sx = rolin_statistic(g.x.scaled(c), g.yz);
        const RolinStatistic sy = rolin_statistic(g.x, g.yz.scaled(c));
        CHECK(rel_diff(sx.numerator, c * base.numerator) < 1e-9);
        CHECK(rel_diff(std::sqrt(sx.variance), c * std::sqrt(base.variance)) < 1e-9);
        CHECK(std::abs(sx.statistic - base.statistic) < 1e-9);
        CHECK(std::abs(sy.statistic - base.statistic) < 1e-9);
        CHECK(std::abs(standard_normal_upper_tail(sx.statistic) - standard_normal_upper_tail(base.statistic)) < 1e-9);
    }
}

TEST_CASE("fused computation agrees with the modular pipeline") {
    Rng rng(82);
    for (int trial = 0; trial < 60; ++trial) {
        const Eigen::Index n = 6 + static_cast<Eigen::Index>(rng.below(60));
        const Eigen::Index p = 1 + static_cast<Eigen::Index>(rng.below(4));
        const Eigen::Index q = 1 + static_cast<Eigen::Index>(rng.below(4));
        const Dataset d = normal_dataset(rng, n, p, q);
        KernelSpec xs = testing_support::random_spec(rng, p);
        const KernelSpec ys = testing_support::random_spec(rng, q);
        if (trial % 2) xs = KernelSpec::shared(xs.family, xs.widths.front(), static_cast<std::size_t>(p));
        Vector z(n);
        for (auto& v : z) v = std::sqrt(rng.uniform());
        const double b = 0.05 + rng.uniform();
        const auto kernel = rng.below(2) ? LifterKernel::LaplaceScalar : LifterKernel::GaussianScalar;

        const RolinStatistic fused = rolin_statistic_fused(d, xs, ys, z, b, kernel);
        const RolinStatistic modular =
            rolin_statistic(gram(xs, d.x), gram(ys, d.y).hadamard(lifter_gram(z, b, kernel)));
        CAPTURE(trial);
        // The fused path differs only by rounding; T can be near 0, so compare on the scale of S.
        const double s = std::sqrt(modular.variance);
        CHECK(std::abs(fused.numerator - modular.numerator) <= 1e-10 * s);
        CHECK(rel_diff(fused.variance, modular.variance) <= 1e-10);
        CHECK(std::abs(fused.statistic - modular.statistic) <= 1e-9);
    }
}

TEST_CASE("statistic is invariant under joint relabeling of observations") {
    Rng rng(83);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 6 + static_cast<Eigen::Index>(rng.below(40));
        const Dataset d = normal_dataset(rng, n, 3, 2);
        const auto xs = KernelSpec::shared(KernelFamily::Gaussian, 1.2, 3);
        const auto ys = KernelSpec::shared(KernelFamily::Laplace, 0.8, 2);
        Vector z(n);
        for (auto& v : z) v = std::sqrt(rng.uniform());
        const auto perm = testing_support::random_permutation(rng, n);
        const Dataset dp{testing_support::permute_rows(d.x, perm), testing_support::permute_rows(d.y, perm), ""};
        Vector zp(n);
        for (Eigen::Index i = 0; i < n; ++i) zp[i] = z[perm[static_cast<std::size_t>(i)]];
        const double a = rolin_statistic_fused(d, xs, ys, z, 0.2, LifterKernel::LaplaceScalar).statistic;
        const double b = rolin_statistic_fused(dp, xs, ys, zp, 0.2, LifterKernel::LaplaceScalar).statistic;
        CHECK(std::abs(a - b) <= 1e-10);
    }
}

TEST_CASE("standard normal CDF") {
    CHECK(standard_normal_cdf(0.0) == 0.5);
    CHECK(standard_normal_cdf(1.6448536269514722) == doctest::Approx(0.95).epsilon(1e-14));
    CHECK(standard_normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-13));
    double prev = 0.0;
    for (double x = -8.0; x <= 8.0; x += 0.01) {
        const double v = standard_normal_cdf(x);
        CHECK(std::abs(v - 0.5 * (1.0 + std::erf(x / std::sqrt(2.0)))) <= 1e-12);
        CHECK(std::abs(standard_normal_cdf(-x) - (1.0 - v)) <= 1e-12);
        CHECK(std::abs(standard_normal_upper_tail(x) - (1.0 - v)) <= 1e-12);
        CHECK(v >= prev);
        prev = v;
    }
    // The upper tail keeps relative accuracy where 1 - Phi would cancel.
    CHECK(standard_normal_upper_tail(10.0) == doctest::Approx(7.619853024160527e-24).epsilon(1e-12));
}

namespace {

Dataset independent_data(Rng& rng, Eigen::Index n) { return normal_dataset(rng, n, 2, 2); }

}  // namespace

TEST_CASE("numerator is unbiased under independence") {
    const auto xs = KernelSpec::shared(KernelFamily::Gaussian, 1.0, 2);
    const auto ys = KernelSpec::shared(KernelFamily::Gaussian, 1.0, 2);
    for (auto [n, reps] : {std::pair<Eigen::Index, int>{20, 10000}, {50, 5000}}) {
        Rng rng(static_cast<std::uint64_t>(n));
        double sum = 0.0, sq = 0.0;
        for (int r = 0; r < reps; ++r) {
            const Dataset d = independent_data(rng, n);
            Vector z(n);
            for (auto& v : z) v = std::sqrt(rng.uniform());
            const double t = rolin_statistic_fused(d, xs, ys, z, 0.3, LifterKernel::LaplaceScalar).numerator;
            sum += t;
            sq += t * t;
        }
        const double mean = sum / reps;
        const double se = std::sqrt((sq / reps - mean * mean) / reps);
        CAPTURE(n);
        CHECK(std::abs(mean) <= 3.0 * se);
    }
}

TEST_CASE("variance estimate tracks the Monte-Carlo variance of T") {
    // Case-1 style null: X, Y standard normal with p = q = 5, n = 100, b = sqrt(pq/n).
    const Eigen::Index n = 100;
    const double b = default_bandwidth(100, 5, 5);
    Rng rng(84);
    std::vector<double> t, s2;
    for (int r = 0; r < 2000; ++r) {
        const Dataset d = normal_dataset(rng, n, 5, 5);
        const KernelSpec xs = heuristic_spec(KernelFamily::Gaussian, d.x, WidthRule::LowerQuantileHalfMedianFallback);
        const KernelSpec ys = heuristic_spec(KernelFamily::Gaussian, d.y, WidthRule::LowerQuantileHalfMedianFallback);
        Vector z(n);
        for (auto& v : z) v = std::sqrt(rng.uniform());
        const auto stat = rolin_statistic_fused(d, xs, ys, z, b, LifterKernel::LaplaceScalar);
        t.push_back(stat.numerator);
        s2.push_back(stat.variance);
    }
    double mt = 0.0, ms = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        mt += t[i];
        ms += s2[i];
    }
    mt /= static_cast<double>(t.size());
    ms /= static_cast<double>(t.size());
    double var = 0.0;
    for (double v : t) var += (v - mt) * (v - mt);
    var /= static_cast<double>(t.size() - 1);
    CHECK(ms >= 0.7 * var);
    CHECK(ms <= 1.3 * var);
}

TEST_CASE("rolin_test result fields and decision rule") {
    Rng rng(85);
    const Dataset d = normal_dataset(rng, 40, 2, 3);
    const auto xs = KernelSpec::shared(KernelFamily::Gaussian, 1.0, 2);
    const auto ys = KernelSpec::shared(KernelFamily::Laplace, 1.5, 3);
    LifterConfig lc;
    lc.seed = 123456789;
    lc.bandwidth_b = 0.25;
    const TestResult r = rolin_test(d, xs, ys, lc, 0.05);
    CHECK(r.method == Method::Rolin);
    CHECK(r.seed == 123456789);
    CHECK(r.n == 40);
    CHECK(r.p == 2);
    CHECK(r.q == 3);
    CHECK(r.bandwidth_b == 0.25);
    CHECK(r.reject == (r.p_value < r.alpha));
    CHECK(r.p_value >= 0.0);
    CHECK(r.p_value <= 1.0);
    CHECK(r.p_value == doctest::Approx(standard_normal_upper_tail(r.statistic)));
    CHECK(r.statistic == doctest::Approx(r.diagnostics.at("T_nb") / r.diagnostics.at("S_nb")));
    CHECK(r.diagnostics.at("x_width") == 1.0);
    CHECK(r.diagnostics.at("y_width") == 1.5);

    // Same seed, same answer; the modular pipeline with the same lifter draw agrees.
    CHECK(rolin_test(d, xs, ys, lc, 0.05).statistic == r.statistic);
    const Vector z = sample_lifter(40, lc);
    const auto modular = rolin_statistic(gram(xs, d.x), gram(ys, d.y).hadamard(lifter_gram(z, 0.25, lc.kernel)));
    CHECK(std::abs(modular.statistic - r.statistic) < 1e-9);

    // Raising alpha past the p-value flips the decision.
    CHECK(rolin_test(d, xs, ys, lc, std::min(0.999, r.p_value + 0.001)).reject);
    CHECK_FALSE(rolin_test(d, xs, ys, lc, std::max(1e-9, r.p_value)).reject);
}

TEST_CASE("rolin_test input errors") {
    Rng rng(86);
    const auto s1 = KernelSpec::shared(KernelFamily::Gaussian, 1.0, 1);
    CHECK_THROWS_AS(rolin_test(normal_dataset(rng, 5, 1, 1), s1, s1, {}, 0.05), SampleSizeError);
    Dataset bad = normal_dataset(rng, 10, 1, 1);
    bad.y = testing_support::normal_matrix(rng, 9, 1);
    CHECK_THROWS_AS(rolin_test(bad, s1, s1, {}, 0.05), ArgumentError);
    const Dataset ok = normal_dataset(rng, 10, 1, 1);
    CHECK_THROWS_AS(rolin_test(ok, s1, s1, {}, 0.0), ArgumentError);
    CHECK_THROWS_AS(rolin_test(ok, s1, s1, {}, 1.0), ArgumentError);
    CHECK_THROWS_AS(rolin_test(ok, KernelSpec::shared(KernelFamily::Gaussian, 1.0, 2), s1, {}, 0.05), ArgumentError);
    Dataset constant = ok;
    constant.x.setConstant(2.0);
    CHECK_THROWS_AS(rolin_test(constant, s1, s1, {}, 0.05), DegenerateSampleError);
    Dataset nan = ok;
    nan.x(3, 0) = NAN;
    CHECK_THROWS_AS(rolin_test(nan, s1, s1, {}, 0.05), ArgumentError);
}

TEST_CASE("strong dependence is detected") {
    int small_p = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(1000 + seed);
        Dataset d = normal_dataset(rng, 400, 5, 5);
        d.y = d.x;
        LifterConfig lc;
        lc.seed = seed;
        lc.bandwidth_b = default_bandwidth(400, 5, 5);
        const auto xs = heuristic_spec(KernelFamily::Gaussian, d.x, WidthRule::LowerQuantileHalfMedianFallback);
        if (rolin_test(d, xs, xs, lc, 0.05).p_value < 0.01) ++small_p;
    }
    CHECK(small_p >= 198);
}

TEST_CASE("method names round trip") {
    for (auto m : {Method::Rolin, Method::HsicPermutation, Method::HsicGamma}) CHECK(parse_method(to_string(m)) == m);
    CHECK_THROWS_AS(parse_method("dcov"), ArgumentError);
}
