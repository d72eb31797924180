#include "rolin/baselines.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "rolin/centering.hpp"
#include "rolin/errors.hpp"
#include "rolin/parallel.hpp"
#include "rolin/rng.hpp"

namespace rolin {

namespace {

double centered_inner(const Matrix& vx, const Matrix& vy) {
    const Eigen::Index n = vx.rows();
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        double col = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) col += vx(i, j) * vy(i, j);
        acc += col;
    }
    return acc / (static_cast<double>(n) * static_cast<double>(n));
}

void check_pair(const Dataset& data, std::size_t min_n) {
    data.validate();
    if (static_cast<std::size_t>(data.n()) < min_n)
        throw SampleSizeError("test needs n >= " + std::to_string(min_n) + ", got " + std::to_string(data.n()));
}

}  // namespace

double hsic_vstat(const GramMatrix& gx, const GramMatrix& gy) {
    if (gx.n() != gy.n()) throw ArgumentError("Gram matrices differ in size");
    if (gx.n() < 2) throw SampleSizeError("HSIC needs n >= 2");
    return centered_inner(v_center(gx), v_center(gy));
}

double permuted_hsic(const Matrix& vx, const Matrix& vy, std::span<const Eigen::Index> perm) {
    const Eigen::Index n = vx.rows();
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double* xcol = vx.col(j).data();
        const double* ycol = vy.col(perm[static_cast<std::size_t>(j)]).data();
        double col = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) col += xcol[i] * ycol[perm[static_cast<std::size_t>(i)]];
        acc += col;
    }
    return acc / (static_cast<double>(n) * static_cast<double>(n));
}

TestResult hsic_permutation_test(const Dataset& data, const KernelSpec& xspec, const KernelSpec& yspec,
                                 std::size_t permutations, double alpha, std::uint64_t seed, std::size_t threads) {
    check_pair(data, 2);
    validate_alpha(alpha);
    if (permutations < 19) throw ArgumentError("permutation test needs at least 19 permutations");

    const Matrix vx = v_center(gram(xspec, data.x));
    const Matrix vy = v_center(gram(yspec, data.y));
    const auto n = static_cast<std::size_t>(data.n());

    std::vector<Eigen::Index> identity(n);
    std::iota(identity.begin(), identity.end(), Eigen::Index{0});
    const double observed = permuted_hsic(vx, vy, identity);

    std::vector<unsigned char> exceeds(permutations, 0);
    parallel_for(permutations, threads, [&](std::size_t b) {
        Rng rng(derive_seed(seed, {b}));
        std::vector<Eigen::Index> perm = identity;
        for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
        exceeds[b] = permuted_hsic(vx, vy, perm) >= observed;
    });
    const std::size_t count = std::accumulate(exceeds.begin(), exceeds.end(), std::size_t{0});

    TestResult r;
    r.method = Method::HsicPermutation;
    r.statistic = observed;
    r.p_value = static_cast<double>(count + 1) / static_cast<double>(permutations + 1);
    r.alpha = alpha;
    r.reject = r.p_value < alpha;
    r.seed = seed;
    r.n = n;
    r.p = static_cast<std::size_t>(data.p());
    r.q = static_cast<std::size_t>(data.q());
    r.diagnostics["hsic"] = observed;
    r.diagnostics["permutations"] = static_cast<double>(permutations);
    r.diagnostics["exceedances"] = static_cast<double>(count);
    r.diagnostics["x_width"] = xspec.widths.front();
    r.diagnostics["y_width"] = yspec.widths.front();
    return r;
}

TestResult hsic_gamma_test(const Dataset& data, const KernelSpec& xspec, const KernelSpec& yspec, double alpha) {
    check_pair(data, 6);
    validate_alpha(alpha);

    const GramMatrix gx = gram(xspec, data.x);
    const GramMatrix gy = gram(yspec, data.y);
    const Matrix vx = v_center(gx);
    const Matrix vy = v_center(gy);
    const Eigen::Index n = data.n();
    const auto nd = static_cast<double>(n);

    const double hsic = centered_inner(vx, vy);
    const double test_stat = nd * hsic;

    // Null variance of HSIC_b from the off-diagonal squared products.
    double sq = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i == j) continue;
            const double m = vx(i, j) * vy(i, j) / 6.0;
            sq += m * m;
        }
    const double var_hsic =
        72.0 * (nd - 4.0) * (nd - 5.0) / (nd * (nd - 1.0) * (nd - 2.0) * (nd - 3.0)) * sq / (nd * (nd - 1.0));

    // Null mean of HSIC_b: (1/n) (E k(x,x) - E k(x,x')) (E l(y,y) - E l(y,y')).
    auto off_diagonal_mean = [&](const GramMatrix& g) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i)
                if (i != j) s += g(i, j);
        return s / (nd * (nd - 1.0));
    };
    // Differences at rounding level (a constant kernel) count as zero.
    auto spread = [&](const GramMatrix& g) {
        const double diag = g.matrix().diagonal().mean();
        const double d = diag - off_diagonal_mean(g);
        return d > 1e-12 * std::abs(diag) ? d : 0.0;
    };
    const double mean_hsic = spread(gx) * spread(gy) / nd;

    if (!(var_hsic > 0.0) || !(mean_hsic > 0.0))
        throw NumericalError("gamma approximation has nonpositive null moments (mean " + std::to_string(mean_hsic) +
                             ", variance " + std::to_string(var_hsic) + ")");
    const double shape = mean_hsic * mean_hsic / var_hsic;
    const double scale = var_hsic * nd / mean_hsic;

    TestResult r;
    r.method = Method::HsicGamma;
    r.statistic = test_stat;
    r.p_value = boost::math::gamma_q(shape, std::max(test_stat / scale, 0.0));
    r.alpha = alpha;
    r.reject = r.p_value < alpha;
    r.n = static_cast<std::size_t>(n);
    r.p = static_cast<std::size_t>(data.p());
    r.q = static_cast<std::size_t>(data.q());
    r.diagnostics["hsic"] = hsic;
    r.diagnostics["gamma_shape"] = shape;
    r.diagnostics["gamma_scale"] = scale;
    r.diagnostics["x_width"] = xspec.widths.front();
    r.diagnostics["y_width"] = yspec.widths.front();
    return r;
}

}  // namespace rolin
