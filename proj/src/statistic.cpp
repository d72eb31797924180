#include "rolin/statistic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rolin/centering.hpp"
#include "rolin/errors.hpp"
#include "pairwise.hpp"

namespace rolin {

void Dataset::validate() const {
    if (x.rows() != y.rows())
        throw ArgumentError("x has " + std::to_string(x.rows()) + " rows but y has " + std::to_string(y.rows()));
    if (!x.allFinite() || !y.allFinite()) throw ArgumentError("dataset contains nonfinite values");
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::Rolin: return "rolin";
        case Method::HsicPermutation: return "hsic-perm";
        case Method::HsicGamma: return "hsic-gamma";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    if (name == "rolin") return Method::Rolin;
    if (name == "hsic-perm") return Method::HsicPermutation;
    if (name == "hsic-gamma") return Method::HsicGamma;
    throw ArgumentError("unknown method '" + std::string(name) + "' (expected rolin|hsic-perm|hsic-gamma)");
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double standard_normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

void validate_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("alpha must lie in (0, 1)");
}

double numerator_fast(const Matrix& ux, const Matrix& uyz) {
    const Eigen::Index n = ux.rows();
    if (ux.cols() != n || uyz.rows() != n || uyz.cols() != n) throw ArgumentError("centered matrices differ in size");
    if (n < 6) throw SampleSizeError("the Rolin numerator needs n >= 6, got " + std::to_string(n));
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        double col = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (i != j) col += ux(i, j) * uyz(i, j);
        acc += col;
    }
    const auto nd = static_cast<double>(n);
    return acc / (nd * (nd - 3.0));
}

double numerator_oracle(const GramMatrix& gx, const GramMatrix& gy, const GramMatrix& gz) {
    const Eigen::Index n = gx.n();
    if (gy.n() != n || gz.n() != n) throw ArgumentError("Gram matrices differ in size");
    if (n < 4) throw SampleSizeError("the oracle needs n >= 4, got " + std::to_string(n));

    double pairs = 0.0, triples = 0.0, quads = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            pairs += gx(i, j) * gy(i, j) * gz(i, j);
            for (Eigen::Index s = 0; s < n; ++s) {
                if (s == i || s == j) continue;
                triples += gx(i, j) * gy(i, s) * gz(i, s);
                for (Eigen::Index t = 0; t < n; ++t) {
                    if (t == i || t == j || t == s) continue;
                    quads += gx(i, j) * gy(s, t) * gz(s, t);
                }
            }
        }
    const auto nd = static_cast<double>(n);
    const double p2 = nd * (nd - 1.0);
    const double p3 = p2 * (nd - 2.0);
    const double p4 = p3 * (nd - 3.0);
    return pairs / p2 - 2.0 * triples / p3 + quads / p4;
}

double variance_prefactor(Eigen::Index n) {
    const auto nd = static_cast<double>(n);
    return 2.0 * (nd - 4.0) * (nd - 5.0) / (nd * nd * (nd - 1.0) * (nd - 1.0) * (nd - 2.0) * (nd - 3.0));
}

double variance_from_centered(const Matrix& vx, const Matrix& vyz) {
    const Eigen::Index n = vx.rows();
    if (vx.cols() != n || vyz.rows() != n || vyz.cols() != n) throw ArgumentError("centered matrices differ in size");
    if (n < 6) throw SampleSizeError("the variance estimate needs n >= 6, got " + std::to_string(n));
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        double col = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i == j) continue;
            const double m = vx(i, j) * vyz(i, j);
            col += m * m;
        }
        acc += col;
    }
    return variance_prefactor(n) * acc;
}

namespace {

// Centering a constant matrix leaves rounding noise rather than exact zeros, so
// S^2 is judged against the same sum over the uncentered Grams.
void check_variance(double s2, double uncentered) {
    constexpr double kRelativeFloor = 1e-20;
    if (!(s2 > kRelativeFloor * uncentered))
        throw DegenerateSampleError("variance estimate is zero: the centered Gram matrices vanish");
}

}  // namespace

double variance_estimate(const GramMatrix& gx, const GramMatrix& gyz) {
    if (gx.n() != gyz.n()) throw ArgumentError("Gram matrices differ in size");
    if (gx.n() < 6) throw SampleSizeError("the variance estimate needs n >= 6, got " + std::to_string(gx.n()));
    const double s2 = variance_from_centered(v_center(gx), v_center(gyz));
    check_variance(s2, variance_from_centered(gx.matrix(), gyz.matrix()));
    return s2;
}

RolinStatistic rolin_statistic(const GramMatrix& gx, const GramMatrix& gyz) {
    if (gx.n() != gyz.n()) throw ArgumentError("Gram matrices differ in size");
    if (gx.n() < 6) throw SampleSizeError("the Rolin statistic needs n >= 6, got " + std::to_string(gx.n()));
    RolinStatistic r;
    r.numerator = numerator_fast(u_center(gx), u_center(gyz));
    r.variance = variance_estimate(gx, gyz);
    r.statistic = r.numerator / std::sqrt(r.variance);
    if (!std::isfinite(r.statistic)) throw NumericalError("Rolin statistic is not finite");
    return r;
}

KernelSpec heuristic_spec(KernelFamily family, const DataMatrix& data, WidthRule rule) {
    KernelSpec spec{family, width_heuristic(data, rule)};
    spec.validate();
    return spec;
}

RolinStatistic rolin_statistic_fused(const Dataset& data, const KernelSpec& xspec, const KernelSpec& yspec,
                                     const Vector& z, double bandwidth_b, LifterKernel kernel) {
    data.validate();
    xspec.validate();
    yspec.validate();
    const Eigen::Index n = data.n();
    if (n < 6) throw SampleSizeError("the Rolin statistic needs n >= 6, got " + std::to_string(n));
    if (z.size() != n) throw ArgumentError("lifter sample size differs from the data");
    if (!std::isfinite(bandwidth_b) || bandwidth_b <= 0.0) throw ArgumentError("lifter bandwidth b must be positive");
    if (static_cast<std::size_t>(data.p()) != xspec.widths.size() ||
        static_cast<std::size_t>(data.q()) != yspec.widths.size())
        throw ArgumentError("kernel widths do not match the data dimensions");

    // Off-diagonal entries of both Gram matrices, as exponents first.
    std::vector<double> kx = detail::packed_exponents(data.x, xspec);
    std::vector<double> ky = detail::packed_exponents(data.y, yspec);
    {
        const bool laplace = kernel == LifterKernel::LaplaceScalar;
        double* row = ky.data();
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            const Eigen::Index len = n - i - 1;
            const double zi = z[i];
            const double* zj = z.data() + i + 1;
            if (laplace) {
                for (Eigen::Index j = 0; j < len; ++j) row[j] += std::abs(zi - zj[j]) / bandwidth_b;
            } else {
                for (Eigen::Index j = 0; j < len; ++j) {
                    const double u = (zi - zj[j]) / bandwidth_b;
                    row[j] += 0.5 * u * u;
                }
            }
            row += len;
        }
    }
    const double dx = xspec.peak();
    const double dy = yspec.peak() * lifter_kernel_value(kernel, 0.0);
    detail::exp_negate_inplace(kx, dx);
    detail::exp_negate_inplace(ky, dy);

    // Off-diagonal row sums.
    Eigen::ArrayXd rx = Eigen::ArrayXd::Zero(n), ry = Eigen::ArrayXd::Zero(n);
    {
        std::size_t at = 0;
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            const Eigen::Index len = n - i - 1;
            const Eigen::Map<const Eigen::ArrayXd> a(kx.data() + at, len), b(ky.data() + at, len);
            rx[i] += a.sum();
            ry[i] += b.sum();
            rx.segment(i + 1, len) += a;
            ry.segment(i + 1, len) += b;
            at += static_cast<std::size_t>(len);
        }
    }

    const auto nd = static_cast<double>(n);
    const double sx = rx.sum(), sy = ry.sum();
    // U-centering: divisors n - 2 and (n - 1)(n - 2) over off-diagonal sums.
    const double u1 = 1.0 / (nd - 2.0);
    const double ux0 = sx / ((nd - 1.0) * (nd - 2.0)), uy0 = sy / ((nd - 1.0) * (nd - 2.0));
    // V-centering over full sums, diagonal included.
    const Eigen::ArrayXd fx = rx + dx, fy = ry + dy;
    const double vx0 = (sx + nd * dx) / (nd * nd), vy0 = (sy + nd * dy) / (nd * nd);

    double t_acc = 0.0, s_acc = 0.0, raw_acc = 0.0;
    std::size_t at = 0;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const Eigen::Index len = n - i - 1;
        const Eigen::Map<const Eigen::ArrayXd> a(kx.data() + at, len), b(ky.data() + at, len);
        const auto ua = a - (rx[i] + rx.segment(i + 1, len)) * u1 + ux0;
        const auto ub = b - (ry[i] + ry.segment(i + 1, len)) * u1 + uy0;
        t_acc += (ua * ub).sum();
        const auto va = a - (fx[i] + fx.segment(i + 1, len)) / nd + vx0;
        const auto vb = b - (fy[i] + fy.segment(i + 1, len)) / nd + vy0;
        s_acc += (va * vb).square().sum();
        raw_acc += (a * b).square().sum();
        at += static_cast<std::size_t>(len);
    }

    RolinStatistic r;
    r.numerator = 2.0 * t_acc / (nd * (nd - 3.0));
    r.variance = variance_prefactor(n) * 2.0 * s_acc;
    check_variance(r.variance, variance_prefactor(n) * 2.0 * raw_acc);
    r.statistic = r.numerator / std::sqrt(r.variance);
    if (!std::isfinite(r.statistic)) throw NumericalError("Rolin statistic is not finite");
    return r;
}

TestResult rolin_test(const Dataset& data, const KernelSpec& xspec, const KernelSpec& yspec, const LifterConfig& lifter,
                      double alpha) {
    data.validate();
    validate_alpha(alpha);
    lifter.validate();
    const Eigen::Index n = data.n();
    if (n < 6) throw SampleSizeError("the Rolin test needs n >= 6, got " + std::to_string(n));

    const Vector z = sample_lifter(static_cast<std::size_t>(n), lifter);
    const RolinStatistic stat = rolin_statistic_fused(data, xspec, yspec, z, lifter.bandwidth_b, lifter.kernel);

    TestResult r;
    r.method = Method::Rolin;
    r.statistic = stat.statistic;
    r.p_value = standard_normal_upper_tail(stat.statistic);
    r.alpha = alpha;
    r.reject = r.p_value < alpha;
    r.seed = lifter.seed;
    r.n = static_cast<std::size_t>(n);
    r.p = static_cast<std::size_t>(data.p());
    r.q = static_cast<std::size_t>(data.q());
    r.bandwidth_b = lifter.bandwidth_b;
    r.diagnostics["T_nb"] = stat.numerator;
    r.diagnostics["S_nb"] = std::sqrt(stat.variance);
    r.diagnostics["x_width"] = xspec.widths.front();
    r.diagnostics["y_width"] = yspec.widths.front();
    return r;
}

}  // namespace rolin
