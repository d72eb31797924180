#include "rolin/lifter.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>

#include "rolin/errors.hpp"
#include "rolin/quadrature.hpp"
#include "rolin/rng.hpp"

namespace rolin {

namespace {

constexpr double kConstantsTolerance = 1e-6;

std::string format_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// CDF of k and of k^2 (the latter integrates to int k^2, not 1).
double kernel_cdf(LifterKernel kernel, double x) {
    if (kernel == LifterKernel::LaplaceScalar) return x < 0.0 ? 0.5 * std::exp(x) : 1.0 - 0.5 * std::exp(-x);
    return normal_cdf(x);
}

double kernel_sq_cdf(LifterKernel kernel, double x) {
    if (kernel == LifterKernel::LaplaceScalar)
        return x < 0.0 ? 0.125 * std::exp(2.0 * x) : 0.25 - 0.125 * std::exp(-2.0 * x);
    return normal_cdf(std::numbers::sqrt2 * x) / (2.0 * std::sqrt(std::numbers::pi));
}

double kernel_sq_integral(LifterKernel kernel) {
    return kernel == LifterKernel::LaplaceScalar ? 0.25 : 1.0 / (2.0 * std::sqrt(std::numbers::pi));
}

// int g^m over R for the unbounded lifter distributions.
double density_power_integral(LifterDistribution d, int m) {
    if (d == LifterDistribution::StandardNormal)
        return std::pow(2.0 * std::numbers::pi, -0.5 * (m - 1)) / std::sqrt(static_cast<double>(m));
    // t_3 density c (1 + x^2/3)^{-2}, c = 2 / (pi sqrt 3);
    // int (1 + x^2/3)^{-2m} dx = sqrt(3 pi) Gamma(2m - 1/2) / Gamma(2m).
    const double c = 2.0 / (std::numbers::pi * std::sqrt(3.0));
    return std::pow(c, m) * std::sqrt(3.0 * std::numbers::pi) * std::tgamma(2.0 * m - 0.5) / std::tgamma(2.0 * m);
}

}  // namespace

void LifterConfig::validate() const {
    if (!std::isfinite(bandwidth_b) || bandwidth_b <= 0.0) throw ArgumentError("lifter bandwidth b must be positive");
}

Vector sample_lifter(std::size_t n, const LifterConfig& config) {
    config.validate();
    if (n < 1) throw SampleSizeError("lifter sample size must be at least 1");
    Rng rng(config.seed);
    Vector z(static_cast<Eigen::Index>(n));
    switch (config.distribution) {
        case LifterDistribution::Beta21:
            // Beta(2, 1) has CDF z^2 on [0, 1].
            for (auto& v : z) v = std::sqrt(rng.uniform());
            break;
        case LifterDistribution::StandardNormal: {
            std::normal_distribution<double> dist;
            for (auto& v : z) v = dist(rng);
            break;
        }
        case LifterDistribution::StudentT3: {
            std::student_t_distribution<double> dist(3.0);
            for (auto& v : z) v = dist(rng);
            break;
        }
    }
    return z;
}

double lifter_kernel_value(LifterKernel kernel, double u) {
    if (kernel == LifterKernel::LaplaceScalar) return 0.5 * std::exp(-std::abs(u));
    return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
}

GramMatrix lifter_gram(const Vector& z, double bandwidth_b, LifterKernel kernel) {
    if (!std::isfinite(bandwidth_b) || bandwidth_b <= 0.0) throw ArgumentError("lifter bandwidth b must be positive");
    const Eigen::Index n = z.size();
    GramMatrix g(n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) g.set(i, j, lifter_kernel_value(kernel, (z[i] - z[j]) / bandwidth_b));
    return g;
}

double default_bandwidth(std::size_t n, std::size_t p, std::size_t q) {
    if (n < 1 || p < 1 || q < 1) throw ArgumentError("default bandwidth needs n, p, q >= 1");
    return std::sqrt(static_cast<double>(p) * static_cast<double>(q) / static_cast<double>(n));
}

double lifter_density(LifterDistribution distribution, double z) {
    switch (distribution) {
        case LifterDistribution::Beta21:
            return (z >= 0.0 && z <= 1.0) ? 2.0 * z : 0.0;
        case LifterDistribution::StandardNormal:
            return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
        case LifterDistribution::StudentT3: {
            const double t = 1.0 + z * z / 3.0;
            return 2.0 / (std::numbers::pi * std::sqrt(3.0) * t * t);
        }
    }
    return 0.0;
}

LifterConstants lifter_constants(LifterDistribution distribution, LifterKernel kernel, double bandwidth_b) {
    if (!std::isfinite(bandwidth_b) || bandwidth_b <= 0.0) throw ArgumentError("lifter bandwidth b must be positive");
    LifterConstants c;
    if (distribution != LifterDistribution::Beta21) {
        c.a1 = density_power_integral(distribution, 2);
        c.a2 = density_power_integral(distribution, 3);
        c.a3 = kernel_sq_integral(kernel) * c.a1;
    } else {
        const double b = bandwidth_b;
        // On [0, 1] the admissible u satisfy 0 <= z + b u <= 1.
        auto f1 = [&](double z) { return kernel_cdf(kernel, (1.0 - z) / b) - kernel_cdf(kernel, -z / b); };
        auto f2 = [&](double z) { return kernel_sq_cdf(kernel, (1.0 - z) / b) - kernel_sq_cdf(kernel, -z / b); };
        auto g = [](double z) { return 2.0 * z; };

        auto integrate = [](const std::function<double(double)>& fn, const char* name) {
            const auto r = adaptive_simpson(fn, 0.0, 1.0, kConstantsTolerance);
            if (!r.converged)
                throw NumericalError(std::string("quadrature for ") + name +
                                     " did not converge within the recursion limit (error estimate " +
                                     format_sci(r.error_estimate) + ")");
            return r.value;
        };
        c.a1 = integrate([&](double z) { return f1(z) * g(z) * g(z); }, "A1");
        c.a2 = integrate([&](double z) { const double v = f1(z); return v * v * g(z) * g(z) * g(z); }, "A2");
        c.a3 = integrate([&](double z) { return f2(z) * g(z) * g(z); }, "A3");
    }
    c.ratio = c.a2 / (c.a1 * c.a1);
    if (!(c.a1 > 0.0 && c.a2 > 0.0 && c.a3 > 0.0) || !std::isfinite(c.ratio))
        throw NumericalError("lifter constants are not positive at b = " + format_sci(bandwidth_b) +
                             " (the kernel mass inside the support underflows)");
    return c;
}

LifterDistribution parse_lifter_distribution(std::string_view name) {
    if (name == "beta21") return LifterDistribution::Beta21;
    if (name == "normal") return LifterDistribution::StandardNormal;
    if (name == "t3") return LifterDistribution::StudentT3;
    throw ArgumentError("unknown lifter distribution '" + std::string(name) + "' (expected beta21|normal|t3)");
}

LifterKernel parse_lifter_kernel(std::string_view name) {
    if (name == "laplace") return LifterKernel::LaplaceScalar;
    if (name == "gaussian") return LifterKernel::GaussianScalar;
    throw ArgumentError("unknown lifter kernel '" + std::string(name) + "' (expected laplace|gaussian)");
}

std::string_view to_string(LifterDistribution d) {
    switch (d) {
        case LifterDistribution::Beta21: return "beta21";
        case LifterDistribution::StandardNormal: return "normal";
        case LifterDistribution::StudentT3: return "t3";
    }
    return "?";
}

std::string_view to_string(LifterKernel k) { return k == LifterKernel::LaplaceScalar ? "laplace" : "gaussian"; }

}  // namespace rolin
