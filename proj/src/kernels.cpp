#include "rolin/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rolin/errors.hpp"
#include "pairwise.hpp"

namespace rolin {

namespace {

// Shared by evaluate_kernel and gram so both produce bit-identical values.
inline double kernel_unchecked(KernelFamily family, double peak, const double* widths, const double* a,
                               const double* b, std::size_t dim) {
    double acc = 0.0;
    if (family == KernelFamily::Gaussian) {
        for (std::size_t k = 0; k < dim; ++k) {
            const double u = (a[k] - b[k]) / widths[k];
            acc += u * u;
        }
        return peak * std::exp(-0.5 * acc);
    }
    for (std::size_t k = 0; k < dim; ++k) acc += std::abs(a[k] - b[k]) / widths[k];
    return peak * std::exp(-acc);
}

void require_finite(std::span<const double> v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw ArgumentError(std::string(what) + " contains a nonfinite value");
}

}  // namespace

KernelSpec KernelSpec::shared(KernelFamily family, double width, std::size_t dim) {
    KernelSpec spec{family, std::vector<double>(dim, width)};
    spec.validate();
    return spec;
}

void KernelSpec::validate() const {
    if (widths.empty()) throw ArgumentError("kernel spec has no widths");
    for (double w : widths)
        if (!std::isfinite(w) || w <= 0.0) throw ArgumentError("kernel widths must be finite and positive");
}

double KernelSpec::peak() const {
    double prod = 1.0;
    for (double w : widths) prod *= w;
    const auto d = static_cast<double>(widths.size());
    if (family == KernelFamily::Gaussian) return std::pow(2.0 * std::numbers::pi, -0.5 * d) / prod;
    return std::pow(0.5, d) / prod;
}

GramMatrix GramMatrix::from_matrix(Matrix values) {
    if (values.rows() != values.cols()) throw ArgumentError("Gram matrix must be square");
    for (Eigen::Index j = 0; j < values.cols(); ++j)
        for (Eigen::Index i = 0; i < values.rows(); ++i) {
            if (!std::isfinite(values(i, j))) throw ArgumentError("Gram matrix has a nonfinite entry");
            if (values(i, j) != values(j, i)) throw ArgumentError("Gram matrix is not symmetric");
        }
    GramMatrix g;
    g.values_ = std::move(values);
    return g;
}

GramMatrix GramMatrix::hadamard(const GramMatrix& other) const {
    if (n() != other.n()) throw ArgumentError("Gram matrices differ in size");
    GramMatrix g;
    g.values_ = values_.cwiseProduct(other.values_);
    return g;
}

GramMatrix GramMatrix::scaled(double factor) const {
    GramMatrix g;
    g.values_ = values_ * factor;
    return g;
}

double evaluate_kernel(const KernelSpec& spec, std::span<const double> a, std::span<const double> b) {
    spec.validate();
    if (a.size() != b.size() || a.size() != spec.widths.size())
        throw ArgumentError("kernel argument dimension mismatch: " + std::to_string(a.size()) + ", " +
                            std::to_string(b.size()) + " vs " + std::to_string(spec.widths.size()) + " widths");
    require_finite(a, "kernel argument");
    require_finite(b, "kernel argument");
    return kernel_unchecked(spec.family, spec.peak(), spec.widths.data(), a.data(), b.data(), a.size());
}

GramMatrix gram(const KernelSpec& spec, const DataMatrix& data) {
    spec.validate();
    const Eigen::Index n = data.rows();
    if (n < 2) throw SampleSizeError("Gram matrix needs at least 2 samples, got " + std::to_string(n));
    const auto dim = static_cast<std::size_t>(data.cols());
    if (dim != spec.widths.size())
        throw ArgumentError("data has " + std::to_string(dim) + " columns but kernel has " +
                            std::to_string(spec.widths.size()) + " widths");
    require_finite({data.data(), static_cast<std::size_t>(data.size())}, "data");

    const double peak = spec.peak();
    const double* w = spec.widths.data();
    GramMatrix g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double* a = data.row(i).data();
        for (Eigen::Index j = i; j < n; ++j)
            g.set(i, j, kernel_unchecked(spec.family, peak, w, a, data.row(j).data(), dim));
    }
    return g;
}

double sample_quantile(std::vector<double>& values, double prob) {
    if (values.empty()) throw ArgumentError("quantile of an empty sample");
    const double h = prob * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo), values.end());
    const double x_lo = values[lo];
    if (lo + 1 >= values.size()) return x_lo;
    const double x_hi = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(lo) + 1, values.end());
    return x_lo + (h - static_cast<double>(lo)) * (x_hi - x_lo);
}

std::vector<double> width_heuristic(const DataMatrix& data, WidthRule rule) {
    const Eigen::Index n = data.rows();
    if (n < 2) throw SampleSizeError("width heuristic needs at least 2 samples");
    if (data.cols() < 1) throw ArgumentError("width heuristic needs at least one column");
    require_finite({data.data(), static_cast<std::size_t>(data.size())}, "data");

    // Order statistics of distances are those of squared distances, so the
    // quantiles only take square roots of the two entries they interpolate.
    std::vector<double> sq = detail::packed_squared_distances(data);
    const auto zeros = static_cast<std::size_t>(std::count(sq.begin(), sq.end(), 0.0));
    if (zeros == sq.size()) throw DegenerateSampleError("all pairwise distances are zero; no scale information");
    if (zeros == 0) return std::vector<double>(static_cast<std::size_t>(data.cols()),
                                               detail::quantile_of_root(sq, rule == WidthRule::Median ? 0.5 : 0.25));

    std::vector<double> nonzero;
    nonzero.reserve(sq.size() - zeros);
    std::copy_if(sq.begin(), sq.end(), std::back_inserter(nonzero), [](double d) { return d > 0.0; });
    double width = 0.0;
    if (rule == WidthRule::Median) {
        width = detail::quantile_of_root(nonzero, 0.5);
    } else {
        width = detail::quantile_of_root(sq, 0.25);
        if (width == 0.0) width = 0.5 * detail::quantile_of_root(sq, 0.5);
        // More than half the pairs coincide: fall back to the nonzero distances.
        if (width == 0.0) width = 0.5 * detail::quantile_of_root(nonzero, 0.5);
    }
    return std::vector<double>(static_cast<std::size_t>(data.cols()), width);
}

KernelFamily parse_kernel_family(std::string_view name) {
    if (name == "gaussian") return KernelFamily::Gaussian;
    if (name == "laplace") return KernelFamily::Laplace;
    throw ArgumentError("unknown kernel family '" + std::string(name) + "' (expected gaussian|laplace)");
}

std::string_view to_string(KernelFamily family) {
    return family == KernelFamily::Gaussian ? "gaussian" : "laplace";
}

}  // namespace rolin
