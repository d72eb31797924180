#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "rolin/matrix.hpp"

namespace rolin {

enum class KernelFamily { Gaussian, Laplace };

// A translation-invariant product kernel on R^d. Both families are normalized
// densities in the difference a - b, so the value at zero distance is
//   Gaussian: (2 pi)^{-d/2} / prod(widths)
//   Laplace:  prod(1 / (2 widths))
struct KernelSpec {
    KernelFamily family = KernelFamily::Gaussian;
    std::vector<double> widths;

    // Same width in every one of `dim` coordinates.
    static KernelSpec shared(KernelFamily family, double width, std::size_t dim);

    // Throws ArgumentError unless every width is finite and strictly positive.
    void validate() const;
    double peak() const;
};

// Symmetric n x n matrix of kernel evaluations.
class GramMatrix {
public:
    GramMatrix() = default;
    explicit GramMatrix(Eigen::Index n) : values_(Matrix::Zero(n, n)) {}

    // Validates symmetry (exact) and finiteness.
    static GramMatrix from_matrix(Matrix values);

    // Writes both (i, j) and (j, i).
    void set(Eigen::Index i, Eigen::Index j, double value) {
        values_(i, j) = value;
        values_(j, i) = value;
    }

    Eigen::Index n() const noexcept { return values_.rows(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }
    const Matrix& matrix() const noexcept { return values_; }

    // Entrywise (Hadamard) product; symmetry is preserved.
    GramMatrix hadamard(const GramMatrix& other) const;
    GramMatrix scaled(double factor) const;

private:
    Matrix values_;
};

double evaluate_kernel(const KernelSpec& spec, std::span<const double> a, std::span<const double> b);

// G(i, j) = evaluate_kernel(spec, row i, row j). Each unordered pair is
// evaluated once and mirrored, so the result is exactly symmetric.
GramMatrix gram(const KernelSpec& spec, const DataMatrix& data);

enum class WidthRule {
    Median,                         // median of the nonzero pairwise distances
    LowerQuantileHalfMedianFallback // 0.25 quantile, or half the median when that is 0
};

// Data-driven kernel width, replicated over all columns of `data`.
// Distances are Euclidean over full rows.
std::vector<double> width_heuristic(const DataMatrix& data, WidthRule rule);

// Linear-interpolation sample quantile (the "type 7" definition) of an
// unsorted sample; `values` is reordered.
double sample_quantile(std::vector<double>& values, double prob);

KernelFamily parse_kernel_family(std::string_view name);
std::string_view to_string(KernelFamily family);

}  // namespace rolin
