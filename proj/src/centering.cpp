#include "rolin/centering.hpp"

#include <string>

#include "rolin/errors.hpp"

namespace rolin {

namespace {

// Row and column sums, each accumulated in ascending index order so that a
// symmetric input yields bitwise-equal row and column sums.
void margin_sums(const Matrix& g, bool skip_diagonal, Vector& row, Vector& col) {
    const Eigen::Index n = g.rows();
    row = Vector::Zero(n);
    col = Vector::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double cs = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (skip_diagonal && i == j) continue;
            row[i] += g(i, j);
            cs += g(i, j);
        }
        col[j] = cs;
    }
}

Matrix double_center(const Matrix& g, const Vector& row_mean, const Vector& col_mean, double grand) {
    const Eigen::Index n = g.rows();
    Matrix out(n, n);
    // (row_i + col_j) is commutative, so symmetric inputs stay exactly symmetric.
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) out(i, j) = (g(i, j) - (row_mean[i] + col_mean[j])) + grand;
    return out;
}

}  // namespace

Matrix u_center(const Matrix& g) {
    const Eigen::Index n = g.rows();
    if (g.cols() != n) throw ArgumentError("u_center needs a square matrix");
    if (n < 4) throw SampleSizeError("U-centering needs n >= 4, got " + std::to_string(n));

    const auto nd = static_cast<double>(n);
    Vector row, col;
    margin_sums(g, true, row, col);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) total += row[i];
    return double_center(g, row / (nd - 2.0), col / (nd - 2.0), total / ((nd - 1.0) * (nd - 2.0)));
}

Matrix v_center(const Matrix& g) {
    const Eigen::Index n = g.rows();
    if (g.cols() != n) throw ArgumentError("v_center needs a square matrix");
    if (n < 1) throw SampleSizeError("v_center needs n >= 1");

    const auto nd = static_cast<double>(n);
    Vector row, col;
    margin_sums(g, false, row, col);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) total += row[i];
    return double_center(g, row / nd, col / nd, total / (nd * nd));
}

}  // namespace rolin
