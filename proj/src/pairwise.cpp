#include "pairwise.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <utility>
#include <cmath>

namespace rolin::detail {

std::vector<double> packed_squared_distances(const DataMatrix& data) {
    const Eigen::Index n = data.rows();
    const Eigen::Index dim = data.cols();
    const Matrix cols = data;  // column-major copy: each coordinate contiguous over samples
    std::vector<double> out(packed_size(n), 0.0);
    double* row = out.data();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const Eigen::Index len = n - i - 1;
        for (Eigen::Index k = 0; k < dim; ++k) {
            const double a = cols(i, k);
            const double* c = cols.col(k).data() + i + 1;
            for (Eigen::Index j = 0; j < len; ++j) {
                const double u = a - c[j];
                row[j] += u * u;
            }
        }
        row += len;
    }
    return out;
}

std::vector<double> packed_exponents(const DataMatrix& data, const KernelSpec& spec) {
    const bool gaussian = spec.family == KernelFamily::Gaussian;
    const bool shared = std::all_of(spec.widths.begin(), spec.widths.end(),
                                    [&](double w) { return w == spec.widths.front(); });
    if (gaussian && shared) {
        std::vector<double> out = packed_squared_distances(data);
        const double scale = 0.5 / (spec.widths.front() * spec.widths.front());
        for (double& v : out) v *= scale;
        return out;
    }

    const Eigen::Index n = data.rows();
    const Eigen::Index dim = data.cols();
    const Matrix cols = data;
    std::vector<double> out(packed_size(n), 0.0);
    double* row = out.data();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const Eigen::Index len = n - i - 1;
        for (Eigen::Index k = 0; k < dim; ++k) {
            const double a = cols(i, k);
            const double inv = 1.0 / spec.widths[static_cast<std::size_t>(k)];
            const double* c = cols.col(k).data() + i + 1;
            if (gaussian) {
                for (Eigen::Index j = 0; j < len; ++j) {
                    const double u = (a - c[j]) * inv;
                    row[j] += 0.5 * u * u;
                }
            } else {
                for (Eigen::Index j = 0; j < len; ++j) row[j] += std::abs(a - c[j]) * inv;
            }
        }
        row += len;
    }
    return out;
}

void exp_negate_inplace(std::vector<double>& values, double peak) {
    Eigen::Map<Eigen::ArrayXd> a(values.data(), static_cast<Eigen::Index>(values.size()));
    a = peak * (-a).exp();
}

namespace {

// Non-negative doubles order like their bit patterns, so a histogram on the
// leading bits narrows the search to one bucket before an exact selection.
constexpr int kBucketShift = 48;

std::uint64_t bucket_of(double v) { return std::bit_cast<std::uint64_t>(v) >> kBucketShift; }

// k-th and (k+1)-th smallest entries (the second equals the first when k is last).
std::pair<double, double> select_pair(const std::vector<double>& values, std::size_t k) {
    std::vector<std::size_t> counts(std::size_t{1} << (64 - kBucketShift), 0);
    for (double v : values) ++counts[bucket_of(v)];
    std::size_t before = 0, bucket = 0;
    while (before + counts[bucket] <= k) before += counts[bucket++];

    std::vector<double> cand;
    cand.reserve(counts[bucket]);
    for (double v : values)
        if (bucket_of(v) == bucket) cand.push_back(v);
    const std::size_t r = k - before;
    std::nth_element(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(r), cand.end());
    const double lo = cand[r];
    if (r + 1 < cand.size())
        return {lo, *std::min_element(cand.begin() + static_cast<std::ptrdiff_t>(r) + 1, cand.end())};
    if (k + 1 >= values.size()) return {lo, lo};
    double hi = std::numeric_limits<double>::infinity();
    for (double v : values)
        if (bucket_of(v) > bucket) hi = std::min(hi, v);
    return {lo, hi};
}

}  // namespace

double quantile_of_root(const std::vector<double>& squared, double prob) {
    const double h = prob * static_cast<double>(squared.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto [sq_lo, sq_hi] = select_pair(squared, lo);
    const double x_lo = std::sqrt(sq_lo);
    if (lo + 1 >= squared.size()) return x_lo;
    return x_lo + (h - static_cast<double>(lo)) * (std::sqrt(sq_hi) - x_lo);
}

Matrix unpack_symmetric(const std::vector<double>& packed, Eigen::Index n, double diagonal) {
    Matrix m(n, n);
    std::size_t at = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = diagonal;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            m(i, j) = packed[at];
            m(j, i) = packed[at];
            ++at;
        }
    }
    return m;
}

}  // namespace rolin::detail
