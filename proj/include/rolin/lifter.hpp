#pragma once

#include <cstdint>
#include <string_view>

#include "rolin/kernels.hpp"
#include "rolin/matrix.hpp"

namespace rolin {

enum class LifterDistribution { Beta21, StandardNormal, StudentT3 };

// Scalar kernel k with k >= 0, integral 1 and k(-u) = k(u).
enum class LifterKernel { LaplaceScalar, GaussianScalar };

// The random lifter Z and its kernel kappa_b(z1, z2) = k((z1 - z2) / b).
// The lifter draw, and therefore the Rolin p-value, depends on `seed`: a new
// seed gives a different but equally valid randomized test.
struct LifterConfig {
    LifterDistribution distribution = LifterDistribution::Beta21;
    LifterKernel kernel = LifterKernel::LaplaceScalar;
    double bandwidth_b = 0.1;
    std::uint64_t seed = 0;

    void validate() const;
};

// Integrals governing the null variance of the lifted statistic and its power
// relative to plain HSIC:
//   a1 = int F1 g^2,  a2 = int F1^2 g^3,  a3 = int F2 g^2,
// where g is the density of Z and F_i(z) = int k^i(u) 1{z + b u in supp g} du.
struct LifterConstants {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double ratio = 0.0;  // a2 / a1^2
};

Vector sample_lifter(std::size_t n, const LifterConfig& config);

// Scalar lifter kernel value k(u).
double lifter_kernel_value(LifterKernel kernel, double u);

// entries(i, j) = k((z_i - z_j) / b). There is no 1/b factor, so E[kappa_b] = O(b).
GramMatrix lifter_gram(const Vector& z, double bandwidth_b, LifterKernel kernel);

// sqrt(p q / n).
double default_bandwidth(std::size_t n, std::size_t p, std::size_t q);

// Bounded support (Beta21) is integrated by adaptive Simpson to 1e-6 absolute
// tolerance; on R the F_i are constant and closed forms are used.
LifterConstants lifter_constants(LifterDistribution distribution, LifterKernel kernel, double bandwidth_b);

// Density g of the lifter distribution.
double lifter_density(LifterDistribution distribution, double z);

LifterDistribution parse_lifter_distribution(std::string_view name);
LifterKernel parse_lifter_kernel(std::string_view name);
std::string_view to_string(LifterDistribution d);
std::string_view to_string(LifterKernel k);

}  // namespace rolin
