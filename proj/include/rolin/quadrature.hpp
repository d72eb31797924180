#pragma once

#include <functional>

namespace rolin {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
};

// Adaptive Simpson on [a, b] to the requested absolute tolerance. Recursion
// is capped at `max_depth` levels; intervals that hit the cap are accepted
// and the result is flagged as not converged.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                  int max_depth = 50);

}  // namespace rolin
