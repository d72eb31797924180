#include "rolin/quadrature.hpp"

#include <cmath>

namespace rolin {

namespace {

struct Simpson {
    const std::function<double(double)>& f;
    int max_depth;
    double error = 0.0;
    bool converged = true;

    double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (std::abs(delta) <= 15.0 * tol) {
            error += std::abs(delta) / 15.0;
            return left + right + delta / 15.0;
        }
        if (depth >= max_depth) {
            converged = false;
            error += std::abs(delta) / 15.0;
            return left + right + delta / 15.0;
        }
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                  int max_depth) {
    Simpson s{f, max_depth};
    const double fa = f(a);
    const double fb = f(b);
    // Force a few levels of subdivision so a coarse coincidental agreement
    // on the first split cannot terminate early.
    constexpr int kMinSplits = 4;
    const double width = (b - a) / (1 << kMinSplits);
    double value = 0.0;
    for (int k = 0; k < (1 << kMinSplits); ++k) {
        const double lo = a + k * width;
        const double hi = (k + 1 == (1 << kMinSplits)) ? b : lo + width;
        const double flo = k == 0 ? fa : f(lo);
        const double fhi = k + 1 == (1 << kMinSplits) ? fb : f(hi);
        const double fmid = f(0.5 * (lo + hi));
        const double piece = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        value += s.recurse(lo, hi, flo, fmid, fhi, piece, abs_tol / (1 << kMinSplits), kMinSplits);
    }
    return {value, s.error, s.converged};
}

}  // namespace rolin
