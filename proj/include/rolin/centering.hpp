#pragma once

#include "rolin/kernels.hpp"
#include "rolin/matrix.hpp"

namespace rolin {

// U-centering (leave-diagonal-out double centering):
//   U_ij = K_ij - K_i. - K_.j + K_..
// with K_i. = sum_{k != i} K_ik / (n - 2) and K_.. = sum_{k != l} K_kl / ((n - 1)(n - 2)).
// Diagonal entries use the same formula; every consumer ignores them.
// Requires n >= 4.
Matrix u_center(const Matrix& g);
inline Matrix u_center(const GramMatrix& g) { return u_center(g.matrix()); }

// V-centering with full means: V = C G C where C = I - (1/n) 1 1^T.
Matrix v_center(const Matrix& g);
inline Matrix v_center(const GramMatrix& g) { return v_center(g.matrix()); }

}  // namespace rolin
