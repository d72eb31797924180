#pragma once

#include <string>

#include "rolin/matrix.hpp"

namespace rolin {

// Paired sample: row i of x and row i of y form one observation.
struct Dataset {
    DataMatrix x;
    DataMatrix y;
    std::string label;

    Eigen::Index n() const noexcept { return x.rows(); }
    Eigen::Index p() const noexcept { return x.cols(); }
    Eigen::Index q() const noexcept { return y.cols(); }

    // Throws ArgumentError on mismatched row counts or nonfinite entries.
    void validate() const;
};

}  // namespace rolin
