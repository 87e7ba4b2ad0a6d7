#pragma once

#include <cstddef>
#include <vector>

#include "latticekit/matrix.hpp"
#include "latticekit/nnls.hpp"

namespace latticekit::numerics {

/// True iff points[idx] is not a convex combination of the other points.
/// Decided by nonnegative least squares on the system
///   [other points as columns; row of ones] * xi = [points[idx]; 1]
/// whose residual vanishes exactly when a convex combination exists. Works in
/// any ambient dimension, unlike facet-enumeration hulls.
inline bool is_vertex(const std::vector<Vector>& points, std::size_t idx,
                      double tol = kResidualTol) {
    if (points.size() <= 1) return true;
    const std::size_t dim = points[idx].size();
    Matrix a(dim + 1, points.size() - 1);
    std::size_t col = 0;
    for (std::size_t p = 0; p < points.size(); ++p) {
        if (p == idx) continue;
        for (std::size_t i = 0; i < dim; ++i) a(i, col) = points[p][i];
        a(dim, col) = 1.0;
        ++col;
    }
    Vector b = points[idx];
    b.push_back(1.0);
    return nnls(a, b).residual_norm > tol;
}

}  // namespace latticekit::numerics
