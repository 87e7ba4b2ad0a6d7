#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "latticekit/error.hpp"
#include "latticekit/matrix.hpp"

namespace latticekit::numerics {

struct NnlsResult {
    Vector solution;           // every coordinate >= 0 exactly
    double residual_norm = 0.0;
};

namespace detail {

/// Unconstrained least squares restricted to the passive columns. Returns
/// false when the passive submatrix is column rank deficient.
inline bool passive_least_squares(const Matrix& a, const Vector& b,
                                  const std::vector<std::size_t>& passive, Vector& z,
                                  double tol) {
    Matrix sub(a.rows(), passive.size());
    for (std::size_t j = 0; j < passive.size(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) sub(i, j) = a(i, passive[j]);
    try {
        z = least_squares(sub, b, tol).solution;
    } catch (const Error&) {
        return false;
    }
    return true;
}

}  // namespace detail

/// Lawson-Hanson active-set solution of min ||A x - b||_2 over x >= 0.
/// Candidate selection is index-ordered: the entering column is the first
/// attaining the maximal dual value, so runs are bit-reproducible.
inline NnlsResult nnls(const Matrix& a, const Vector& b, double tol = kPivotTol) {
    if (b.size() != a.rows())
        throw domain_error("matrix_shape", "nnls dimension mismatch");
    const std::size_t n = a.cols();
    Vector x(n, 0.0);
    std::vector<bool> passive(n, false);
    std::vector<bool> rejected(n, false);  // columns that broke full rank this round
    Vector resid = b;

    double w_scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) w_scale = std::max(w_scale, std::abs(dot(a.column(j), b)));
    const double w_tol = tol * (1.0 + w_scale);
    const std::size_t max_iter = 3 * n + 12;
    std::size_t iter = 0;

    std::vector<std::size_t> pset;
    while (true) {
        // Dual vector w = A^T (b - A x); pick the most attractive free column.
        bool found = false;
        std::size_t enter = 0;
        double best = w_tol;
        for (std::size_t j = 0; j < n; ++j) {
            if (passive[j] || rejected[j]) continue;
            double wj = 0.0;
            for (std::size_t i = 0; i < a.rows(); ++i) wj += a(i, j) * resid[i];
            if (wj > best) {
                best = wj;
                enter = j;
                found = true;
            }
        }
        if (!found) break;

        Vector z;
        pset.push_back(enter);
        if (!detail::passive_least_squares(a, b, pset, z, tol)) {
            pset.pop_back();
            rejected[enter] = true;
            continue;
        }
        passive[enter] = true;

        // Pull infeasible coordinates back to the boundary.
        while (true) {
            if (++iter > max_iter)
                throw domain_error("nnls_stall", "nnls exceeded its iteration cap");
            bool all_positive = true;
            for (std::size_t j = 0; j < pset.size(); ++j)
                if (z[j] <= 0.0) { all_positive = false; break; }
            if (all_positive) break;
            double alpha = 1.0;
            for (std::size_t j = 0; j < pset.size(); ++j) {
                if (z[j] > 0.0) continue;
                double xj = x[pset[j]];
                double denom = xj - z[j];
                double step = denom > 0.0 ? xj / denom : 0.0;
                alpha = std::min(alpha, step);
            }
            for (std::size_t j = 0; j < pset.size(); ++j)
                x[pset[j]] += alpha * (z[j] - x[pset[j]]);
            std::vector<std::size_t> next;
            for (std::size_t j = 0; j < pset.size(); ++j) {
                if (x[pset[j]] <= tol * (1.0 + std::abs(z[j]))) {
                    x[pset[j]] = 0.0;
                    passive[pset[j]] = false;
                } else {
                    next.push_back(pset[j]);
                }
            }
            pset = std::move(next);
            if (pset.empty()) { z.clear(); break; }
            if (!detail::passive_least_squares(a, b, pset, z, tol))
                throw domain_error("nnls_stall", "nnls passive set lost rank");
        }
        for (std::size_t j = 0; j < pset.size(); ++j) x[pset[j]] = z[j];
        std::fill(rejected.begin(), rejected.end(), false);

        resid = b;
        for (std::size_t j = 0; j < pset.size(); ++j) {
            double xj = x[pset[j]];
            for (std::size_t i = 0; i < a.rows(); ++i) resid[i] -= a(i, pset[j]) * xj;
        }
        if (++iter > max_iter)
            throw domain_error("nnls_stall", "nnls exceeded its iteration cap");
    }

    for (double& v : x) v = v > 0.0 ? v : 0.0;
    Vector final_resid = b;
    for (std::size_t j = 0; j < n; ++j) {
        if (x[j] == 0.0) continue;
        for (std::size_t i = 0; i < a.rows(); ++i) final_resid[i] -= a(i, j) * x[j];
    }
    return NnlsResult{std::move(x), norm2(final_resid)};
}

}  // namespace latticekit::numerics
