#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "latticekit/error.hpp"
#include "latticekit/matrix.hpp"

namespace latticekit::numerics {

/// min objective . x  subject to  constraints x >= rhs, x free.
struct LpProblem {
    Vector objective;
    Matrix constraints;
    Vector rhs;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
    LpStatus status = LpStatus::kInfeasible;
    Vector x;
    double objective_value = 0.0;
    Vector dual;  // one multiplier per constraint row, >= 0 at optimum
};

namespace detail {

class SimplexTableau {
public:
    // Standard form: x = u - v, G u - G v - s = h, s >= 0, one artificial per
    // row. Rows with negative rhs are sign-flipped so the artificial basis is
    // the identity.
    SimplexTableau(const LpProblem& p, double tol)
        : n_(p.objective.size()), m_(p.rhs.size()), tol_(tol),
          cols_(2 * n_ + 2 * m_), t_(m_ + 1, Vector(cols_ + 1, 0.0)), basis_(m_), sigma_(m_) {
        if (p.constraints.rows() != m_ || p.constraints.cols() != n_)
            throw domain_error("matrix_shape", "lp dimensions inconsistent");
        for (std::size_t i = 0; i < m_; ++i) {
            double s = p.rhs[i] < 0.0 ? -1.0 : 1.0;
            sigma_[i] = s;
            for (std::size_t j = 0; j < n_; ++j) {
                t_[i][j] = s * p.constraints(i, j);
                t_[i][n_ + j] = -s * p.constraints(i, j);
            }
            t_[i][2 * n_ + i] = -s;            // surplus
            t_[i][2 * n_ + m_ + i] = 1.0;      // artificial
            t_[i][cols_] = s * p.rhs[i];
            basis_[i] = 2 * n_ + m_ + i;
        }
    }

    LpSolution solve(const LpProblem& p) {
        // Phase 1: drive the artificials to zero.
        Vector cost(cols_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) cost[2 * n_ + m_ + i] = 1.0;
        set_objective(cost, cols_);
        iterate(cols_, /*phase1=*/true);
        if (-t_[m_][cols_] > tol_ * 10.0)
            return LpSolution{LpStatus::kInfeasible, {}, 0.0, {}};
        pivot_out_artificials();

        // Phase 2: original objective, artificial columns frozen.
        Vector cost2(cols_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            cost2[j] = p.objective[j];
            cost2[n_ + j] = -p.objective[j];
        }
        set_objective(cost2, 2 * n_ + m_);
        if (!iterate(2 * n_ + m_, /*phase1=*/false))
            return LpSolution{LpStatus::kUnbounded, {}, 0.0, {}};

        LpSolution sol;
        sol.status = LpStatus::kOptimal;
        sol.x.assign(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            std::size_t b = basis_[i];
            if (b < n_) sol.x[b] += t_[i][cols_];
            else if (b < 2 * n_) sol.x[b - n_] -= t_[i][cols_];
        }
        sol.objective_value = dot(p.objective, sol.x);
        sol.dual.assign(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            sol.dual[i] = -sigma_[i] * t_[m_][2 * n_ + m_ + i];
        return sol;
    }

private:
    void set_objective(const Vector& cost, std::size_t /*priced_cols*/) {
        for (std::size_t j = 0; j <= cols_; ++j) t_[m_][j] = j < cols_ ? cost[j] : 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            double cb = cost[basis_[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) t_[m_][j] -= cb * t_[i][j];
        }
    }

    // Bland's rule both ways: smallest eligible entering index; leaving row by
    // minimum ratio with ties broken on the smallest basic variable index.
    bool iterate(std::size_t priced_cols, bool phase1) {
        const std::size_t cap = 2000 + 200 * cols_;
        for (std::size_t it = 0; it < cap; ++it) {
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < priced_cols; ++j) {
                if (t_[m_][j] < -tol_) { enter = j; break; }
            }
            if (enter == cols_) return true;
            std::size_t leave = m_;
            double best_ratio = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                if (t_[i][enter] <= tol_) continue;
                double ratio = t_[i][cols_] / t_[i][enter];
                if (leave == m_ || ratio < best_ratio - tol_ ||
                    (ratio < best_ratio + tol_ && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == m_) {
                if (phase1)
                    throw domain_error("lp_stall", "phase-1 objective unbounded below");
                return false;  // unbounded
            }
            pivot(leave, enter);
        }
        throw domain_error("lp_stall", "simplex exceeded its iteration cap");
    }

    void pivot(std::size_t row, std::size_t col) {
        double inv = 1.0 / t_[row][col];
        for (std::size_t j = 0; j <= cols_; ++j) t_[row][j] *= inv;
        t_[row][col] = 1.0;
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == row) continue;
            double f = t_[i][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) t_[i][j] -= f * t_[row][j];
            t_[i][col] = 0.0;
        }
        basis_[row] = col;
    }

    // Basic artificials left at zero level after phase 1 are swapped for any
    // structural column when possible; rows that admit none are redundant and
    // stay pinned (their coefficients over structural columns are all zero).
    void pivot_out_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < 2 * n_ + m_) continue;
            for (std::size_t j = 0; j < 2 * n_ + m_; ++j) {
                if (std::abs(t_[i][j]) > tol_ * 100.0) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    std::size_t n_, m_;
    double tol_;
    std::size_t cols_;
    std::vector<Vector> t_;
    std::vector<std::size_t> basis_;
    Vector sigma_;
};

}  // namespace detail

/// Two-phase simplex with Bland's anti-cycling rule; free variables are split
/// into positive and negative parts.
inline LpSolution simplex_solve(const LpProblem& p, double tol = kPivotTol) {
    if (p.objective.empty())
        throw domain_error("matrix_shape", "lp needs at least one variable");
    if (!all_finite(p.objective) || !all_finite(p.rhs))
        throw domain_error("matrix_not_finite", "lp data must be finite");
    detail::SimplexTableau tableau(p, tol);
    return tableau.solve(p);
}

}  // namespace latticekit::numerics
