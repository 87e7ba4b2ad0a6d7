#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "latticekit/error.hpp"

namespace latticekit::numerics {

using Vector = std::vector<double>;

/// Absolute tolerance for pivot / zero tests.
inline constexpr double kPivotTol = 1e-9;
/// Absolute tolerance for residual / feasibility tests.
inline constexpr double kResidualTol = 1e-8;

// ---------------------------------------------------------------------------
// Vector helpers
// ---------------------------------------------------------------------------

inline double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm1(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

inline double norm2(const Vector& v) { return std::sqrt(dot(v, v)); }

inline double norm_inf(const Vector& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

inline Vector positive_part(const Vector& v) {
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] > 0.0 ? v[i] : 0.0;
    return out;
}

inline Vector negative_part(const Vector& v) {
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] < 0.0 ? -v[i] : 0.0;
    return out;
}

inline bool all_finite(const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// ---------------------------------------------------------------------------
// Matrix
// ---------------------------------------------------------------------------

/// Dense row-major matrix of doubles. Construction rejects empty shapes and
/// non-finite entries; everything downstream may assume finite data.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
        check_shape();
    }

    Matrix(std::size_t rows, std::size_t cols, Vector data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        check_shape();
        if (data_.size() != rows_ * cols_)
            throw domain_error("matrix_shape", "matrix data length does not match rows*cols");
        if (!all_finite(data_))
            throw domain_error("matrix_not_finite", "matrix entries must be finite");
    }

    Matrix(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        check_shape();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw domain_error("matrix_shape", "ragged initializer rows");
            data_.insert(data_.end(), r.begin(), r.end());
        }
        if (!all_finite(data_))
            throw domain_error("matrix_not_finite", "matrix entries must be finite");
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix from_rows(const std::vector<Vector>& rows) {
        if (rows.empty()) throw domain_error("matrix_shape", "matrix needs at least one row");
        Matrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols())
                throw domain_error("matrix_shape", "ragged rows");
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
        }
        if (!all_finite(m.data_))
            throw domain_error("matrix_not_finite", "matrix entries must be finite");
        return m;
    }

    static Matrix from_columns(const std::vector<Vector>& cols) {
        if (cols.empty()) throw domain_error("matrix_shape", "matrix needs at least one column");
        Matrix m(cols.front().size(), cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != m.rows())
                throw domain_error("matrix_shape", "ragged columns");
            for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = cols[j][i];
        }
        if (!all_finite(m.data_))
            throw domain_error("matrix_not_finite", "matrix entries must be finite");
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const Vector& data() const noexcept { return data_; }

    Vector row(std::size_t i) const {
        return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                      data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }

    Vector column(std::size_t j) const {
        Vector c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    std::vector<Vector> to_rows() const {
        std::vector<Vector> out;
        out.reserve(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
        return out;
    }

    std::vector<Vector> to_columns() const {
        std::vector<Vector> out;
        out.reserve(cols_);
        for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    void check_shape() const {
        if (rows_ < 1 || cols_ < 1)
            throw domain_error("matrix_shape", "matrix needs at least one row and one column");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

inline Matrix transpose(const Matrix& m) {
    Matrix t(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
    return t;
}

inline Vector matvec(const Matrix& m, const Vector& v) {
    if (v.size() != m.cols())
        throw domain_error("matrix_shape", "matvec dimension mismatch");
    Vector out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw domain_error("matrix_shape", "matmul dimension mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

// ---------------------------------------------------------------------------
// Reduced row echelon form
// ---------------------------------------------------------------------------

struct RrefResult {
    Matrix reduced;
    std::vector<std::size_t> pivot_columns;  // strictly increasing
    std::size_t rank = 0;
};

/// Gauss-Jordan elimination with partial pivoting (largest absolute value in
/// the column). Entries left below tol * (row max) are flushed to zero.
inline RrefResult rref(const Matrix& m, double tol = kPivotTol) {
    Matrix a = m;
    std::vector<std::size_t> pivots;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < a.cols() && pivot_row < a.rows(); ++col) {
        std::size_t best = pivot_row;
        double best_abs = std::abs(a(pivot_row, col));
        for (std::size_t i = pivot_row + 1; i < a.rows(); ++i) {
            double v = std::abs(a(i, col));
            if (v > best_abs) {
                best_abs = v;
                best = i;
            }
        }
        if (best_abs <= tol) {
            for (std::size_t i = pivot_row; i < a.rows(); ++i) a(i, col) = 0.0;
            continue;
        }
        if (best != pivot_row)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(best, j), a(pivot_row, j));
        double inv = 1.0 / a(pivot_row, col);
        for (std::size_t j = 0; j < a.cols(); ++j) a(pivot_row, j) *= inv;
        a(pivot_row, col) = 1.0;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == pivot_row) continue;
            double f = a(i, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= f * a(pivot_row, j);
            a(i, col) = 0.0;
        }
        pivots.push_back(col);
        ++pivot_row;
    }
    // Flush roundoff noise relative to each row's magnitude.
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double row_max = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) row_max = std::max(row_max, std::abs(a(i, j)));
        if (row_max == 0.0) continue;
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (std::abs(a(i, j)) < tol * row_max) a(i, j) = 0.0;
    }
    return RrefResult{std::move(a), std::move(pivots), pivots.size()};
}

inline std::size_t rank(const Matrix& m, double tol = kPivotTol) {
    return rref(m, tol).rank;
}

/// Lexicographically earliest maximal linearly independent subset of rows:
/// a row enters iff it increases the rank of the rows selected so far.
/// Decided by modified Gram-Schmidt with one reorthogonalization pass.
inline std::vector<std::size_t> max_lin_indep_rows(const Matrix& m, double tol = kPivotTol) {
    std::vector<std::size_t> selected;
    std::vector<Vector> ortho;  // orthonormal spanning set of selected rows
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Vector r = m.row(i);
        double scale = norm2(r);
        if (scale <= tol) continue;
        for (int pass = 0; pass < 2; ++pass) {
            for (const Vector& q : ortho) {
                double c = dot(q, r);
                for (std::size_t j = 0; j < r.size(); ++j) r[j] -= c * q[j];
            }
        }
        double rn = norm2(r);
        if (rn > tol * (1.0 + scale)) {
            for (double& x : r) x /= rn;
            ortho.push_back(std::move(r));
            selected.push_back(i);
            if (selected.size() == std::min(m.rows(), m.cols())) break;
        }
    }
    return selected;
}

// ---------------------------------------------------------------------------
// Linear solvers
// ---------------------------------------------------------------------------

/// Solves A X = B for square A via Gaussian elimination with partial pivoting.
inline Matrix solve_square(const Matrix& a, const Matrix& b, double tol = kPivotTol) {
    if (a.rows() != a.cols() || a.rows() != b.rows())
        throw domain_error("matrix_shape", "solve_square dimension mismatch");
    std::size_t n = a.rows();
    Matrix lu = a;
    Matrix x = b;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = col;
        double best_abs = std::abs(lu(col, col));
        for (std::size_t i = col + 1; i < n; ++i) {
            double v = std::abs(lu(i, col));
            if (v > best_abs) {
                best_abs = v;
                best = i;
            }
        }
        if (best_abs <= tol)
            throw domain_error("singular_matrix", "matrix is singular within tolerance");
        if (best != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(best, j), lu(col, j));
            for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(best, j), x(col, j));
        }
        double inv = 1.0 / lu(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            double f = lu(i, col) * inv;
            if (f == 0.0) continue;
            lu(i, col) = 0.0;
            for (std::size_t j = col + 1; j < n; ++j) lu(i, j) -= f * lu(col, j);
            for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= f * x(col, j);
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        double inv = 1.0 / lu(col, col);
        for (std::size_t j = 0; j < x.cols(); ++j) {
            double s = x(col, j);
            for (std::size_t k = col + 1; k < n; ++k) s -= lu(col, k) * x(k, j);
            x(col, j) = s * inv;
        }
    }
    return x;
}

struct LeastSquaresResult {
    Vector solution;
    double residual_norm = 0.0;
};

/// Minimum-residual solution of A x = b (rows >= cols, full column rank)
/// via Householder QR. Throws when A is column rank deficient.
inline LeastSquaresResult least_squares(const Matrix& a, const Vector& b, double tol = kPivotTol) {
    if (b.size() != a.rows())
        throw domain_error("matrix_shape", "least_squares dimension mismatch");
    if (a.cols() > a.rows())
        throw domain_error("matrix_shape", "least_squares needs rows >= cols");
    std::size_t m = a.rows(), n = a.cols();
    Matrix r = a;
    Vector qtb = b;
    double col_scale = 0.0;
    for (double v : a.data()) col_scale = std::max(col_scale, std::abs(v));
    for (std::size_t k = 0; k < n; ++k) {
        double alpha = 0.0;
        for (std::size_t i = k; i < m; ++i) alpha += r(i, k) * r(i, k);
        alpha = std::sqrt(alpha);
        if (alpha <= tol * (1.0 + col_scale))
            throw domain_error("rank_deficient", "least_squares matrix is column rank deficient");
        if (r(k, k) > 0.0) alpha = -alpha;
        Vector v(m - k, 0.0);
        v[0] = r(k, k) - alpha;
        for (std::size_t i = k + 1; i < m; ++i) v[i - k] = r(i, k);
        double vnorm2 = dot(v, v);
        if (vnorm2 > 0.0) {
            for (std::size_t j = k; j < n; ++j) {
                double s = 0.0;
                for (std::size_t i = k; i < m; ++i) s += v[i - k] * r(i, j);
                s *= 2.0 / vnorm2;
                for (std::size_t i = k; i < m; ++i) r(i, j) -= s * v[i - k];
            }
            double s = 0.0;
            for (std::size_t i = k; i < m; ++i) s += v[i - k] * qtb[i];
            s *= 2.0 / vnorm2;
            for (std::size_t i = k; i < m; ++i) qtb[i] -= s * v[i - k];
        }
        r(k, k) = alpha;
        for (std::size_t i = k + 1; i < m; ++i) r(i, k) = 0.0;
    }
    Vector x(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        double s = qtb[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= r(k, j) * x[j];
        x[k] = s / r(k, k);
    }
    double res2 = 0.0;
    for (std::size_t i = n; i < m; ++i) res2 += qtb[i] * qtb[i];
    return LeastSquaresResult{std::move(x), std::sqrt(res2)};
}

/// Residual of the best approximation of x in the span of the given rows.
inline double span_residual(const std::vector<Vector>& span_rows, const Vector& x,
                            double tol = kPivotTol) {
    if (span_rows.empty()) return norm2(x);
    // Reduce to an independent subset so QR stays full rank.
    auto indep = max_lin_indep_rows(Matrix::from_rows(span_rows), tol);
    if (indep.empty()) return norm2(x);
    std::vector<Vector> keep;
    keep.reserve(indep.size());
    for (std::size_t i : indep) keep.push_back(span_rows[i]);
    return least_squares(transpose(Matrix::from_rows(keep)), x, tol).residual_norm;
}

}  // namespace latticekit::numerics
