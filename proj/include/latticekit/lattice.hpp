#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "latticekit/error.hpp"
#include "latticekit/hull.hpp"
#include "latticekit/matrix.hpp"
#include "latticekit/nnls.hpp"

namespace latticekit::lattice {

using numerics::Matrix;
using numerics::Vector;

/// Tolerance treating two normalized payoff profiles as the same point.
inline constexpr double kDedupTol = 1e-9;
/// Residual above which a point counts as a vertex of the profile polytope.
inline constexpr double kVertexTol = 1e-8;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// n linearly independent, componentwise nonnegative vectors x_1..x_n in R^k.
class PayoffCollection {
public:
    PayoffCollection(std::size_t ambient_dim, std::vector<Vector> vectors)
        : k_(ambient_dim), vectors_(std::move(vectors)) {
        if (vectors_.empty())
            throw domain_error("empty_collection", "payoff collection needs at least one vector");
        if (vectors_.size() > k_)
            throw domain_error("too_many_vectors",
                               "more vectors than ambient dimensions (" +
                                   std::to_string(vectors_.size()) + " > " + std::to_string(k_) + ")");
        for (const Vector& v : vectors_) {
            if (v.size() != k_)
                throw domain_error("matrix_shape", "payoff vector has wrong dimension");
            for (double e : v) {
                if (!std::isfinite(e))
                    throw domain_error("matrix_not_finite", "payoff entries must be finite");
                if (e < 0.0)
                    throw domain_error("negative_entries", "payoff entries must be nonnegative");
            }
        }
        if (numerics::rank(Matrix::from_rows(vectors_)) != vectors_.size())
            throw domain_error("rank_deficient", "payoff vectors must be linearly independent");
    }

    /// Columns of the given k x n matrix become the vectors.
    static PayoffCollection from_columns(const Matrix& m) {
        return PayoffCollection(m.rows(), m.to_columns());
    }

    /// Skips invariant validation; for synthetic inputs in tests.
    static PayoffCollection unchecked(std::size_t ambient_dim, std::vector<Vector> vectors) {
        PayoffCollection c;
        c.k_ = ambient_dim;
        c.vectors_ = std::move(vectors);
        return c;
    }

    std::size_t ambient_dim() const noexcept { return k_; }
    std::size_t count() const noexcept { return vectors_.size(); }
    const std::vector<Vector>& vectors() const noexcept { return vectors_; }

private:
    PayoffCollection() = default;

    std::size_t k_ = 0;
    std::vector<Vector> vectors_;
};

/// The state-wise profile function: for each state i with a nonzero profile
/// r(i) = (x_1(i),...,x_n(i)), the 1-norm and the normalized row r(i)/|r(i)|_1.
struct BasicFunctionTable {
    std::vector<std::size_t> domain;  // states with a nonzero profile, ascending
    Vector norms;                     // |r(i)|_1 per domain entry
    std::vector<Vector> beta_rows;    // normalized profile per domain entry
    std::size_t n = 0;                // number of generating vectors
    std::size_t ambient_dim = 0;
};

/// Distinct profile values, their preimage states, vertex structure, and a
/// reordering placing n linearly independent vertices first.
struct BetaRange {
    std::vector<Vector> points;                    // canonical (lexicographic) order
    std::vector<std::vector<std::size_t>> preimages;  // states per point
    std::size_t m = 0;                             // number of distinct points
    std::vector<bool> vertex_flags;
    std::size_t d = 0;                             // number of vertices
    std::vector<std::size_t> independent_prefix;   // n indep vertices, rest of the
                                                   // vertices, then non-vertices
    std::size_t n = 0;
};

enum class SpanKind { kVectorSublattice, kLatticeSubspace, kNeither };

inline const char* to_string(SpanKind kind) {
    switch (kind) {
        case SpanKind::kVectorSublattice: return "vector_sublattice";
        case SpanKind::kLatticeSubspace: return "lattice_subspace";
        default: return "neither";
    }
}

struct Classification {
    SpanKind kind = SpanKind::kNeither;
    std::size_t m = 0;
    std::size_t d = 0;
    std::size_t n = 0;
};

/// Basis b_1..b_r of a lattice-subspace such that a member vector is
/// nonnegative iff its coefficients in the basis are nonnegative. coeffs is
/// the matrix A with generators^T = A * basis^T.
struct PositiveBasis {
    std::vector<Vector> basis;
    Matrix coeffs = Matrix(1, 1);
};

struct SublatticeResult {
    std::vector<Vector> generators;  // inputs first, appended vectors after
    PositiveBasis basis;
};

struct MinLatResult {
    std::vector<Vector> generators;      // inputs first, appended vectors after
    Matrix xi_table = Matrix(1, 1);      // d x |D(beta)| simplex coefficients
    std::vector<std::size_t> xi_domain;  // states labelling xi_table columns
    PositiveBasis basis;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

inline BasicFunctionTable basic_function(const PayoffCollection& x) {
    BasicFunctionTable t;
    t.n = x.count();
    t.ambient_dim = x.ambient_dim();
    for (std::size_t i = 0; i < x.ambient_dim(); ++i) {
        Vector r(x.count());
        double norm = 0.0;
        for (std::size_t j = 0; j < x.count(); ++j) {
            r[j] = x.vectors()[j][i];
            norm += std::abs(r[j]);
        }
        if (norm == 0.0) continue;
        for (double& v : r) v /= norm;
        t.domain.push_back(i);
        t.norms.push_back(norm);
        t.beta_rows.push_back(std::move(r));
    }
    if (t.domain.empty())
        throw domain_error("empty_beta_domain", "all payoff rows are zero; no profile function exists");
    return t;
}

namespace detail {

inline bool rows_equal(const Vector& a, const Vector& b, double tol) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

inline bool lex_less(const Vector& a, const Vector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

}  // namespace detail

inline BetaRange beta_range(const BasicFunctionTable& t, double dedup_tol = kDedupTol,
                            double vertex_tol = kVertexTol) {
    if (t.domain.empty())
        throw domain_error("empty_beta_domain", "profile table is empty");
    BetaRange r;
    r.n = t.n;

    // Group states whose normalized profiles agree within dedup_tol; the first
    // occurrence is the representative.
    std::vector<Vector> reps;
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t idx = 0; idx < t.domain.size(); ++idx) {
        bool placed = false;
        for (std::size_t g = 0; g < reps.size(); ++g) {
            if (detail::rows_equal(reps[g], t.beta_rows[idx], dedup_tol)) {
                groups[g].push_back(t.domain[idx]);
                placed = true;
                break;
            }
        }
        if (!placed) {
            reps.push_back(t.beta_rows[idx]);
            groups.push_back({t.domain[idx]});
        }
    }

    std::vector<std::size_t> order(reps.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return detail::lex_less(reps[a], reps[b]);
    });
    for (std::size_t i : order) {
        r.points.push_back(reps[i]);
        r.preimages.push_back(groups[i]);
    }
    r.m = r.points.size();

    r.vertex_flags.resize(r.m);
    std::vector<std::size_t> vertex_ids;
    for (std::size_t s = 0; s < r.m; ++s) {
        r.vertex_flags[s] = numerics::is_vertex(r.points, s, vertex_tol);
        if (r.vertex_flags[s]) vertex_ids.push_back(s);
    }
    r.d = vertex_ids.size();

    std::vector<Vector> vertex_rows;
    vertex_rows.reserve(r.d);
    for (std::size_t s : vertex_ids) vertex_rows.push_back(r.points[s]);
    std::vector<std::size_t> indep =
        r.d == 0 ? std::vector<std::size_t>{}
                 : numerics::max_lin_indep_rows(Matrix::from_rows(vertex_rows));
    if (indep.size() < t.n)
        throw domain_error("independent_vertex_shortfall",
                           "found only " + std::to_string(indep.size()) +
                               " independent vertices, need " + std::to_string(t.n) +
                               "; tolerance failure");

    std::vector<bool> in_prefix(r.m, false);
    for (std::size_t i = 0; i < t.n; ++i) {
        r.independent_prefix.push_back(vertex_ids[indep[i]]);
        in_prefix[vertex_ids[indep[i]]] = true;
    }
    for (std::size_t s : vertex_ids)
        if (!in_prefix[s]) r.independent_prefix.push_back(s);
    for (std::size_t s = 0; s < r.m; ++s)
        if (!r.vertex_flags[s]) r.independent_prefix.push_back(s);
    return r;
}

inline Classification classify(const BetaRange& r) {
    Classification c{SpanKind::kNeither, r.m, r.d, r.n};
    if (r.m == r.n) c.kind = SpanKind::kVectorSublattice;
    else if (r.d == r.n) c.kind = SpanKind::kLatticeSubspace;
    return c;
}

inline Classification classify(const PayoffCollection& x) {
    return classify(beta_range(basic_function(x)));
}

/// Positive basis via rows of A^{-1} (x_1,...,x_n)^T where the columns of A
/// are the first n points of the independent prefix. Requires the collection
/// to be a vector sublattice or lattice-subspace.
inline PositiveBasis positive_basis(const PayoffCollection& x, const BetaRange& range) {
    Classification c = classify(range);
    if (c.kind == SpanKind::kNeither)
        throw domain_error("not_classifiable",
                           "positive basis requires a vector sublattice or lattice-subspace");
    const std::size_t n = x.count();
    Matrix a(n, n);
    for (std::size_t s = 0; s < n; ++s) {
        const Vector& p = range.points[range.independent_prefix[s]];
        for (std::size_t i = 0; i < n; ++i) a(i, s) = p[i];
    }
    Matrix rows = Matrix::from_rows(x.vectors());
    Matrix b = numerics::solve_square(a, rows);

    PositiveBasis out;
    out.coeffs = a;
    for (std::size_t i = 0; i < n; ++i) {
        Vector bi = b.row(i);
        double row_max = numerics::norm_inf(bi);
        for (double& v : bi) {
            if (v < 0.0) {
                if (v < -1e-7 * std::max(1.0, row_max))
                    throw domain_error("positive_basis_negative",
                                       "computed basis row has a negative entry; "
                                       "classification is inconsistent");
                v = 0.0;
            } else if (v < 1e-12 * row_max) {
                v = 0.0;
            }
        }
        out.basis.push_back(std::move(bi));
    }
    return out;
}

inline PositiveBasis positive_basis(const PayoffCollection& x) {
    return positive_basis(x, beta_range(basic_function(x)));
}

/// The vector sublattice generated by the collection: the inputs plus, for
/// every distinct profile value outside a maximal independent subset of the
/// profile range, the vector sum_{i in I_s} |r(i)|_1 e_i over its preimage.
inline SublatticeResult generate_sublattice(const PayoffCollection& x) {
    BasicFunctionTable table = basic_function(x);
    BetaRange range = beta_range(table);
    const std::size_t n = x.count();

    if (range.m == n)
        return SublatticeResult{x.vectors(), positive_basis(x, range)};

    // The appended generators come from the profile values outside the
    // first-come independent subset over all m points, in canonical order.
    std::vector<std::size_t> sel =
        numerics::max_lin_indep_rows(Matrix::from_rows(range.points));
    if (sel.size() != n)
        throw domain_error("independent_vertex_shortfall",
                           "profile range rank disagrees with the vector count");
    std::vector<bool> selected(range.m, false);
    for (std::size_t s : sel) selected[s] = true;

    Vector norm_by_state(x.ambient_dim(), 0.0);
    for (std::size_t idx = 0; idx < table.domain.size(); ++idx)
        norm_by_state[table.domain[idx]] = table.norms[idx];

    std::vector<Vector> generators = x.vectors();
    for (std::size_t s = 0; s < range.m; ++s) {
        if (selected[s]) continue;
        Vector v(x.ambient_dim(), 0.0);
        for (std::size_t state : range.preimages[s]) v[state] = norm_by_state[state];
        generators.push_back(std::move(v));
    }

    PayoffCollection enlarged(x.ambient_dim(), generators);
    PositiveBasis basis = positive_basis(enlarged);
    return SublatticeResult{std::move(generators), std::move(basis)};
}

/// A minimal lattice-subspace containing the collection: solves the simplex
/// representation beta(j) = sum_i xi_i(j) P_i over the d vertices for every
/// state j, then appends sum_j xi_{n+i}(j) |r(j)|_1 e_j for i = 1..d-n.
inline MinLatResult minimal_lattice_subspace(const PayoffCollection& x,
                                             double xi_residual_tol = 1e-6) {
    BasicFunctionTable table = basic_function(x);
    BetaRange range = beta_range(table);
    const std::size_t n = x.count();
    const std::size_t d = range.d;

    // Vertex columns in prefix order: n independent first, rest canonical.
    Matrix p(n, d);
    for (std::size_t t = 0; t < d; ++t) {
        const Vector& pt = range.points[range.independent_prefix[t]];
        for (std::size_t i = 0; i < n; ++i) p(i, t) = pt[i];
    }

    Matrix xi(d, table.domain.size());
    for (std::size_t jj = 0; jj < table.domain.size(); ++jj) {
        numerics::NnlsResult sol = numerics::nnls(p, table.beta_rows[jj]);
        if (sol.residual_norm > xi_residual_tol)
            throw domain_error("xi_infeasible",
                               "state " + std::to_string(table.domain[jj]) +
                                   " is not in the vertex hull (residual " +
                                   std::to_string(sol.residual_norm) + "); a vertex was mis-detected");
        for (std::size_t i = 0; i < d; ++i) xi(i, jj) = sol.solution[i];
    }

    MinLatResult out;
    out.xi_table = xi;
    out.xi_domain = table.domain;
    out.generators = x.vectors();

    if (d == n) {
        out.basis = positive_basis(x, range);
        return out;
    }

    for (std::size_t i = 0; i < d - n; ++i) {
        Vector v(x.ambient_dim(), 0.0);
        for (std::size_t jj = 0; jj < table.domain.size(); ++jj)
            v[table.domain[jj]] = xi(n + i, jj) * table.norms[jj];
        out.generators.push_back(std::move(v));
    }

    PayoffCollection enlarged(x.ambient_dim(), out.generators);
    out.basis = positive_basis(enlarged);
    return out;
}

/// Coefficients of x in the positive basis; errors when x is outside the span.
inline Vector coords_in_basis(const PositiveBasis& b, const Vector& x,
                              double tol = numerics::kResidualTol) {
    Matrix cols = transpose(Matrix::from_rows(b.basis));
    numerics::LeastSquaresResult ls = numerics::least_squares(cols, x);
    if (ls.residual_norm > tol)
        throw domain_error("not_in_span",
                           "vector lies outside the basis span (residual " +
                               std::to_string(ls.residual_norm) + ")");
    return ls.solution;
}

/// Supremum of {x, y} taken within the subspace: componentwise max of the
/// basis coefficients, re-expanded.
inline Vector sup_in(const PositiveBasis& b, const Vector& x, const Vector& y,
                     double tol = numerics::kResidualTol) {
    Vector lx = coords_in_basis(b, x, tol);
    Vector ly = coords_in_basis(b, y, tol);
    Vector out(b.basis.front().size(), 0.0);
    for (std::size_t i = 0; i < b.basis.size(); ++i) {
        double c = std::max(lx[i], ly[i]);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += c * b.basis[i][j];
    }
    return out;
}

/// Infimum within the subspace, dually.
inline Vector inf_in(const PositiveBasis& b, const Vector& x, const Vector& y,
                     double tol = numerics::kResidualTol) {
    Vector lx = coords_in_basis(b, x, tol);
    Vector ly = coords_in_basis(b, y, tol);
    Vector out(b.basis.front().size(), 0.0);
    for (std::size_t i = 0; i < b.basis.size(); ++i) {
        double c = std::min(lx[i], ly[i]);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += c * b.basis[i][j];
    }
    return out;
}

}  // namespace latticekit::lattice
