#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "latticekit/error.hpp"
#include "latticekit/lattice.hpp"
#include "latticekit/matrix.hpp"
#include "latticekit/simplex.hpp"

namespace latticekit::markets {

using lattice::PayoffCollection;
using lattice::PositiveBasis;
using numerics::Matrix;
using numerics::Vector;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// A two-period security market: n primitive payoff vectors (entries may be
/// negative) and the strike vectors spanning the strike subspace U. An empty
/// strike list is treated as U contained in the marketed space.
class MarketSpec {
public:
    MarketSpec(std::size_t state_count, std::vector<Vector> primitives,
               std::vector<Vector> strikes = {})
        : k_(state_count), primitives_(std::move(primitives)), strikes_(std::move(strikes)) {
        if (primitives_.empty())
            throw domain_error("empty_collection", "market needs at least one primitive security");
        for (const Vector& v : primitives_) {
            if (v.size() != k_) throw domain_error("matrix_shape", "primitive has wrong dimension");
            if (!numerics::all_finite(v))
                throw domain_error("matrix_not_finite", "primitive payoffs must be finite");
        }
        for (const Vector& v : strikes_) {
            if (v.size() != k_) throw domain_error("matrix_shape", "strike has wrong dimension");
            if (!numerics::all_finite(v))
                throw domain_error("matrix_not_finite", "strike vectors must be finite");
        }
        if (numerics::rank(Matrix::from_rows(primitives_)) != primitives_.size())
            throw domain_error("rank_deficient", "primitive payoffs must be linearly independent");
    }

    std::size_t state_count() const noexcept { return k_; }
    const std::vector<Vector>& primitives() const noexcept { return primitives_; }
    const std::vector<Vector>& strikes() const noexcept { return strikes_; }

private:
    std::size_t k_;
    std::vector<Vector> primitives_;
    std::vector<Vector> strikes_;
};

/// The completion-by-options of the marketed space: a basic set generating it
/// as a sublattice, the full sublattice generators, its positive basis,
/// dimension, and whether the market was already complete.
struct CompletionResult {
    std::vector<Vector> basic_set;
    std::vector<Vector> generators;
    PositiveBasis basis;
    std::size_t dimension = 0;
    bool complete = false;
};

/// Minimum-cost insurance instance: positive independent payoffs whose sum is
/// strictly positive in every state, security prices, the insured portfolio,
/// and the floor portfolio.
class InsuranceProblem {
public:
    InsuranceProblem(PayoffCollection payoffs, Vector prices, Vector portfolio, Vector floor)
        : payoffs_(std::move(payoffs)), prices_(std::move(prices)),
          portfolio_(std::move(portfolio)), floor_(std::move(floor)) {
        const std::size_t n = payoffs_.count();
        if (prices_.size() != n || portfolio_.size() != n || floor_.size() != n)
            throw domain_error("matrix_shape", "prices, portfolio, and floor must have one entry per security");
        if (!numerics::all_finite(prices_) || !numerics::all_finite(portfolio_) ||
            !numerics::all_finite(floor_))
            throw domain_error("matrix_not_finite", "insurance data must be finite");
        for (std::size_t i = 0; i < payoffs_.ambient_dim(); ++i) {
            double s = 0.0;
            for (const Vector& x : payoffs_.vectors()) s += x[i];
            if (s <= 0.0)
                throw domain_error("sum_not_strictly_positive",
                                   "the summed payoff must be strictly positive in every state "
                                   "(state " + std::to_string(i) + " pays nothing)");
        }
    }

    const PayoffCollection& payoffs() const noexcept { return payoffs_; }
    const Vector& prices() const noexcept { return prices_; }
    const Vector& portfolio() const noexcept { return portfolio_; }
    const Vector& floor() const noexcept { return floor_; }

private:
    PayoffCollection payoffs_;
    Vector prices_;
    Vector portfolio_;
    Vector floor_;
};

struct InsuranceSolution {
    Vector eta;          // optimal portfolio
    double cost = 0.0;   // prices . eta
    Vector payoff;       // realized payoff of eta
    Vector target;       // pointwise max of the insured and floor payoffs
    Vector lattice_sup;  // supremum of the two payoffs inside a minimal
                         // lattice-subspace containing the payoff span
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Call option (x - a u)^+ on x with strike vector u and exercise price a.
inline Vector call_option(const Vector& x, const Vector& u, double a) {
    if (x.size() != u.size()) throw domain_error("matrix_shape", "option dimension mismatch");
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double v = x[i] - a * u[i];
        out[i] = v > 0.0 ? v : 0.0;
    }
    return out;
}

/// Put option (a u - x)^+, dually.
inline Vector put_option(const Vector& x, const Vector& u, double a) {
    if (x.size() != u.size()) throw domain_error("matrix_shape", "option dimension mismatch");
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double v = a * u[i] - x[i];
        out[i] = v > 0.0 ? v : 0.0;
    }
    return out;
}

/// Whether the strike subspace lies inside the marketed space, decided by a
/// rank comparison.
inline bool strikes_in_span(const MarketSpec& m, double tol = numerics::kPivotTol) {
    if (m.strikes().empty()) return true;
    std::vector<Vector> stacked = m.primitives();
    stacked.insert(stacked.end(), m.strikes().begin(), m.strikes().end());
    return numerics::rank(Matrix::from_rows(stacked), tol) ==
           numerics::rank(Matrix::from_rows(m.primitives()), tol);
}

/// A basic set of the market: the greedy maximal linearly independent subset
/// of the positive parts of all primitives (and strikes, when U is not inside
/// the marketed space) followed by the negative parts of the same vectors.
inline std::vector<Vector> basic_set(const MarketSpec& m) {
    bool u_in_x = strikes_in_span(m);
    std::vector<Vector> candidates;
    auto push_parts = [&](auto part) {
        for (const Vector& x : m.primitives()) candidates.push_back(part(x));
        if (!u_in_x)
            for (const Vector& u : m.strikes()) candidates.push_back(part(u));
    };
    push_parts([](const Vector& v) { return numerics::positive_part(v); });
    push_parts([](const Vector& v) { return numerics::negative_part(v); });

    std::vector<std::size_t> sel =
        numerics::max_lin_indep_rows(Matrix::from_rows(candidates));
    if (sel.empty())
        throw domain_error("empty_basic_set", "every primitive payoff is zero");
    std::vector<Vector> out;
    out.reserve(sel.size());
    for (std::size_t i : sel) out.push_back(candidates[i]);
    return out;
}

/// The completion by options F_U(X): the vector sublattice generated by a
/// basic set of the market.
inline CompletionResult complete_by_options(const MarketSpec& m) {
    CompletionResult out;
    out.basic_set = basic_set(m);
    PayoffCollection collection(m.state_count(), out.basic_set);
    lattice::SublatticeResult sub = lattice::generate_sublattice(collection);
    out.generators = std::move(sub.generators);
    out.basis = std::move(sub.basis);
    out.dimension = out.generators.size();
    out.complete = strikes_in_span(m) && out.dimension == m.primitives().size();
    return out;
}

/// Complete by options iff U lies inside the marketed space and the basic
/// set's profile range has exactly as many values as there are primitives.
inline bool is_complete(const MarketSpec& m) {
    if (!strikes_in_span(m)) return false;
    std::vector<Vector> basic = basic_set(m);
    PayoffCollection collection(m.state_count(), basic);
    lattice::BetaRange range = lattice::beta_range(lattice::basic_function(collection));
    return range.m == m.primitives().size();
}

/// Realized payoff of a portfolio.
inline Vector portfolio_payoff(const PayoffCollection& payoffs, const Vector& eta) {
    Vector out(payoffs.ambient_dim(), 0.0);
    for (std::size_t j = 0; j < payoffs.count(); ++j)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += eta[j] * payoffs.vectors()[j][i];
    return out;
}

/// Minimum-cost insurance: min p . eta subject to R(eta) >= R(theta) v R(phi),
/// solved directly as a linear program. The supremum of the two payoffs taken
/// inside a minimal lattice-subspace containing the payoff span is reported
/// alongside as a diagnostic.
inline InsuranceSolution min_cost_insurance(const InsuranceProblem& p) {
    const PayoffCollection& x = p.payoffs();
    Vector r_theta = portfolio_payoff(x, p.portfolio());
    Vector r_phi = portfolio_payoff(x, p.floor());
    Vector target(x.ambient_dim());
    for (std::size_t i = 0; i < target.size(); ++i) target[i] = std::max(r_theta[i], r_phi[i]);

    Matrix g(x.ambient_dim(), x.count());
    for (std::size_t i = 0; i < x.ambient_dim(); ++i)
        for (std::size_t j = 0; j < x.count(); ++j) g(i, j) = x.vectors()[j][i];

    numerics::LpSolution lp = numerics::simplex_solve({p.prices(), g, target});
    if (lp.status == numerics::LpStatus::kInfeasible)
        throw domain_error("lp_infeasible", "no portfolio dominates the insured payoff");
    if (lp.status == numerics::LpStatus::kUnbounded)
        throw domain_error("lp_unbounded",
                           "prices admit unboundedly cheap insurance; arbitrage in the price vector");

    InsuranceSolution out;
    out.eta = lp.x;
    out.cost = lp.objective_value;
    out.payoff = portfolio_payoff(x, lp.x);
    out.target = std::move(target);
    lattice::MinLatResult y = lattice::minimal_lattice_subspace(x);
    out.lattice_sup = lattice::sup_in(y.basis, r_theta, r_phi);
    return out;
}

}  // namespace latticekit::markets
