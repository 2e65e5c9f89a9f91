#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "otmix/divergences.hpp"
#include "otmix/errors.hpp"
#include "otmix/types.hpp"

// Entropic optimal transport: the full problem via log-domain Sinkhorn and
// the semi-relaxed problem (row marginal fixed at 1_n/n, column free) via its
// row-decoupled closed form.

namespace otmix {

struct SinkhornSettings {
    double epsilon = 1.0;                // regularization strength
    int max_iterations = 10000;
    double marginal_tolerance = 1e-9;    // L1 deviation of the column marginal
};

struct EotSolution {
    Coupling coupling;
    double value;          // objective at `coupling`, in nats
    int iterations_used;
    bool converged;
};

// <C, P> + epsilon * KL(P | a b^T).
inline double eot_objective(const Coupling& P, const CostMatrix& C,
                            const ProbabilityVector& a, const ProbabilityVector& b,
                            double epsilon = 1.0) {
    if (P.rows() != C.rows() || P.cols() != C.cols())
        throw ShapeMismatch("coupling and cost matrix shapes differ");
    if (a.size() != P.rows() || b.size() != P.cols())
        throw ShapeMismatch("marginal sizes do not match the coupling");
    double transport = 0.0;
    for (Eigen::Index i = 0; i < P.rows(); ++i)
        for (Eigen::Index j = 0; j < P.cols(); ++j)
            transport += C.costs()(i, j) * P.plan()(i, j);
    return transport +
           epsilon * kl_matrix(P.plan(), a.weights() * b.weights().transpose());
}

namespace detail {

inline std::vector<Eigen::Index> support_of(const Eigen::VectorXd& v) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v(i) > 0.0) idx.push_back(i);
    return idx;
}

}  // namespace detail

// Log-domain Sinkhorn for min_{P in U(a,b)} <C,P> + eps KL(P | a b^T).
// Dual potentials are updated in the log domain; the final update is the row
// scaling, so the returned coupling meets the row marginal exactly and the
// column marginal within `marginal_tolerance` in L1 (when converged).
// Zero-mass rows/columns are dropped up front and restored as zeros.
inline EotSolution sinkhorn(const ProbabilityVector& a, const ProbabilityVector& b,
                            const CostMatrix& C, const SinkhornSettings& settings = {}) {
    if (settings.epsilon <= 0.0)
        throw std::invalid_argument("sinkhorn: epsilon must be positive");
    if (settings.max_iterations < 1)
        throw std::invalid_argument("sinkhorn: max_iterations must be at least 1");
    if (settings.marginal_tolerance <= 0.0)
        throw std::invalid_argument("sinkhorn: marginal_tolerance must be positive");
    if (a.size() != C.rows() || b.size() != C.cols())
        throw ShapeMismatch("marginal sizes do not match the cost matrix");

    const auto rows = detail::support_of(a.weights());
    const auto cols = detail::support_of(b.weights());
    if (rows.empty() || cols.empty())
        throw DegenerateMarginal("all mass sits on an empty support");
    const Eigen::Index nr = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index nc = static_cast<Eigen::Index>(cols.size());

    Eigen::VectorXd ar(nr), br(nc);
    for (Eigen::Index i = 0; i < nr; ++i) ar(i) = a[rows[i]];
    for (Eigen::Index j = 0; j < nc; ++j) br(j) = b[cols[j]];
    const ProbabilityVector a_sub(ar), b_sub(br);

    Eigen::MatrixXd M(nr, nc);  // -C/eps on the support
    for (Eigen::Index i = 0; i < nr; ++i)
        for (Eigen::Index j = 0; j < nc; ++j)
            M(i, j) = -C.costs()(rows[i], cols[j]) / settings.epsilon;

    Eigen::VectorXd phi = Eigen::VectorXd::Zero(nr);
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(nc);
    Eigen::MatrixXd plan_sub(nr, nc);
    bool converged = false;
    int iterations = 0;

    while (iterations < settings.max_iterations) {
        ++iterations;
        for (Eigen::Index i = 0; i < nr; ++i)
            phi(i) = -weighted_logsumexp(b_sub, psi + M.row(i).transpose());
        for (Eigen::Index i = 0; i < nr; ++i)
            for (Eigen::Index j = 0; j < nc; ++j)
                plan_sub(i, j) = ar(i) * br(j) * std::exp(phi(i) + psi(j) + M(i, j));
        const double residual =
            (plan_sub.colwise().sum().transpose() - br).cwiseAbs().sum();
        if (residual <= settings.marginal_tolerance) {
            converged = true;
            break;
        }
        if (iterations == settings.max_iterations) break;
        for (Eigen::Index j = 0; j < nc; ++j)
            psi(j) = -weighted_logsumexp(a_sub, phi + M.col(j));
    }

    Eigen::MatrixXd plan = Eigen::MatrixXd::Zero(C.rows(), C.cols());
    for (Eigen::Index i = 0; i < nr; ++i)
        for (Eigen::Index j = 0; j < nc; ++j)
            plan(rows[i], cols[j]) = plan_sub(i, j);

    // The column marginal is only approximate, so the coupling is returned as
    // a semi-relaxed plan; feasibility towards b is reported via `converged`.
    Coupling coupling(std::move(plan), a);
    const double value = eot_objective(coupling, C, a, b, settings.epsilon);
    return EotSolution{std::move(coupling), value, iterations, converged};
}

// Closed form for min over U_K(1_n/n) of <C,P> + KL(P | (1_n/n) pi^T).
// The problem decouples by row: row i is the Gibbs optimum for exponents
// -C_i, scaled by 1/n.
inline EotSolution semi_relaxed_solve(const ProbabilityVector& pi, const CostMatrix& C) {
    const Eigen::Index n = C.rows();
    if (pi.size() != C.cols())
        throw ShapeMismatch("weight count does not match cost matrix columns");
    Eigen::MatrixXd plan(n, C.cols());
    const double inv_n = 1.0 / static_cast<double>(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const ProbabilityVector row = gibbs_optimum(pi, -C.costs().row(i).transpose());
        plan.row(i) = inv_n * row.weights().transpose();
    }
    const ProbabilityVector uniform_rows = ProbabilityVector::uniform(n);
    Coupling coupling(std::move(plan), uniform_rows);
    const double value = eot_objective(coupling, C, uniform_rows, pi, 1.0);
    return EotSolution{std::move(coupling), value, 1, true};
}

// Minimizes the semi-relaxed objective jointly over the plan and the column
// weights by exact alternation: solve the plan for the current pi, then set
// pi to the plan's column marginal (the KL-optimal weights). Both steps are
// exact block minimizations, so the objective never increases. Stops when pi
// moves less than `pi_tolerance` in L1 or after `max_alternations` rounds.
inline std::pair<ProbabilityVector, EotSolution> min_over_pi_semi_relaxed(
    const CostMatrix& C, std::optional<ProbabilityVector> initial = std::nullopt,
    int max_alternations = 500, double pi_tolerance = 1e-12) {
    if (max_alternations < 1)
        throw std::invalid_argument("min_over_pi: need at least one alternation");
    ProbabilityVector pi = initial ? std::move(*initial)
                                   : ProbabilityVector::uniform(C.cols());
    if (pi.size() != C.cols())
        throw ShapeMismatch("initial weights do not match cost matrix columns");
    if (!pi.strictly_positive())
        throw NonPositiveWeight("initial weights must be strictly positive");

    std::optional<EotSolution> solution;
    bool converged = false;
    int alternations = 0;
    while (alternations < max_alternations) {
        ++alternations;
        solution = semi_relaxed_solve(pi, C);
        const ProbabilityVector next = column_marginal(solution->coupling);
        const double shift = (next.weights() - pi.weights()).cwiseAbs().sum();
        pi = next;
        if (shift < pi_tolerance) {
            converged = true;
            break;
        }
    }

    // Re-evaluate against the realized column marginal so the reported value
    // is the unconstrained-column objective at the returned plan.
    const ProbabilityVector uniform_rows = ProbabilityVector::uniform(C.rows());
    const double value = eot_objective(solution->coupling, C, uniform_rows, pi, 1.0);
    return {pi, EotSolution{std::move(solution->coupling), value, alternations, converged}};
}

}  // namespace otmix
