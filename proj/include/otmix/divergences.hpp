#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "otmix/errors.hpp"
#include "otmix/types.hpp"

// KL divergences on nonnegative vectors/matrices, stabilized weighted
// log-sum-exp, its simplex variational form, and the decomposition of
// KL against a product measure into independence and marginal terms.
//
// Conventions: 0 log 0 = 0, and KL is +infinity (a value, not an error)
// when mass sits where the reference vanishes. All sums accumulate in
// row-major index order so results are bit-reproducible across runs.

namespace otmix {

namespace detail {

inline void check_nonnegative_kl_input(double x, const char* side) {
    if (x < -kNegativeClampFloor || !std::isfinite(x))
        throw std::invalid_argument(std::string("kl: ") + side +
                                    " has a negative or non-finite entry");
}

// One KL summand; returns +inf for p > 0, q <= 0.
inline double kl_term(double p, double q) {
    check_nonnegative_kl_input(p, "left");
    check_nonnegative_kl_input(q, "right");
    if (p <= 0.0) return 0.0;
    if (q <= 0.0) return std::numeric_limits<double>::infinity();
    return p * std::log(p / q);
}

}  // namespace detail

// KL(P | Q) = sum_ij P_ij log(P_ij / Q_ij) for nonnegative matrices.
inline double kl_matrix(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q) {
    if (P.rows() != Q.rows() || P.cols() != Q.cols())
        throw ShapeMismatch("kl_matrix: operand shapes differ");
    double total = 0.0;
    for (Eigen::Index i = 0; i < P.rows(); ++i)
        for (Eigen::Index j = 0; j < P.cols(); ++j) {
            const double term = detail::kl_term(P(i, j), Q(i, j));
            if (std::isinf(term)) return term;
            total += term;
        }
    return total;
}

// KL between nonnegative vectors; one-row case of kl_matrix.
inline double kl_vector(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw ShapeMismatch("kl_vector: operand sizes differ");
    double total = 0.0;
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        const double term = detail::kl_term(a(j), b(j));
        if (std::isinf(term)) return term;
        total += term;
    }
    return total;
}

namespace detail {

inline void check_lse_input(const ProbabilityVector& pi, const Eigen::VectorXd& h) {
    if (h.size() == 0) throw EmptyInput("weighted log-sum-exp of nothing");
    if (pi.size() != h.size())
        throw ShapeMismatch("weight and exponent sizes differ");
    if (!pi.strictly_positive())
        throw NonPositiveWeight("weights must be strictly positive");
    if (!h.allFinite())
        throw std::invalid_argument("exponents must be finite");
}

}  // namespace detail

// log sum_j pi_j exp(h_j), computed with the max subtracted. Safe for
// exponents hundreds of nats either side of zero; exact for a single term.
inline double weighted_logsumexp(const ProbabilityVector& pi, const Eigen::VectorXd& h) {
    detail::check_lse_input(pi, h);
    const double m = h.maxCoeff();
    double sum = 0.0;
    for (Eigen::Index j = 0; j < h.size(); ++j)
        sum += pi[j] * std::exp(h(j) - m);
    return m + std::log(sum);
}

// Maximizer of p -> <h, p> - KL(p | pi) over the simplex:
// p_k proportional to pi_k exp(h_k).
inline ProbabilityVector gibbs_optimum(const ProbabilityVector& pi, const Eigen::VectorXd& h) {
    detail::check_lse_input(pi, h);
    const double m = h.maxCoeff();
    Eigen::VectorXd p(h.size());
    for (Eigen::Index j = 0; j < h.size(); ++j)
        p(j) = pi[j] * std::exp(h(j) - m);
    return ProbabilityVector(p / p.sum());
}

// The variational objective <h, p> - KL(p | pi) at an arbitrary simplex point.
inline double gibbs_objective(const ProbabilityVector& pi, const Eigen::VectorXd& h,
                              const ProbabilityVector& p) {
    detail::check_lse_input(pi, h);
    if (p.size() != h.size())
        throw ShapeMismatch("evaluation point size differs from exponent size");
    double linear = 0.0;
    for (Eigen::Index j = 0; j < h.size(); ++j) linear += h(j) * p[j];
    return linear - kl_vector(p.weights(), pi.weights());
}

// KL(P | a b^T) split into an independence term and two marginal terms.
struct KlDecomposition {
    double plan_term;    // KL(P | (P 1_K)(P^T 1_n)^T)
    double row_term;     // KL(P 1_K | a)
    double column_term;  // KL(P^T 1_n | b)

    double total() const { return plan_term + row_term + column_term; }
};

inline KlDecomposition kl_three_term_decomposition(const Eigen::MatrixXd& P,
                                                   const Eigen::VectorXd& a,
                                                   const Eigen::VectorXd& b) {
    if (a.size() != P.rows() || b.size() != P.cols())
        throw ShapeMismatch("marginal sizes do not match the matrix");
    const Eigen::VectorXd row_sums = P.rowwise().sum();
    const Eigen::VectorXd col_sums = P.colwise().sum().transpose();
    return KlDecomposition{
        kl_matrix(P, row_sums * col_sums.transpose()),
        kl_vector(row_sums, a),
        kl_vector(col_sums, b),
    };
}

}  // namespace otmix
