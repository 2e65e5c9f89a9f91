#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "otmix/divergences.hpp"
#include "otmix/eot.hpp"
#include "otmix/fit.hpp"
#include "otmix/gmm.hpp"
#include "otmix/random.hpp"
#include "otmix/types.hpp"

// Randomized end-to-end checks of the library's analytic identities: the
// NLL / semi-relaxed transport equality, the entropic upper bound and its
// tightness after weight minimization, the log-sum-exp variational principle,
// the KL marginal decomposition, and the EM / block-descent step equivalence.
// Each check owns a seeded generator, so a seed fixes every residual exactly.

namespace otmix {

struct CheckRecord {
    std::string name;
    int instances_run;
    double max_residual;
    double tolerance;
    bool passed;
};

inline CheckRecord make_record(std::string name, int instances, double residual,
                               double tolerance) {
    return CheckRecord{std::move(name), instances, residual, tolerance,
                       residual <= tolerance};
}

struct VerificationReport {
    std::uint64_t seed;
    int trials;
    std::vector<CheckRecord> checks;

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

struct TestInstance {
    GmmParams params;
    Dataset data;
};

// Full-support, well-conditioned random instances: means uniform in [-3,3]^d,
// covariance A A^T + 0.1 I with standard normal A, weights flat Dirichlet,
// data sampled from the drawn parameters.
inline TestInstance random_instance(std::uint64_t seed, int n_min, int n_max,
                                    int k_max, int d_max) {
    SeededRng rng(seed);
    const auto d = static_cast<Eigen::Index>(rng.uniform_int(1, d_max));
    const auto k = static_cast<Eigen::Index>(rng.uniform_int(1, k_max));
    const auto n = static_cast<Eigen::Index>(rng.uniform_int(n_min, n_max));

    Eigen::MatrixXd means(k, d);
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index c = 0; c < d; ++c) means(j, c) = rng.uniform(-3.0, 3.0);
    Eigen::MatrixXd a(d, d);
    for (Eigen::Index p = 0; p < d; ++p)
        for (Eigen::Index q = 0; q < d; ++q) a(p, q) = rng.normal();
    Eigen::MatrixXd sigma = a * a.transpose() +
                            0.1 * Eigen::MatrixXd::Identity(d, d);
    sigma = 0.5 * (sigma + sigma.transpose());
    GmmParams params(std::move(means), std::move(sigma),
                     ProbabilityVector(rng.dirichlet_flat(k)));
    Dataset data = sample_gmm(params, n, rng.next_u64());
    return TestInstance{std::move(params), std::move(data)};
}

inline TestInstance random_instance(std::uint64_t seed) {
    return random_instance(seed, 5, 50, 4, 3);
}

// Two balanced, moderately separated components with interior weights. Used
// where a check needs the weight-minimizing fixed point to sit inside the
// simplex and the alternation to converge fast (grid scans, tightness).
inline TestInstance balanced_k2_instance(std::uint64_t seed) {
    SeededRng rng(seed);
    const auto d = static_cast<Eigen::Index>(rng.uniform_int(1, 2));
    const double separation = rng.uniform(0.75, 2.0);
    Eigen::MatrixXd means(2, d);
    for (Eigen::Index j = 0; j < 2; ++j)
        for (Eigen::Index c = 0; c < d; ++c) means(j, c) = rng.uniform(-0.5, 0.5);
    means(0, 0) -= separation;
    means(1, 0) += separation;
    Eigen::MatrixXd a(d, d);
    for (Eigen::Index p = 0; p < d; ++p)
        for (Eigen::Index q = 0; q < d; ++q) a(p, q) = rng.normal();
    Eigen::MatrixXd sigma = 0.3 * (a * a.transpose()) +
                            0.5 * Eigen::MatrixXd::Identity(d, d);
    sigma = 0.5 * (sigma + sigma.transpose());
    const double p0 = rng.uniform(0.3, 0.7);
    Eigen::VectorXd pi(2);
    pi << p0, 1.0 - p0;
    const auto n = static_cast<Eigen::Index>(rng.uniform_int(20, 50));
    GmmParams params(std::move(means), std::move(sigma), ProbabilityVector(pi));
    Dataset data = sample_gmm(params, n, rng.next_u64());
    return TestInstance{std::move(params), std::move(data)};
}

namespace detail {

// Log-density matrix computed through the explicit inverse and determinant;
// deliberately a different route from the Cholesky cost-matrix path so the
// checks below compare genuinely independent evaluations.
inline Eigen::MatrixXd direct_log_density(const GmmParams& params, const Dataset& data) {
    const Eigen::MatrixXd sigma_inv = params.covariance().inverse();
    const double log_det = std::log(params.covariance().determinant());
    const auto d = static_cast<double>(params.dimension());
    Eigen::MatrixXd ld(data.size(), params.components());
    for (Eigen::Index i = 0; i < data.size(); ++i)
        for (Eigen::Index j = 0; j < params.components(); ++j) {
            const Eigen::VectorXd diff = data.point(i) - params.mean(j);
            ld(i, j) = -0.5 * (d * std::log(2.0 * M_PI) + log_det +
                               diff.dot(sigma_inv * diff));
        }
    return ld;
}

// Mean NLL at the given weights from a direct log-density matrix.
inline double direct_mean_nll(const Eigen::VectorXd& pi, const Eigen::MatrixXd& ld) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < ld.rows(); ++i) {
        const double shift = ld.row(i).maxCoeff();
        double sum = 0.0;
        for (Eigen::Index j = 0; j < ld.cols(); ++j)
            if (pi(j) > 0.0) sum += pi(j) * std::exp(ld(i, j) - shift);
        total -= shift + std::log(sum);
    }
    return total / static_cast<double>(ld.rows());
}

// Weight-only likelihood maximization by the posterior-mass fixed point,
// in the responsibilities formulation.
inline Eigen::VectorXd minimize_weights_direct(const Eigen::MatrixXd& ld,
                                               int max_iterations = 500,
                                               double tolerance = 1e-12) {
    const Eigen::Index n = ld.rows();
    const Eigen::Index k = ld.cols();
    Eigen::VectorXd pi = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
    for (int it = 0; it < max_iterations; ++it) {
        Eigen::VectorXd next = Eigen::VectorXd::Zero(k);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double shift = ld.row(i).maxCoeff();
            double denom = 0.0;
            Eigen::VectorXd row(k);
            for (Eigen::Index j = 0; j < k; ++j) {
                row(j) = pi(j) * std::exp(ld(i, j) - shift);
                denom += row(j);
            }
            next += row / denom;
        }
        next /= static_cast<double>(n);
        const double shift_l1 = (next - pi).cwiseAbs().sum();
        pi = next;
        if (shift_l1 < tolerance) break;
    }
    return pi;
}

// The variational objective evaluated directly, for grid oracles.
inline double variational_objective(const Eigen::VectorXd& pi, const Eigen::VectorXd& h,
                                    const Eigen::VectorXd& p) {
    double value = 0.0;
    for (Eigen::Index j = 0; j < p.size(); ++j) {
        value += h(j) * p(j);
        if (p(j) > 0.0) value -= p(j) * std::log(p(j) / pi(j));
    }
    return value;
}

}  // namespace detail

// |mean NLL - semi-relaxed transport value| on random instances.
inline std::vector<CheckRecord> check_identity_nll(std::uint64_t seed, int trials) {
    double max_residual = 0.0;
    for (int t = 0; t < trials; ++t) {
        const TestInstance inst = random_instance(seed + static_cast<std::uint64_t>(t));
        const CostMatrix C = cost_matrix(inst.params, inst.data);
        const double mean_nll = nll_from_cost(inst.params.weights(), C) /
                                static_cast<double>(inst.data.size());
        const double transport = semi_relaxed_solve(inst.params.weights(), C).value;
        max_residual = std::max(max_residual, std::abs(mean_nll - transport));
    }
    return {make_record("identity_nll", trials, max_residual, 1e-8)};
}

// Direction of the entropic bound, the Sinkhorn column-marginal residual, and
// tightness of the bound at the weight-minimizing fixed point.
inline std::vector<CheckRecord> check_upper_bound(std::uint64_t seed, int trials) {
    const SinkhornSettings settings{1.0, 10000, 1e-9};
    double max_violation = 0.0;
    double max_marginal_residual = 0.0;
    for (int t = 0; t < trials; ++t) {
        const TestInstance inst = random_instance(seed + static_cast<std::uint64_t>(t));
        const CostMatrix C = cost_matrix(inst.params, inst.data);
        const double mean_nll = nll_from_cost(inst.params.weights(), C) /
                                static_cast<double>(inst.data.size());
        const EotSolution sol = sinkhorn(ProbabilityVector::uniform(inst.data.size()),
                                         inst.params.weights(), C, settings);
        max_violation = std::max(max_violation, mean_nll - sol.value);
        const double marginal_residual =
            (sol.coupling.plan().colwise().sum().transpose() -
             inst.params.weights().weights())
                .cwiseAbs()
                .sum();
        max_marginal_residual = std::max(max_marginal_residual, marginal_residual);
    }

    const int tightness_trials = std::max(1, trials / 4);
    double max_gap = 0.0;
    for (int t = 0; t < tightness_trials; ++t) {
        const TestInstance inst =
            balanced_k2_instance(seed + 100000 + static_cast<std::uint64_t>(t));
        const CostMatrix C = cost_matrix(inst.params, inst.data);
        const auto [pi_hat, sol] = min_over_pi_semi_relaxed(C);
        if (!sol.converged) {
            max_gap = std::numeric_limits<double>::infinity();
            continue;
        }
        const double mean_nll = nll_from_cost(pi_hat, C) /
                                static_cast<double>(inst.data.size());
        const EotSolution full = sinkhorn(ProbabilityVector::uniform(inst.data.size()),
                                          pi_hat, C, settings);
        max_gap = std::max(max_gap, std::abs(full.value - mean_nll));
    }

    return {make_record("upper_bound_direction", trials, std::max(0.0, max_violation), 1e-7),
            make_record("upper_bound_marginal_residual", trials, max_marginal_residual, 1e-9),
            make_record("upper_bound_tightness", tightness_trials, max_gap, 1e-7)};
}

// Agreement of the two weight-minimized values (likelihood iteration vs
// transport alternation), plus a simplex grid scan for two components.
inline std::vector<CheckRecord> check_min_over_pi_equality(std::uint64_t seed, int trials) {
    double max_residual = 0.0;
    for (int t = 0; t < trials; ++t) {
        const TestInstance inst = random_instance(seed + static_cast<std::uint64_t>(t));
        const Eigen::MatrixXd ld = detail::direct_log_density(inst.params, inst.data);
        const Eigen::VectorXd pi_direct = detail::minimize_weights_direct(ld);
        const double lhs = detail::direct_mean_nll(pi_direct, ld);
        const CostMatrix C = cost_matrix(inst.params, inst.data);
        const auto [pi_hat, sol] = min_over_pi_semi_relaxed(C);
        max_residual = std::max(max_residual, std::abs(lhs - sol.value));
    }

    const int grid_trials = std::min(trials, 20);
    double max_grid_residual = 0.0;
    for (int t = 0; t < grid_trials; ++t) {
        const TestInstance inst =
            balanced_k2_instance(seed + 200000 + static_cast<std::uint64_t>(t));
        const Eigen::MatrixXd ld = detail::direct_log_density(inst.params, inst.data);
        double grid_min = std::numeric_limits<double>::infinity();
        Eigen::VectorXd pi(2);
        for (int g = 0; g <= 10000; ++g) {
            pi(0) = static_cast<double>(g) * 1e-4;
            pi(1) = 1.0 - pi(0);
            grid_min = std::min(grid_min, detail::direct_mean_nll(pi, ld));
        }
        const Eigen::VectorXd pi_direct = detail::minimize_weights_direct(ld);
        const double lhs = detail::direct_mean_nll(pi_direct, ld);
        const CostMatrix C = cost_matrix(inst.params, inst.data);
        const auto [pi_hat, sol] = min_over_pi_semi_relaxed(C);
        max_grid_residual = std::max(max_grid_residual,
                                     std::max(std::abs(lhs - grid_min),
                                              std::abs(sol.value - grid_min)));
    }

    return {make_record("min_over_pi_equality", trials, max_residual, 1e-7),
            make_record("min_over_pi_grid_k2", grid_trials, max_grid_residual, 1e-6)};
}

// Variational principle: the closed form dominates random simplex points and
// a fine grid, and attains the log-sum-exp value. Plus the three-term KL
// decomposition against direct evaluation.
inline std::vector<CheckRecord> check_variational_identities(std::uint64_t seed, int trials) {
    const int point_trials = std::min(trials, 100);
    double max_violation = 0.0;  // objective above the log-sum-exp value
    double max_value_gap = 0.0;  // objective at the optimum vs log-sum-exp
    for (int t = 0; t < point_trials; ++t) {
        SeededRng rng(seed + 300000 + static_cast<std::uint64_t>(t));
        const auto k = static_cast<Eigen::Index>(rng.uniform_int(1, 6));
        const ProbabilityVector pi(rng.dirichlet_flat(k));
        Eigen::VectorXd h(k);
        for (Eigen::Index j = 0; j < k; ++j) h(j) = rng.uniform(-5.0, 5.0);
        const double lse = weighted_logsumexp(pi, h);
        for (int s = 0; s < 1000; ++s) {
            const ProbabilityVector p(rng.dirichlet_flat(k));
            max_violation = std::max(max_violation, gibbs_objective(pi, h, p) - lse);
        }
        max_value_gap = std::max(
            max_value_gap, std::abs(gibbs_objective(pi, h, gibbs_optimum(pi, h)) - lse));
    }

    // Grid argmax: instances kept away from the simplex boundary so the value
    // gap of a 1e-3 grid stays well under the tolerance.
    const int grid2_trials = std::min(trials, 25);
    const int grid3_trials = std::min(trials, 8);
    double max_grid_gap = 0.0;
    for (int t = 0; t < grid2_trials; ++t) {
        SeededRng rng(seed + 400000 + static_cast<std::uint64_t>(t));
        Eigen::VectorXd pi(2);
        pi(0) = rng.uniform(0.35, 0.65);
        pi(1) = 1.0 - pi(0);
        Eigen::VectorXd h(2);
        for (Eigen::Index j = 0; j < 2; ++j) h(j) = rng.uniform(-0.3, 0.3);
        const double lse = weighted_logsumexp(ProbabilityVector(pi), h);
        double grid_max = -std::numeric_limits<double>::infinity();
        Eigen::VectorXd p(2);
        for (int g = 0; g <= 1000; ++g) {
            p(0) = static_cast<double>(g) * 1e-3;
            p(1) = 1.0 - p(0);
            grid_max = std::max(grid_max, detail::variational_objective(pi, h, p));
        }
        max_grid_gap = std::max(max_grid_gap, std::abs(lse - grid_max));
    }
    for (int t = 0; t < grid3_trials; ++t) {
        SeededRng rng(seed + 500000 + static_cast<std::uint64_t>(t));
        Eigen::VectorXd pi = 0.5 * rng.dirichlet_flat(3) +
                             0.5 * Eigen::VectorXd::Constant(3, 1.0 / 3.0);
        Eigen::VectorXd h(3);
        for (Eigen::Index j = 0; j < 3; ++j) h(j) = rng.uniform(-0.3, 0.3);
        const double lse = weighted_logsumexp(ProbabilityVector(pi), h);
        double grid_max = -std::numeric_limits<double>::infinity();
        Eigen::VectorXd p(3);
        for (int g1 = 0; g1 <= 1000; ++g1)
            for (int g2 = 0; g2 <= 1000 - g1; ++g2) {
                p(0) = static_cast<double>(g1) * 1e-3;
                p(1) = static_cast<double>(g2) * 1e-3;
                p(2) = 1.0 - p(0) - p(1);
                if (p(2) < 0.0) p(2) = 0.0;
                grid_max = std::max(grid_max, detail::variational_objective(pi, h, p));
            }
        max_grid_gap = std::max(max_grid_gap, std::abs(lse - grid_max));
    }

    double max_decomposition_residual = 0.0;
    for (int t = 0; t < trials; ++t) {
        SeededRng rng(seed + 600000 + static_cast<std::uint64_t>(t));
        const auto n = static_cast<Eigen::Index>(rng.uniform_int(2, 6));
        const auto k = static_cast<Eigen::Index>(rng.uniform_int(2, 5));
        Eigen::MatrixXd P(n, k);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < k; ++j) P(i, j) = rng.uniform(0.05, 1.0);
        Eigen::VectorXd a(n), b(k);
        for (Eigen::Index i = 0; i < n; ++i) a(i) = rng.uniform(0.05, 1.0);
        for (Eigen::Index j = 0; j < k; ++j) b(j) = rng.uniform(0.05, 1.0);
        const KlDecomposition split = kl_three_term_decomposition(P, a, b);
        const double direct = kl_matrix(P, a * b.transpose());
        max_decomposition_residual =
            std::max(max_decomposition_residual, std::abs(split.total() - direct));
    }

    return {make_record("gibbs_random_points", point_trials, std::max(0.0, max_violation), 1e-12),
            make_record("gibbs_optimum_value", point_trials, max_value_gap, 1e-10),
            make_record("gibbs_grid_argmax", grid2_trials + grid3_trials, max_grid_gap, 1e-6),
            make_record("kl_decomposition", trials, max_decomposition_residual, 1e-10)};
}

// Paired 20-sweep trajectories: block-descent sweeps vs the independently
// coded EM reference, compared per parameter entry and per NLL value.
inline std::vector<CheckRecord> check_em_equivalence(std::uint64_t seed, int trials) {
    double max_param_deviation = 0.0;
    double max_nll_deviation = 0.0;
    for (int t = 0; t < trials; ++t) {
        const TestInstance inst =
            random_instance(seed + static_cast<std::uint64_t>(t), 30, 100, 4, 3);
        SeededRng rng(seed + 700000 + static_cast<std::uint64_t>(t));
        FitSettings init_settings;
        init_settings.seed = rng.next_u64();
        const GmmParams start = detail::init_from_random_points(
            inst.data, static_cast<int>(inst.params.components()), init_settings);
        GmmParams bcd_state = start;
        GmmParams em_state = start;
        for (int sweep = 0; sweep < 20; ++sweep) {
            bcd_state = bcd_sweep(bcd_state, inst.data);
            em_state = reference_em_sweep(em_state, inst.data);
            const double dev = std::max(
                {(bcd_state.means() - em_state.means()).cwiseAbs().maxCoeff(),
                 (bcd_state.covariance() - em_state.covariance()).cwiseAbs().maxCoeff(),
                 (bcd_state.weights().weights() - em_state.weights().weights())
                     .cwiseAbs()
                     .maxCoeff()});
            max_param_deviation = std::max(max_param_deviation, dev);
            max_nll_deviation =
                std::max(max_nll_deviation,
                         std::abs(nll(bcd_state, inst.data) - nll(em_state, inst.data)));
        }
    }
    return {make_record("em_equivalence_params", trials, max_param_deviation, 1e-10),
            make_record("em_equivalence_nll", trials, max_nll_deviation, 1e-9)};
}

// Non-increasing NLL across the sweeps of full fits from random starts.
inline std::vector<CheckRecord> check_monotonicity(std::uint64_t seed, int trials) {
    double max_increase = 0.0;
    for (int t = 0; t < trials; ++t) {
        const TestInstance inst =
            random_instance(seed + static_cast<std::uint64_t>(t), 20, 100, 4, 3);
        SeededRng rng(seed + 800000 + static_cast<std::uint64_t>(t));
        FitSettings settings;
        settings.max_sweeps = 60;
        settings.seed = rng.next_u64();
        const FitReport report =
            fit(inst.data, static_cast<int>(inst.params.components()), settings);
        for (std::size_t s = 1; s < report.nll_trajectory.size(); ++s)
            max_increase = std::max(
                max_increase, report.nll_trajectory[s] - report.nll_trajectory[s - 1]);
    }
    return {make_record("fit_monotonicity", trials, std::max(0.0, max_increase), 1e-9)};
}

namespace detail {

// Scaled transport-cost objective whose stationary points are the mean and
// covariance updates: 0.5 sum_ij n P_ij (x_i-mu_j)^T Sigma^{-1} (x_i-mu_j)
// + (n/2) log det Sigma.
inline double mstep_objective(const Coupling& P, const Dataset& data,
                              const Eigen::MatrixXd& means, const Eigen::MatrixXd& sigma) {
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw NonPositiveDefiniteCovariance("perturbed covariance left the PD cone");
    const double log_det =
        2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const auto n = static_cast<double>(data.size());
    double quad = 0.0;
    for (Eigen::Index i = 0; i < data.size(); ++i)
        for (Eigen::Index j = 0; j < P.cols(); ++j) {
            const Eigen::VectorXd diff = data.point(i) - means.row(j).transpose();
            quad += P.plan()(i, j) * diff.dot(llt.solve(diff));
        }
    return 0.5 * n * quad + 0.5 * n * log_det;
}

}  // namespace detail

// Central finite differences of the quadratic + log-det objective vanish at
// the outputs of the mean and covariance updates, each within its own block.
inline std::vector<CheckRecord> check_mstep_stationarity(std::uint64_t seed, int trials) {
    const double step = 1e-5;
    double max_gradient = 0.0;
    for (int t = 0; t < trials; ++t) {
        const TestInstance inst =
            random_instance(seed + static_cast<std::uint64_t>(t), 10, 50, 4, 3);
        // States a fit would visit: component means sitting on data points
        // keep every posterior column alive.
        FitSettings init_settings;
        init_settings.seed = seed + 900000 + static_cast<std::uint64_t>(t);
        const GmmParams state = detail::init_from_random_points(
            inst.data, static_cast<int>(inst.params.components()), init_settings);
        const CostMatrix C = cost_matrix(state, inst.data);
        const Coupling P = update_plan(state, C);
        const Eigen::MatrixXd new_means = update_means(P, inst.data);
        const Eigen::MatrixXd new_sigma =
            update_covariance(P, inst.data, state.means()).covariance;
        const Eigen::Index d = inst.data.dimension();

        // Mean block at the new means (gradient is Sigma-independent).
        for (Eigen::Index j = 0; j < P.cols(); ++j)
            for (Eigen::Index c = 0; c < d; ++c) {
                Eigen::MatrixXd up = new_means, down = new_means;
                up(j, c) += step;
                down(j, c) -= step;
                const double g = (detail::mstep_objective(P, inst.data, up, new_sigma) -
                                  detail::mstep_objective(P, inst.data, down, new_sigma)) /
                                 (2.0 * step);
                max_gradient = std::max(max_gradient, std::abs(g));
            }

        // Covariance block at the pre-sweep means it was fit against,
        // over symmetric perturbations.
        for (Eigen::Index p = 0; p < d; ++p)
            for (Eigen::Index q = p; q < d; ++q) {
                Eigen::MatrixXd e = Eigen::MatrixXd::Zero(d, d);
                e(p, q) += 1.0;
                e(q, p) += 1.0;
                if (p == q) e(p, q) = 1.0;
                const double g =
                    (detail::mstep_objective(P, inst.data, state.means(),
                                             new_sigma + step * e) -
                     detail::mstep_objective(P, inst.data, state.means(),
                                             new_sigma - step * e)) /
                    (2.0 * step);
                max_gradient = std::max(max_gradient, std::abs(g));
            }
    }
    return {make_record("mstep_stationarity", trials, max_gradient, 1e-4)};
}

// Runs the whole suite; records are assembled keyed by name.
inline VerificationReport run_verification(std::uint64_t seed, int trials) {
    if (trials < 1) throw std::invalid_argument("verification needs at least one trial");
    VerificationReport report{seed, trials, {}};
    auto append = [&report](std::vector<CheckRecord> records) {
        for (auto& r : records) report.checks.push_back(std::move(r));
    };
    append(check_identity_nll(seed, trials));
    append(check_upper_bound(seed, trials));
    append(check_min_over_pi_equality(seed, trials));
    append(check_variational_identities(seed, trials));
    append(check_em_equivalence(seed, trials));
    append(check_monotonicity(seed, trials));
    append(check_mstep_stationarity(seed, trials));
    std::sort(report.checks.begin(), report.checks.end(),
              [](const CheckRecord& x, const CheckRecord& y) { return x.name < y.name; });
    return report;
}

}  // namespace otmix
