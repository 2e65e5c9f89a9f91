#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "otmix/eot.hpp"
#include "otmix/errors.hpp"
#include "otmix/gmm.hpp"
#include "otmix/random.hpp"
#include "otmix/types.hpp"

// Block-coordinate descent for shared-covariance Gaussian mixtures on the
// entropic transport objective, sweeping plan -> weights -> covariance ->
// means, plus an independently coded one-sweep EM reference used as a
// cross-check oracle.

namespace otmix {

enum class InitStrategy { RandomPoints, Provided };

struct FitSettings {
    int max_sweeps = 500;
    double nll_tolerance = 1e-8;      // absolute NLL decrease per sweep, nats
    double covariance_floor = 0.0;    // eigenvalue lower bound; 0 = fail loudly
    InitStrategy init_strategy = InitStrategy::RandomPoints;
    std::uint64_t seed = 0;
};

enum class TerminationReason { Tolerance, MaxSweeps, Degenerate };

struct FitReport {
    GmmParams final_params;
    std::vector<double> nll_trajectory;        // one entry per sweep
    std::vector<double> eot_value_trajectory;  // joint objective after each sweep
    int sweeps_used;
    bool converged;
    TerminationReason termination_reason;
};

inline const char* to_string(TerminationReason reason) {
    switch (reason) {
        case TerminationReason::Tolerance: return "tolerance";
        case TerminationReason::MaxSweeps: return "max_sweeps";
        case TerminationReason::Degenerate: return "degenerate";
    }
    return "unknown";
}

// Column masses below this are treated as empty components.
inline constexpr double kComponentMassFloor = 1e-12;

// Plan update: row i is the Gibbs optimum for exponents -C_i scaled by 1/n.
// This is the E step: rows of n*P are the posterior responsibilities.
inline Coupling update_plan(const GmmParams& params, const CostMatrix& C) {
    if (params.components() != C.cols())
        throw ShapeMismatch("component count does not match cost matrix columns");
    const Eigen::Index n = C.rows();
    Eigen::MatrixXd plan(n, C.cols());
    const double inv_n = 1.0 / static_cast<double>(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const ProbabilityVector row =
            gibbs_optimum(params.weights(), -C.costs().row(i).transpose());
        plan.row(i) = inv_n * row.weights().transpose();
    }
    return Coupling(std::move(plan), ProbabilityVector::uniform(n));
}

// Weight update: the plan's column marginal, which zeroes KL(P^T 1_n | pi).
inline ProbabilityVector update_weights(const Coupling& P) {
    return column_marginal(P);
}

// Mean update: mass-weighted averages of the data, one row per component.
inline Eigen::MatrixXd update_means(const Coupling& P, const Dataset& data) {
    if (P.rows() != data.size())
        throw ShapeMismatch("plan rows do not match data size");
    const Eigen::Index k = P.cols();
    Eigen::MatrixXd means(k, data.dimension());
    for (Eigen::Index j = 0; j < k; ++j) {
        const double mass = P.plan().col(j).sum();
        if (mass < kComponentMassFloor)
            throw EmptyComponent("component " + std::to_string(j + 1) +
                                 " has column mass " + std::to_string(mass));
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(data.dimension());
        for (Eigen::Index i = 0; i < data.size(); ++i)
            acc += P.plan()(i, j) * data.point(i);
        means.row(j) = (acc / mass).transpose();
    }
    return means;
}

struct CovarianceUpdate {
    Eigen::MatrixXd covariance;
    bool floored;  // an eigenvalue was clamped up to the floor
};

// Covariance update: the plan-weighted scatter about the given means. With
// total plan mass one this is the exact stationary point of the quadratic
// plus log-det objective. A positive floor clamps eigenvalues from below.
inline CovarianceUpdate update_covariance(const Coupling& P, const Dataset& data,
                                          const Eigen::MatrixXd& means,
                                          double covariance_floor = 0.0) {
    if (P.rows() != data.size())
        throw ShapeMismatch("plan rows do not match data size");
    if (means.rows() != P.cols() || means.cols() != data.dimension())
        throw DimensionMismatch("means shape does not match plan/data");
    const Eigen::Index d = data.dimension();
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < data.size(); ++i)
        for (Eigen::Index j = 0; j < P.cols(); ++j) {
            const Eigen::VectorXd centered =
                data.point(i) - means.row(j).transpose();
            sigma += P.plan()(i, j) * (centered * centered.transpose());
        }
    bool floored = false;
    if (covariance_floor > 0.0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
        Eigen::VectorXd values = eig.eigenvalues();
        for (Eigen::Index p = 0; p < d; ++p)
            if (values(p) < covariance_floor) {
                values(p) = covariance_floor;
                floored = true;
            }
        if (floored) {
            sigma = eig.eigenvectors() * values.asDiagonal() *
                    eig.eigenvectors().transpose();
            sigma = 0.5 * (sigma + sigma.transpose());
        }
    }
    return CovarianceUpdate{std::move(sigma), floored};
}

namespace detail {

struct SweepResult {
    GmmParams params;
    Coupling plan;
    bool floored;
};

// One full sweep in the fixed order plan -> weights -> covariance -> means.
// The covariance is refit about the pre-sweep means; the means move last.
inline SweepResult bcd_sweep_impl(const GmmParams& params, const Dataset& data,
                                  const CostMatrix& C, double covariance_floor) {
    Coupling plan = update_plan(params, C);
    ProbabilityVector weights = update_weights(plan);
    CovarianceUpdate cov = update_covariance(plan, data, params.means(), covariance_floor);
    Eigen::MatrixXd means = update_means(plan, data);
    return SweepResult{
        GmmParams(std::move(means), std::move(cov.covariance), std::move(weights)),
        std::move(plan), cov.floored};
}

inline Eigen::MatrixXd floor_eigenvalues(const Eigen::MatrixXd& sigma, double floor) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
    Eigen::VectorXd values = eig.eigenvalues().cwiseMax(floor);
    Eigen::MatrixXd out =
        eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
    return 0.5 * (out + out.transpose());
}

inline GmmParams init_from_random_points(const Dataset& data, int k,
                                         const FitSettings& settings) {
    SeededRng rng(settings.seed);
    std::vector<Eigen::Index> chosen;
    while (static_cast<int>(chosen.size()) < k) {
        const Eigen::Index idx =
            static_cast<Eigen::Index>(rng.uniform_int(0, data.size() - 1));
        bool seen = false;
        for (Eigen::Index c : chosen) seen = seen || (c == idx);
        if (!seen) chosen.push_back(idx);
    }
    Eigen::MatrixXd means(k, data.dimension());
    for (int j = 0; j < k; ++j) means.row(j) = data.points().row(chosen[j]);

    const Eigen::RowVectorXd center = data.points().colwise().mean();
    const Eigen::MatrixXd centered = data.points().rowwise() - center;
    Eigen::MatrixXd sigma = (centered.transpose() * centered) /
                            static_cast<double>(data.size());
    sigma = 0.5 * (sigma + sigma.transpose());
    if (settings.covariance_floor > 0.0)
        sigma = floor_eigenvalues(sigma, settings.covariance_floor);
    return GmmParams(std::move(means), std::move(sigma),
                     ProbabilityVector::uniform(k));
}

}  // namespace detail

// One block-coordinate sweep from the given state.
inline GmmParams bcd_sweep(const GmmParams& params, const Dataset& data,
                           double covariance_floor = 0.0) {
    const CostMatrix C = cost_matrix(params, data);
    return detail::bcd_sweep_impl(params, data, C, covariance_floor).params;
}

// Full fit: sweeps until the per-sweep NLL decrease drops below
// `nll_tolerance`, `max_sweeps` is reached, or the covariance floor fires.
inline FitReport fit(const Dataset& data, int k, const FitSettings& settings = {},
                     const std::optional<GmmParams>& init = std::nullopt) {
    if (k < 1) throw std::invalid_argument("fit: k must be at least 1");
    if (data.size() < k)
        throw std::invalid_argument("fit: need at least k data points");
    if (settings.max_sweeps < 1)
        throw std::invalid_argument("fit: max_sweeps must be at least 1");
    if (settings.nll_tolerance <= 0.0)
        throw std::invalid_argument("fit: nll_tolerance must be positive");

    GmmParams params = [&]() {
        if (settings.init_strategy == InitStrategy::Provided || init) {
            if (!init)
                throw std::invalid_argument("fit: init strategy 'provided' needs parameters");
            if (init->components() != k || init->dimension() != data.dimension())
                throw DimensionMismatch("fit: provided init has wrong shape");
            return *init;
        }
        return detail::init_from_random_points(data, k, settings);
    }();

    std::vector<double> nll_trajectory;
    std::vector<double> eot_trajectory;
    double previous_nll = nll(params, data);
    bool converged = false;
    TerminationReason reason = TerminationReason::MaxSweeps;
    int sweeps = 0;

    CostMatrix C = cost_matrix(params, data);
    while (sweeps < settings.max_sweeps) {
        ++sweeps;
        detail::SweepResult step = [&]() {
            try {
                return detail::bcd_sweep_impl(params, data, C, settings.covariance_floor);
            } catch (const EmptyComponent& e) {
                throw EmptyComponent(std::string(e.what()) + " (sweep " +
                                     std::to_string(sweeps) + ")");
            }
        }();
        params = std::move(step.params);
        C = cost_matrix(params, data);

        const double current_nll = nll_from_cost(params.weights(), C);
        nll_trajectory.push_back(current_nll);
        // Joint objective at the sweep's plan and post-sweep parameters.
        const ProbabilityVector uniform_rows = ProbabilityVector::uniform(data.size());
        eot_trajectory.push_back(
            eot_objective(step.plan, C, uniform_rows, params.weights(), 1.0));

        if (step.floored) {
            reason = TerminationReason::Degenerate;
            break;
        }
        if (previous_nll - current_nll < settings.nll_tolerance) {
            converged = true;
            reason = TerminationReason::Tolerance;
            break;
        }
        previous_nll = current_nll;
    }

    return FitReport{std::move(params), std::move(nll_trajectory),
                     std::move(eot_trajectory), sweeps, converged, reason};
}

// One EM sweep in the responsibilities formulation, coded independently of
// the coupling machinery (explicit inverse and determinant, direct posterior
// ratios) in the same block order: weights, covariance about the old means,
// then means.
inline GmmParams reference_em_sweep(const GmmParams& params, const Dataset& data) {
    if (params.dimension() != data.dimension())
        throw DimensionMismatch("parameter dimension does not match data dimension");
    const Eigen::Index n = data.size();
    const Eigen::Index k = params.components();
    const Eigen::Index d = params.dimension();

    const Eigen::MatrixXd sigma_inv = params.covariance().inverse();
    const double log_det = std::log(params.covariance().determinant());
    if (!std::isfinite(log_det) || !sigma_inv.allFinite())
        throw NonPositiveDefiniteCovariance("covariance is numerically singular");

    Eigen::MatrixXd log_density(n, k);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < k; ++j) {
            const Eigen::VectorXd diff = data.point(i) - params.mean(j);
            log_density(i, j) =
                -0.5 * (static_cast<double>(d) * std::log(2.0 * M_PI) + log_det +
                        diff.dot(sigma_inv * diff));
        }

    Eigen::MatrixXd resp(n, k);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double shift = log_density.row(i).maxCoeff();
        double denom = 0.0;
        for (Eigen::Index j = 0; j < k; ++j) {
            resp(i, j) = params.weights()[j] * std::exp(log_density(i, j) - shift);
            denom += resp(i, j);
        }
        resp.row(i) /= denom;
    }

    Eigen::VectorXd weights(k);
    for (Eigen::Index j = 0; j < k; ++j)
        weights(j) = resp.col(j).sum() / static_cast<double>(n);

    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < k; ++j) {
            const Eigen::VectorXd diff = data.point(i) - params.mean(j);
            sigma += resp(i, j) * (diff * diff.transpose());
        }
    sigma /= static_cast<double>(n);

    Eigen::MatrixXd means(k, d);
    for (Eigen::Index j = 0; j < k; ++j) {
        const double mass = resp.col(j).sum();
        if (mass < kComponentMassFloor * static_cast<double>(n))
            throw EmptyComponent("component " + std::to_string(j + 1) +
                                 " has vanishing responsibility mass");
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
        for (Eigen::Index i = 0; i < n; ++i) acc += resp(i, j) * data.point(i);
        means.row(j) = (acc / mass).transpose();
    }

    return GmmParams(std::move(means), std::move(sigma), ProbabilityVector(weights));
}

}  // namespace otmix
