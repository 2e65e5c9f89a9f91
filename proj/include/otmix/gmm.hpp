#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "otmix/divergences.hpp"
#include "otmix/errors.hpp"
#include "otmix/random.hpp"
#include "otmix/types.hpp"

// Shared-covariance Gaussian mixture: log-density evaluation through a
// Cholesky cache, cost-matrix construction, negative log-likelihood, and
// seeded sampling of labeled synthetic data.

namespace otmix {

// Cholesky factor and log-determinant of a covariance, reused across the
// whole dataset. Refuses non-positive-definite input instead of jittering it.
class GmmLogDensityCache {
  public:
    explicit GmmLogDensityCache(const Eigen::MatrixXd& covariance) {
        if (covariance.rows() != covariance.cols())
            throw DimensionMismatch("covariance must be square");
        Eigen::LLT<Eigen::MatrixXd> llt(covariance);
        if (llt.info() != Eigen::Success)
            throw NonPositiveDefiniteCovariance("covariance failed Cholesky factorization");
        cholesky_ = llt.matrixL();
        if (!((cholesky_.diagonal().array() > 0.0).all()) || !cholesky_.allFinite())
            throw NonPositiveDefiniteCovariance("covariance is not positive definite");
        log_det_ = 2.0 * cholesky_.diagonal().array().log().sum();
    }

    const Eigen::MatrixXd& cholesky_factor() const { return cholesky_; }
    double log_det_sigma() const { return log_det_; }
    Eigen::Index dimension() const { return cholesky_.rows(); }

  private:
    Eigen::MatrixXd cholesky_;
    double log_det_;
};

// log N(x; mu, Sigma) via triangular solve against the cached factor.
inline double gmm_log_pdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mu,
                          const GmmLogDensityCache& cache) {
    const Eigen::Index d = cache.dimension();
    if (x.size() != d || mu.size() != d)
        throw DimensionMismatch("point/mean dimension does not match covariance");
    const Eigen::VectorXd z =
        cache.cholesky_factor().triangularView<Eigen::Lower>().solve(x - mu);
    return -0.5 * (static_cast<double>(d) * std::log(2.0 * M_PI) +
                   cache.log_det_sigma() + z.squaredNorm());
}

// C_ij = -log N(x_i; mu_j, Sigma). Finite for every point since the Gaussian
// density is everywhere positive.
inline CostMatrix cost_matrix(const GmmParams& params, const Dataset& data) {
    if (params.dimension() != data.dimension())
        throw DimensionMismatch("parameter dimension does not match data dimension");
    const GmmLogDensityCache cache(params.covariance());
    Eigen::MatrixXd costs(data.size(), params.components());
    for (Eigen::Index i = 0; i < data.size(); ++i)
        for (Eigen::Index j = 0; j < params.components(); ++j)
            costs(i, j) = -gmm_log_pdf(data.point(i), params.mean(j), cache);
    return CostMatrix(std::move(costs));
}

// NLL given a precomputed cost matrix: -sum_i log sum_j pi_j exp(-C_ij).
// Zero-weight components are excluded from the inner sum rather than
// contributing -infinity terms.
inline double nll_from_cost(const ProbabilityVector& pi, const CostMatrix& C) {
    if (pi.size() != C.cols())
        throw ShapeMismatch("weight count does not match cost matrix columns");
    std::vector<Eigen::Index> active;
    for (Eigen::Index j = 0; j < pi.size(); ++j)
        if (pi[j] > 0.0) active.push_back(j);
    Eigen::VectorXd pi_active(static_cast<Eigen::Index>(active.size()));
    for (Eigen::Index k = 0; k < pi_active.size(); ++k) pi_active(k) = pi[active[k]];
    const ProbabilityVector pi_sub(pi_active);

    double total = 0.0;
    Eigen::VectorXd h(pi_active.size());
    for (Eigen::Index i = 0; i < C.rows(); ++i) {
        for (Eigen::Index k = 0; k < pi_active.size(); ++k)
            h(k) = -C.costs()(i, active[k]);
        total -= weighted_logsumexp(pi_sub, h);
    }
    return total;
}

// Negative log-likelihood of the data under the mixture, in nats.
inline double nll(const GmmParams& params, const Dataset& data) {
    return nll_from_cost(params.weights(), cost_matrix(params, data));
}

// Draws n labeled points: label j with probability pi_j, then x ~ N(mu_j,
// Sigma). One sequential generator stream, so a seed fixes the dataset.
inline Dataset sample_gmm(const GmmParams& params, Eigen::Index n, std::uint64_t seed) {
    if (n < 1) throw EmptyInput("sample_gmm: n must be at least 1");
    const GmmLogDensityCache cache(params.covariance());
    SeededRng rng(seed);
    Eigen::MatrixXd points(n, params.dimension());
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index j = rng.categorical(params.weights().weights());
        labels[static_cast<std::size_t>(i)] = static_cast<int>(j) + 1;
        const Eigen::VectorXd z = rng.normal_vector(params.dimension());
        points.row(i) =
            (params.mean(j) + cache.cholesky_factor() * z).transpose();
    }
    return Dataset(std::move(points), std::move(labels));
}

}  // namespace otmix
