#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "otmix/errors.hpp"

namespace otmix {

namespace detail {

// Entries in [-clamp_floor, 0) are rounded up to zero; exact zeros stay put.
// Sinkhorn-style exponentials never go negative but downstream arithmetic can
// shave a few ulps below zero.
inline constexpr double kNegativeClampFloor = 1e-12;

inline bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

}  // namespace detail

// A point of the probability simplex: nonnegative entries summing to one.
// Construction clamps negative dust, validates within `tolerance`, and
// renormalizes so the stored weights sum to one at machine precision.
class ProbabilityVector {
  public:
    static constexpr double kDefaultTolerance = 1e-10;

    explicit ProbabilityVector(Eigen::VectorXd weights,
                               double tolerance = kDefaultTolerance)
        : weights_(std::move(weights)) {
        if (weights_.size() == 0) throw EmptyInput("probability vector is empty");
        if (!weights_.allFinite())
            throw NotASimplexPoint("probability vector has non-finite entries");
        for (Eigen::Index j = 0; j < weights_.size(); ++j) {
            if (weights_(j) < -tolerance)
                throw NotASimplexPoint("entry " + std::to_string(j) + " is " +
                                       std::to_string(weights_(j)) +
                                       ", below -tolerance");
            if (weights_(j) < 0.0) weights_(j) = 0.0;
        }
        const double sum = weights_.sum();
        if (std::abs(sum - 1.0) > tolerance)
            throw NotASimplexPoint("entries sum to " + std::to_string(sum) +
                                   ", not 1 within tolerance");
        weights_ /= sum;
    }

    static ProbabilityVector uniform(Eigen::Index m) {
        return ProbabilityVector(Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m)));
    }

    const Eigen::VectorXd& weights() const { return weights_; }
    Eigen::Index size() const { return weights_.size(); }
    double operator[](Eigen::Index j) const { return weights_(j); }

    bool strictly_positive() const { return (weights_.array() > 0.0).all(); }

  private:
    Eigen::VectorXd weights_;
};

// Validates a raw vector as a simplex point under an explicit tolerance.
inline ProbabilityVector validate_simplex(const Eigen::VectorXd& v, double tol) {
    return ProbabilityVector(v, tol);
}

// Transport plan with a prescribed row marginal and, optionally, a prescribed
// column marginal. Without a column marginal this is a semi-relaxed plan; the
// column sums are whatever they are. Total mass must be one either way.
class Coupling {
  public:
    static constexpr double kDefaultTolerance = 1e-10;

    Coupling(Eigen::MatrixXd plan, ProbabilityVector row_marginal,
             std::optional<ProbabilityVector> column_marginal = std::nullopt,
             double tolerance = kDefaultTolerance)
        : plan_(std::move(plan)),
          row_target_(std::move(row_marginal)),
          column_target_(std::move(column_marginal)) {
        if (plan_.rows() == 0 || plan_.cols() == 0)
            throw EmptyInput("coupling has no entries");
        if (!plan_.allFinite()) throw NotACoupling("coupling has non-finite entries");
        if (row_target_.size() != plan_.rows())
            throw ShapeMismatch("row marginal length does not match plan rows");
        if (column_target_ && column_target_->size() != plan_.cols())
            throw ShapeMismatch("column marginal length does not match plan columns");
        for (Eigen::Index i = 0; i < plan_.rows(); ++i)
            for (Eigen::Index j = 0; j < plan_.cols(); ++j) {
                if (plan_(i, j) < -detail::kNegativeClampFloor)
                    throw NotACoupling("negative entry at (" + std::to_string(i) +
                                       "," + std::to_string(j) + ")");
                if (plan_(i, j) < 0.0) plan_(i, j) = 0.0;
            }
        const Eigen::VectorXd row_sums = plan_.rowwise().sum();
        for (Eigen::Index i = 0; i < plan_.rows(); ++i)
            if (std::abs(row_sums(i) - row_target_[i]) > tolerance)
                throw NotACoupling("row " + std::to_string(i) +
                                   " sum deviates from its marginal");
        if (column_target_) {
            const Eigen::VectorXd col_sums = plan_.colwise().sum();
            for (Eigen::Index j = 0; j < plan_.cols(); ++j)
                if (std::abs(col_sums(j) - (*column_target_)[j]) > tolerance)
                    throw NotACoupling("column " + std::to_string(j) +
                                       " sum deviates from its marginal");
        }
        if (std::abs(plan_.sum() - 1.0) > tolerance)
            throw NotACoupling("total mass is not 1");
    }

    const Eigen::MatrixXd& plan() const { return plan_; }
    Eigen::Index rows() const { return plan_.rows(); }
    Eigen::Index cols() const { return plan_.cols(); }
    const ProbabilityVector& row_target() const { return row_target_; }
    const std::optional<ProbabilityVector>& column_target() const { return column_target_; }

  private:
    Eigen::MatrixXd plan_;
    ProbabilityVector row_target_;
    std::optional<ProbabilityVector> column_target_;
};

// Row sums P 1_K of a coupling.
inline ProbabilityVector row_marginal(const Coupling& P) {
    return ProbabilityVector(P.plan().rowwise().sum());
}

// Column sums P^T 1_n of a coupling.
inline ProbabilityVector column_marginal(const Coupling& P) {
    return ProbabilityVector(P.plan().colwise().sum().transpose());
}

// Matrix of per-point, per-component negative log-densities, in nats.
class CostMatrix {
  public:
    explicit CostMatrix(Eigen::MatrixXd costs) : costs_(std::move(costs)) {
        if (costs_.rows() == 0 || costs_.cols() == 0)
            throw EmptyInput("cost matrix has no entries");
        if (!costs_.allFinite())
            throw NonFiniteCost("cost matrix has non-finite entries");
    }

    const Eigen::MatrixXd& costs() const { return costs_; }
    Eigen::Index rows() const { return costs_.rows(); }
    Eigen::Index cols() const { return costs_.cols(); }

  private:
    Eigen::MatrixXd costs_;
};

// Shared-covariance Gaussian mixture parameters: K mean vectors (rows of
// `means`), one symmetric positive-definite covariance, and mixture weights.
class GmmParams {
  public:
    static constexpr double kSymmetryTolerance = 1e-12;

    GmmParams(Eigen::MatrixXd means, Eigen::MatrixXd covariance,
              ProbabilityVector weights)
        : means_(std::move(means)),
          covariance_(std::move(covariance)),
          weights_(std::move(weights)) {
        if (means_.rows() == 0 || means_.cols() == 0)
            throw EmptyInput("means matrix has no entries");
        if (!means_.allFinite())
            throw InvariantViolation("means have non-finite entries");
        if (weights_.size() != means_.rows())
            throw ShapeMismatch("weight count does not match component count");
        const Eigen::Index d = means_.cols();
        if (covariance_.rows() != d || covariance_.cols() != d)
            throw DimensionMismatch("covariance shape does not match mean dimension");
        if (!covariance_.allFinite())
            throw NonPositiveDefiniteCovariance("covariance has non-finite entries");
        if ((covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff() >
            kSymmetryTolerance)
            throw InvariantViolation("covariance is not symmetric");
        Eigen::LLT<Eigen::MatrixXd> llt(covariance_);
        if (llt.info() != Eigen::Success ||
            !(llt.matrixL().toDenseMatrix().diagonal().array() > 0.0).all())
            throw NonPositiveDefiniteCovariance("covariance is not positive definite");
    }

    const Eigen::MatrixXd& means() const { return means_; }
    const Eigen::MatrixXd& covariance() const { return covariance_; }
    const ProbabilityVector& weights() const { return weights_; }
    Eigen::Index components() const { return means_.rows(); }
    Eigen::Index dimension() const { return means_.cols(); }
    Eigen::VectorXd mean(Eigen::Index j) const { return means_.row(j).transpose(); }

  private:
    Eigen::MatrixXd means_;
    Eigen::MatrixXd covariance_;
    ProbabilityVector weights_;
};

// Observed points (rows), with optional 1-based class labels for synthetic
// data where the latent assignment is known.
class Dataset {
  public:
    explicit Dataset(Eigen::MatrixXd points,
                     std::optional<std::vector<int>> labels = std::nullopt)
        : points_(std::move(points)), labels_(std::move(labels)) {
        if (points_.rows() < 1) throw EmptyInput("dataset has no points");
        if (points_.cols() < 1) throw EmptyInput("dataset has zero dimension");
        if (!points_.allFinite())
            throw InvariantViolation("dataset has non-finite entries");
        if (labels_) {
            if (static_cast<Eigen::Index>(labels_->size()) != points_.rows())
                throw ShapeMismatch("label count does not match point count");
            for (int label : *labels_)
                if (label < 1)
                    throw InvariantViolation("labels must be 1-based positive integers");
        }
    }

    const Eigen::MatrixXd& points() const { return points_; }
    Eigen::Index size() const { return points_.rows(); }
    Eigen::Index dimension() const { return points_.cols(); }
    const std::optional<std::vector<int>>& labels() const { return labels_; }
    Eigen::VectorXd point(Eigen::Index i) const { return points_.row(i).transpose(); }

  private:
    Eigen::MatrixXd points_;
    std::optional<std::vector<int>> labels_;
};

}  // namespace otmix
