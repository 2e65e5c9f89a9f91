#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "otmix/errors.hpp"

namespace otmix {

// Seeded random source with explicit output transforms. All draws are derived
// from mt19937_64 bits through documented arithmetic, so a given seed yields
// the same stream on every standard-conforming platform (std::*_distribution
// would not guarantee that).
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1): 53 top bits scaled.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform in (0, 1), safe as a log argument.
    double uniform_positive() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; the second value of each pair is cached.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_positive()));
        const double theta = 2.0 * M_PI * uniform();
        cached_ = r * std::sin(theta);
        has_cached_ = true;
        return r * std::cos(theta);
    }

    Eigen::VectorXd normal_vector(Eigen::Index d) {
        Eigen::VectorXd z(d);
        for (Eigen::Index i = 0; i < d; ++i) z(i) = normal();
        return z;
    }

    // Index in [0, weights.size()) drawn proportionally to nonnegative weights
    // summing to one; inverse-CDF walk, last index absorbs rounding slack.
    Eigen::Index categorical(const Eigen::VectorXd& weights) {
        if (weights.size() == 0) throw EmptyInput("categorical: empty weight vector");
        const double u = uniform();
        double cum = 0.0;
        for (Eigen::Index j = 0; j < weights.size(); ++j) {
            cum += weights(j);
            if (u < cum) return j;
        }
        return weights.size() - 1;
    }

    // Flat Dirichlet on the k-simplex: normalized unit exponentials.
    Eigen::VectorXd dirichlet_flat(Eigen::Index k) {
        Eigen::VectorXd e(k);
        for (Eigen::Index j = 0; j < k; ++j) e(j) = -std::log(uniform_positive());
        return e / e.sum();
    }

    // Uniform integer in [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

  private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace otmix
