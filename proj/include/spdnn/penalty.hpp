#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace spdnn {

/// Clipped-L1 penalty J(h) = lambda * ||theta(h)||_{clip, tau}.
/// lambda == 0 gives the unpenalized objective.
struct PenaltyConfig {
    double lambda = 0.0;
    double tau = 1.0;

    /// Throws ArgumentError unless tau > 0 and lambda >= 0.
    void validate() const;
};

/// Magnitudes below this are treated as zero when counting nonzeros.
inline constexpr double kZeroSnap = 1e-12;

/// sum_j min(|theta_j| / tau, 1). Throws ArgumentError if tau <= 0.
double clipped_norm(const Eigen::Ref<const Eigen::VectorXd>& theta, double tau);

/// A subgradient of clipped_norm: sign(theta_j)/tau on 0 < |theta_j| <= tau,
/// zero at theta_j == 0 and on the flat region |theta_j| > tau.
Eigen::VectorXd clipped_norm_subgrad(const Eigen::Ref<const Eigen::VectorXd>& theta, double tau);

/// Accumulates scale * clipped_norm_subgrad(theta, tau) into out.
void add_clipped_norm_subgrad(const Eigen::Ref<const Eigen::VectorXd>& theta, double tau, double scale,
                              Eigen::Ref<Eigen::VectorXd> out);

double penalty_value(const Eigen::Ref<const Eigen::VectorXd>& theta, const PenaltyConfig& cfg);

std::size_t l0_norm(const Eigen::Ref<const Eigen::VectorXd>& theta);
double l1_norm(const Eigen::Ref<const Eigen::VectorXd>& theta);
double linf_norm(const Eigen::Ref<const Eigen::VectorXd>& theta);

}  // namespace spdnn
