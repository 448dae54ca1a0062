#include "spdnn/penalty.hpp"

#include <algorithm>
#include <cmath>

#include "spdnn/errors.hpp"

namespace spdnn {

void PenaltyConfig::validate() const {
    if (!(tau > 0.0)) throw ArgumentError("penalty: tau must be > 0");
    if (!(lambda >= 0.0)) throw ArgumentError("penalty: lambda must be >= 0");
}

double clipped_norm(const Eigen::Ref<const Eigen::VectorXd>& theta, double tau) {
    if (!(tau > 0.0)) throw ArgumentError("clipped_norm: tau must be > 0");
    double sum = 0.0;
    for (Eigen::Index j = 0; j < theta.size(); ++j) sum += std::min(std::abs(theta[j]) / tau, 1.0);
    return sum;
}

void add_clipped_norm_subgrad(const Eigen::Ref<const Eigen::VectorXd>& theta, double tau, double scale,
                              Eigen::Ref<Eigen::VectorXd> out) {
    const double step = scale / tau;
    const auto a = theta.array().abs();
    out.array() += (a > 0.0 && a <= tau).select(theta.array().sign() * step, 0.0);
}

Eigen::VectorXd clipped_norm_subgrad(const Eigen::Ref<const Eigen::VectorXd>& theta, double tau) {
    if (!(tau > 0.0)) throw ArgumentError("clipped_norm_subgrad: tau must be > 0");
    Eigen::VectorXd g = Eigen::VectorXd::Zero(theta.size());
    add_clipped_norm_subgrad(theta, tau, 1.0, g);
    return g;
}

double penalty_value(const Eigen::Ref<const Eigen::VectorXd>& theta, const PenaltyConfig& cfg) {
    cfg.validate();
    if (cfg.lambda == 0.0) return 0.0;
    return cfg.lambda * clipped_norm(theta, cfg.tau);
}

std::size_t l0_norm(const Eigen::Ref<const Eigen::VectorXd>& theta) {
    std::size_t count = 0;
    for (Eigen::Index j = 0; j < theta.size(); ++j) count += std::abs(theta[j]) >= kZeroSnap ? 1 : 0;
    return count;
}

double l1_norm(const Eigen::Ref<const Eigen::VectorXd>& theta) { return theta.cwiseAbs().sum(); }

double linf_norm(const Eigen::Ref<const Eigen::VectorXd>& theta) {
    return theta.size() == 0 ? 0.0 : theta.cwiseAbs().maxCoeff();
}

}  // namespace spdnn
