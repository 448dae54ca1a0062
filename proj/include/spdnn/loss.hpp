#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "spdnn/data.hpp"
#include "spdnn/network.hpp"

namespace spdnn {

/// Constants of a loss on the working box {|pred| <= F, |y| <= domain_bound}.
struct LossConstants {
    double lipschitz = 0.0;  ///< K_ell, w.r.t. |u - u'| + |y - y'|
    double bound = 0.0;      ///< M, sup of the loss over the box
    double class_lipschitz = 0.0;  ///< G, Lipschitz constant of h -> ell(h, z) in sup norm
};

/// A loss ell(pred, y) >= 0 together with its derivative in pred and its
/// (A2) constants. L1 and L2 are built in; any other loss can be plugged in
/// through Loss::custom and is then accepted by training, risk and bounds.
class Loss {
public:
    enum class Kind { L1, L2, Custom };

    using EvalFn = std::function<double(double pred, double y)>;
    using ConstantsFn = std::function<LossConstants(double output_bound, double domain_bound)>;

    static Loss l1(double domain_bound = 1e3);
    static Loss l2(double domain_bound = 1e3);
    static Loss custom(std::string name, EvalFn eval, EvalFn derivative, ConstantsFn constants,
                       double domain_bound);
    /// "l1" or "l2".
    static Loss parse(const std::string& name, double domain_bound = 1e3);

    Kind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }
    double domain_bound() const noexcept { return domain_bound_; }

    /// Throws NumericError on non-finite input.
    double eval(double pred, double y) const;

    /// d ell / d pred; 0 at the kink of L1.
    double derivative(double pred, double y) const;

    LossConstants constants(double output_bound) const;

private:
    Loss(Kind kind, std::string name, double domain_bound);

    Kind kind_;
    std::string name_;
    double domain_bound_;
    EvalFn eval_;
    EvalFn derivative_;
    ConstantsFn constants_;
};

double loss_eval(const Loss& loss, double pred, double y);

struct RiskEstimate {
    double value = 0.0;
    std::size_t n = 0;
};

/// (1/n) sum_i ell(h(X_i), Y_i). Throws ArgumentError on empty data.
RiskEstimate empirical_risk(const Network& net, const SupervisedSet& data, const Loss& loss);

/// Same average over precomputed predictions.
RiskEstimate empirical_risk(const Eigen::VectorXd& preds, const Eigen::VectorXd& targets,
                            const Loss& loss);

/// (K_ell, M, G) on the box |pred| <= arch.output_bound, |y| <= loss.domain_bound().
LossConstants lipschitz_constants(const Loss& loss, const Architecture& arch);

}  // namespace spdnn
