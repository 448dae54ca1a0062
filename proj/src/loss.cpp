#include "spdnn/loss.hpp"

#include <cmath>
#include <utility>

#include "spdnn/errors.hpp"

namespace spdnn {

Loss::Loss(Kind kind, std::string name, double domain_bound)
    : kind_(kind), name_(std::move(name)), domain_bound_(domain_bound) {
    if (!(domain_bound >= 0.0)) throw ConfigError("loss: domain bound must be >= 0");
}

Loss Loss::l1(double domain_bound) {
    Loss loss(Kind::L1, "l1", domain_bound);
    loss.eval_ = [](double u, double y) { return std::abs(u - y); };
    loss.derivative_ = [](double u, double y) {
        return u > y ? 1.0 : (u < y ? -1.0 : 0.0);
    };
    loss.constants_ = [](double f, double b) {
        return LossConstants{1.0, f + b, 1.0};
    };
    return loss;
}

Loss Loss::l2(double domain_bound) {
    Loss loss(Kind::L2, "l2", domain_bound);
    loss.eval_ = [](double u, double y) { return (u - y) * (u - y); };
    loss.derivative_ = [](double u, double y) { return 2.0 * (u - y); };
    // |d/du| = |d/dy| = 2|u - y| <= 2(F + b) on the box.
    loss.constants_ = [](double f, double b) {
        const double k = 2.0 * (f + b);
        return LossConstants{k, (f + b) * (f + b), k};
    };
    return loss;
}

Loss Loss::custom(std::string name, EvalFn eval, EvalFn derivative, ConstantsFn constants,
                  double domain_bound) {
    if (!eval || !derivative || !constants) throw ConfigError("custom loss '" + name + "' is incomplete");
    Loss loss(Kind::Custom, std::move(name), domain_bound);
    loss.eval_ = std::move(eval);
    loss.derivative_ = std::move(derivative);
    loss.constants_ = std::move(constants);
    return loss;
}

Loss Loss::parse(const std::string& name, double domain_bound) {
    if (name == "l1") return l1(domain_bound);
    if (name == "l2") return l2(domain_bound);
    throw ConfigError("unknown loss '" + name + "' (expected l1 or l2)");
}

double Loss::eval(double pred, double y) const {
    if (!std::isfinite(pred) || !std::isfinite(y)) throw NumericError("loss evaluated at a non-finite value");
    return eval_(pred, y);
}

double Loss::derivative(double pred, double y) const { return derivative_(pred, y); }

LossConstants Loss::constants(double output_bound) const { return constants_(output_bound, domain_bound_); }

double loss_eval(const Loss& loss, double pred, double y) { return loss.eval(pred, y); }

RiskEstimate empirical_risk(const Eigen::VectorXd& preds, const Eigen::VectorXd& targets, const Loss& loss) {
    if (targets.size() == 0) throw ArgumentError("empirical risk of an empty dataset");
    if (preds.size() != targets.size()) throw ShapeError("prediction/target length mismatch");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < targets.size(); ++i) sum += loss.eval(preds[i], targets[i]);
    return {sum / static_cast<double>(targets.size()), static_cast<std::size_t>(targets.size())};
}

RiskEstimate empirical_risk(const Network& net, const SupervisedSet& data, const Loss& loss) {
    if (data.empty()) throw ArgumentError("empirical risk of an empty dataset");
    return empirical_risk(net.forward_batch(data.inputs), data.targets, loss);
}

LossConstants lipschitz_constants(const Loss& loss, const Architecture& arch) {
    return loss.constants(arch.output_bound);
}

}  // namespace spdnn
