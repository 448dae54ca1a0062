#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "spdnn/data.hpp"
#include "spdnn/loss.hpp"
#include "spdnn/network.hpp"
#include "spdnn/penalty.hpp"
#include "spdnn/rng.hpp"

namespace spdnn {

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t batch_size = 32;
    std::size_t patience = 30;
    std::size_t max_epochs = 2000;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    /// An epoch counts as an improvement only if it lowers the best objective by more than this.
    double min_delta = 1e-8;
    RngSeed seed = 0;
    bool shuffle = true;

    /// Throws ConfigError.
    void validate() const;
};

struct AdamState {
    Eigen::VectorXd m;
    Eigen::VectorXd v;
    long step = 0;

    explicit AdamState(std::size_t dim)
        : m(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim))),
          v(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim))) {}
};

/// One bias-corrected Adam update of theta in place.
void adam_step(AdamState& state, ParamVector& theta, const ParamVector& grad, const TrainConfig& cfg);

/// Reusable forward/backward buffers for one architecture. Not thread-safe;
/// give each training run its own engine.
class GradientEngine {
public:
    GradientEngine(const Architecture& arch, Activation act);

    /// Writes the gradient of (1/B) sum_i ell(clamp(h(x_i)), y_i) over the rows
    /// of inputs into grad and returns the batch mean loss.
    double gradient(const ParamVector& theta, const InputMatrix& inputs, const Eigen::VectorXd& targets,
                    const Loss& loss, ParamVector& grad);

    /// Clamped network outputs for the rows of inputs under parameters theta.
    const Eigen::VectorXd& predict(const ParamVector& theta, const InputMatrix& inputs);

private:
    void forward_pass(const ParamVector& theta, const InputMatrix& inputs);

    Architecture arch_;
    Activation act_;
    std::vector<std::size_t> offsets_;
    std::vector<Eigen::MatrixXd> pre_;   // Z_j, one per layer
    std::vector<Eigen::MatrixXd> post_;  // sigma(Z_j) for hidden layers
    Eigen::MatrixXd delta_;
    Eigen::MatrixXd delta_prev_;
    Eigen::VectorXd output_;
};

/// Gradient of the batch mean loss with respect to theta(net).
/// Throws ShapeError on empty or mismatched data.
ParamVector backprop(const Network& net, const SupervisedSet& batch, const Loss& loss);

struct EpochRecord {
    std::size_t epoch = 0;
    double objective = 0.0;
    double risk = 0.0;
    double penalty = 0.0;
    std::size_t l0 = 0;
    double best_objective = 0.0;
};

struct TrainedModel {
    Network network;
    std::vector<EpochRecord> history;
    std::size_t stopped_epoch = 0;
    std::size_t best_epoch = 0;
    double best_objective = 0.0;
};

/// Minimizes (1/n) sum ell(h(X_i), Y_i) + lambda ||theta||_{clip,tau} by
/// minibatch Adam on the risk gradient plus lambda times the clipped-norm
/// subgradient. Stops after `patience` epochs without improvement of the
/// full-data training objective, and returns the best parameters seen.
/// Throws DivergenceError if the objective becomes non-finite.
TrainedModel train_spdnn(const SupervisedSet& data, const Architecture& arch, const PenaltyConfig& pen,
                         const Loss& loss, const TrainConfig& cfg, Activation act = Activation::ReLU);

/// train_spdnn with lambda = 0.
TrainedModel train_npdnn(const SupervisedSet& data, const Architecture& arch, const Loss& loss,
                         const TrainConfig& cfg, Activation act = Activation::ReLU);

/// CSV "epoch,objective,risk,penalty,l0".
void write_training_log(std::ostream& out, const TrainedModel& model);

}  // namespace spdnn
