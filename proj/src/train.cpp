#include "spdnn/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#if defined(__SSE__)
#include <xmmintrin.h>
#endif

#include "spdnn/csv.hpp"
#include "spdnn/errors.hpp"

namespace spdnn {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ConfigError("train: learning rate must be > 0");
    if (batch_size == 0) throw ConfigError("train: batch size must be >= 1");
    if (patience == 0) throw ConfigError("train: patience must be >= 1");
    if (max_epochs == 0) throw ConfigError("train: max_epochs must be >= 1");
    if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0)) throw ConfigError("train: beta1 must lie in (0, 1)");
    if (!(adam_beta2 > 0.0 && adam_beta2 < 1.0)) throw ConfigError("train: beta2 must lie in (0, 1)");
    if (!(adam_eps > 0.0)) throw ConfigError("train: adam epsilon must be > 0");
    if (!(min_delta >= 0.0)) throw ConfigError("train: min_delta must be >= 0");
}

void adam_step(AdamState& state, ParamVector& theta, const ParamVector& grad, const TrainConfig& cfg) {
    if (state.m.size() != grad.size() || theta.size() != grad.size()) {
        throw ShapeError("adam_step: state, parameter and gradient sizes differ");
    }
    ++state.step;
    const double b1 = cfg.adam_beta1;
    const double b2 = cfg.adam_beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
    state.m = b1 * state.m + (1.0 - b1) * grad;
    state.v = b2 * state.v + (1.0 - b2) * grad.cwiseAbs2();
    theta.array() -= cfg.learning_rate * (state.m.array() / c1) / ((state.v.array() / c2).sqrt() + cfg.adam_eps);
}

GradientEngine::GradientEngine(const Architecture& arch, Activation act)
    : arch_(arch), act_(act), offsets_(layer_offsets(arch)) {
    arch_.validate();
    pre_.resize(arch_.layer_count());
    post_.resize(arch_.layer_count());
}

void GradientEngine::forward_pass(const ParamVector& theta, const InputMatrix& inputs) {
    if (static_cast<std::size_t>(theta.size()) != arch_.param_count()) {
        throw ShapeError("parameter vector does not match the architecture");
    }
    if (inputs.cols() != arch_.input_dim()) {
        throw ShapeError("batch has " + std::to_string(inputs.cols()) + " input columns, expected " +
                         std::to_string(arch_.input_dim()));
    }
    const std::size_t layers = arch_.layer_count();
    for (std::size_t j = 0; j < layers; ++j) {
        const Eigen::Index in = arch_.widths[j];
        const Eigen::Index out = arch_.widths[j + 1];
        Eigen::Map<const Eigen::MatrixXd> w(theta.data() + offsets_[j], in, out);
        Eigen::Map<const Eigen::RowVectorXd> b(theta.data() + offsets_[j] + in * out, out);
        Eigen::MatrixXd& z = pre_[j];
        if (j == 0) {
            z.noalias() = inputs * w;
        } else {
            z.noalias() = post_[j - 1] * w;
        }
        z.rowwise() += b;
        if (j + 1 < layers) {
            Eigen::MatrixXd& a = post_[j];
            switch (act_) {
                case Activation::ReLU: a = z.cwiseMax(0.0); break;
                case Activation::Sigmoid:
                    a = z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
                    break;
                case Activation::Tanh: a = z.array().tanh().matrix(); break;
            }
        }
    }
    const double f = arch_.output_bound;
    output_ = pre_[layers - 1].col(0).unaryExpr([f](double v) { return std::clamp(v, -f, f); });
}

const Eigen::VectorXd& GradientEngine::predict(const ParamVector& theta, const InputMatrix& inputs) {
    forward_pass(theta, inputs);
    return output_;
}

double GradientEngine::gradient(const ParamVector& theta, const InputMatrix& inputs,
                                const Eigen::VectorXd& targets, const Loss& loss, ParamVector& grad) {
    const Eigen::Index batch = inputs.rows();
    if (batch == 0) throw ShapeError("gradient of an empty batch");
    if (targets.size() != batch) throw ShapeError("batch inputs and targets differ in length");
    forward_pass(theta, inputs);
    grad.resize(theta.size());

    const std::size_t layers = arch_.layer_count();
    const double f = arch_.output_bound;
    const double inv_batch = 1.0 / static_cast<double>(batch);
    const auto raw = pre_[layers - 1].col(0);
    delta_.resize(batch, 1);
    double loss_sum = 0.0;
    for (Eigen::Index i = 0; i < batch; ++i) {
        const double pred = output_[i];
        loss_sum += loss.eval(pred, targets[i]);
        const bool inside = std::abs(raw[i]) <= f;
        delta_(i, 0) = inside ? loss.derivative(pred, targets[i]) * inv_batch : 0.0;
    }

    for (std::size_t j = layers; j-- > 0;) {
        const Eigen::Index in = arch_.widths[j];
        const Eigen::Index out = arch_.widths[j + 1];
        Eigen::Map<Eigen::MatrixXd> gw(grad.data() + offsets_[j], in, out);
        Eigen::Map<Eigen::RowVectorXd> gb(grad.data() + offsets_[j] + in * out, out);
        if (j == 0) {
            gw.noalias() = inputs.transpose() * delta_;
        } else {
            gw.noalias() = post_[j - 1].transpose() * delta_;
        }
        gb = delta_.colwise().sum();
        if (j == 0) break;

        Eigen::Map<const Eigen::MatrixXd> w(theta.data() + offsets_[j], in, out);
        delta_prev_.noalias() = delta_ * w.transpose();
        const Eigen::MatrixXd& z = pre_[j - 1];
        switch (act_) {
            case Activation::ReLU:
                delta_prev_ = (z.array() > 0.0).select(delta_prev_, 0.0);
                break;
            case Activation::Sigmoid: {
                const Eigen::MatrixXd& a = post_[j - 1];
                delta_prev_.array() *= a.array() * (1.0 - a.array());
                break;
            }
            case Activation::Tanh: {
                const Eigen::MatrixXd& a = post_[j - 1];
                delta_prev_.array() *= 1.0 - a.array().square();
                break;
            }
        }
        std::swap(delta_, delta_prev_);
    }
    return loss_sum * inv_batch;
}

ParamVector backprop(const Network& net, const SupervisedSet& batch, const Loss& loss) {
    if (batch.empty()) throw ShapeError("backprop on an empty batch");
    GradientEngine engine(net.architecture(), net.activation());
    ParamVector grad;
    engine.gradient(net.params(), batch.inputs, batch.targets, loss, grad);
    return grad;
}

namespace {

// Adam moments of dead units decay geometrically into the subnormal range,
// where x86 arithmetic is two orders of magnitude slower. Flush them to zero
// for the duration of a training run.
class FlushDenormals {
public:
#if defined(__SSE__)
    FlushDenormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040); }
    ~FlushDenormals() { _mm_setcsr(saved_); }

private:
    unsigned int saved_;
#endif
};

void gather_rows(const SupervisedSet& data, const std::vector<std::size_t>& order, std::size_t first,
                 std::size_t count, InputMatrix& inputs, Eigen::VectorXd& targets) {
    const auto d = static_cast<Eigen::Index>(data.dim());
    inputs.resize(static_cast<Eigen::Index>(count), d);
    targets.resize(static_cast<Eigen::Index>(count));
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t src = order[first + k];
        inputs.row(static_cast<Eigen::Index>(k)) = data.inputs.row(static_cast<Eigen::Index>(src));
        targets[static_cast<Eigen::Index>(k)] = data.targets[static_cast<Eigen::Index>(src)];
    }
}

}  // namespace

TrainedModel train_spdnn(const SupervisedSet& data, const Architecture& arch, const PenaltyConfig& pen,
                         const Loss& loss, const TrainConfig& cfg, Activation act) {
    if (data.empty()) throw ArgumentError("training set is empty");
    arch.validate();
    pen.validate();
    cfg.validate();
    if (data.dim() != static_cast<std::size_t>(arch.input_dim())) {
        throw ShapeError("training inputs have dimension " + std::to_string(data.dim()) +
                         ", architecture expects " + std::to_string(arch.input_dim()));
    }

    const FlushDenormals ftz;
    ParamVector theta = new_network(arch, InitScheme::GlorotUniform, derive_seed(cfg.seed, {1}), act).params();
    Rng shuffle_rng(derive_seed(cfg.seed, {2}));
    GradientEngine engine(arch, act);
    AdamState adam(arch.param_count());

    const std::size_t n = data.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    InputMatrix batch_inputs;
    Eigen::VectorXd batch_targets;
    ParamVector grad;

    TrainedModel result{Network(arch, act, theta), {}, 0, 0, std::numeric_limits<double>::infinity()};
    ParamVector best_theta = theta;
    double best = std::numeric_limits<double>::infinity();
    double reference = best;  // best value at the last counted improvement
    std::size_t stale = 0;

    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        if (cfg.shuffle) {
            for (std::size_t i = n; i > 1; --i) {
                std::swap(order[i - 1], order[shuffle_rng.below(i)]);
            }
        }
        for (std::size_t first = 0; first < n; first += cfg.batch_size) {
            const std::size_t count = std::min(cfg.batch_size, n - first);
            gather_rows(data, order, first, count, batch_inputs, batch_targets);
            try {
                engine.gradient(theta, batch_inputs, batch_targets, loss, grad);
            } catch (const NumericError&) {
                throw DivergenceError("training diverged at epoch " + std::to_string(epoch), static_cast<long>(epoch));
            }
            if (pen.lambda != 0.0) add_clipped_norm_subgrad(theta, pen.tau, pen.lambda, grad);
            adam_step(adam, theta, grad, cfg);
        }

        EpochRecord rec;
        rec.epoch = epoch;
        const Eigen::VectorXd& preds = engine.predict(theta, data.inputs);
        double sum = 0.0;
        bool finite = preds.allFinite();
        if (finite) {
            for (Eigen::Index i = 0; i < preds.size(); ++i) sum += loss.eval(preds[i], data.targets[i]);
        }
        rec.risk = sum / static_cast<double>(n);
        rec.penalty = pen.lambda == 0.0 ? 0.0 : pen.lambda * clipped_norm(theta, pen.tau);
        rec.objective = rec.risk + rec.penalty;
        rec.l0 = l0_norm(theta);
        if (!finite || !std::isfinite(rec.objective) || !theta.allFinite()) {
            throw DivergenceError("training diverged at epoch " + std::to_string(epoch),
                                  static_cast<long>(epoch));
        }

        if (rec.objective < best) {
            best = rec.objective;
            best_theta = theta;
            result.best_epoch = epoch;
        }
        if (rec.objective < reference - cfg.min_delta) {
            reference = rec.objective;
            stale = 0;
        } else {
            ++stale;
        }
        rec.best_objective = best;
        result.history.push_back(rec);
        result.stopped_epoch = epoch;
        if (stale >= cfg.patience) break;
    }

    result.best_objective = best;
    result.network = Network(arch, act, std::move(best_theta));
    return result;
}

TrainedModel train_npdnn(const SupervisedSet& data, const Architecture& arch, const Loss& loss,
                         const TrainConfig& cfg, Activation act) {
    return train_spdnn(data, arch, PenaltyConfig{0.0, 1.0}, loss, cfg, act);
}

void write_training_log(std::ostream& out, const TrainedModel& model) {
    out << "epoch,objective,risk,penalty,l0\n";
    for (const EpochRecord& r : model.history) {
        out << r.epoch << ',' << format_double(r.objective) << ',' << format_double(r.risk) << ','
            << format_double(r.penalty) << ',' << r.l0 << '\n';
    }
}

}  // namespace spdnn
