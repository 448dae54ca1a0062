#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "spdnn/data.hpp"
#include "spdnn/rng.hpp"

namespace spdnn {

/// Canonical flattened parameters: (vec(W_1), b_1, ..., vec(W_{L+1}), b_{L+1})
/// with column-major vec.
using ParamVector = Eigen::VectorXd;

/// Constraint tuple of a network class. widths holds p_0 .. p_{L+1}, so
/// widths.size() == depth + 2, widths.front() is the input dimension and
/// widths.back() must be 1.
struct Architecture {
    int depth = 2;
    std::vector<int> widths{3, 100, 100, 1};
    double weight_bound = 1e3;
    double output_bound = 1e3;
    std::optional<std::int64_t> sparsity;

    /// d -> width x hidden_layers -> 1.
    static Architecture mlp(int input_dim, int hidden_layers, int width,
                            double weight_bound = 1e3, double output_bound = 1e3,
                            std::optional<std::int64_t> sparsity = std::nullopt);

    int input_dim() const { return widths.front(); }
    /// max_{1<=j<=L} p_j
    int max_width() const;
    std::size_t layer_count() const { return static_cast<std::size_t>(depth) + 1; }
    /// sum_j (p_{j-1} p_j + p_j)
    std::size_t param_count() const;

    /// Throws ConfigError describing the first violated invariant.
    void validate() const;

    bool operator==(const Architecture&) const = default;
};

enum class Activation { ReLU, Sigmoid, Tanh };

/// Lipschitz constant C_sigma of the activation.
double activation_lipschitz(Activation act) noexcept;
std::string to_string(Activation act);
Activation parse_activation(const std::string& name);

enum class InitScheme { GlorotUniform, Zero };

/// Feedforward network. Weight matrix W_j has shape p_{j-1} x p_j and a layer
/// maps a row input x to x W_j + b_j. All parameters live in one contiguous
/// ParamVector; weights() and bias() are views into it.
class Network {
public:
    Network(Architecture arch, Activation act, ParamVector params);

    const Architecture& architecture() const noexcept { return arch_; }
    Activation activation() const noexcept { return act_; }
    const ParamVector& params() const noexcept { return params_; }

    Eigen::Map<const Eigen::MatrixXd> weights(std::size_t layer) const;
    Eigen::Map<const Eigen::VectorXd> bias(std::size_t layer) const;

    /// Offset of W_{layer+1} within params().
    std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }

    /// clamp(h(x), -F, F).
    double forward(std::span<const double> x) const;

    /// Clamped outputs for every row of inputs.
    Eigen::VectorXd forward_batch(const InputMatrix& inputs) const;

    bool operator==(const Network& other) const;

private:
    Architecture arch_;
    Activation act_;
    ParamVector params_;
    std::vector<std::size_t> offsets_;
};

/// Element offsets of each layer's weight block in the flat parameter vector.
std::vector<std::size_t> layer_offsets(const Architecture& arch);

Network new_network(const Architecture& arch, InitScheme init, RngSeed seed,
                    Activation act = Activation::ReLU);

double forward(const Network& net, std::span<const double> x);

ParamVector flatten_params(const Network& net);
Network load_params(const Network& net, const ParamVector& theta);

struct ConstraintReport {
    int depth = 0;
    int width = 0;
    double sup_norm = 0.0;
    std::int64_t nonzeros = 0;

    bool depth_ok = true;
    bool width_ok = true;
    bool sup_norm_ok = true;
    bool sparsity_ok = true;

    bool all_ok() const noexcept { return depth_ok && width_ok && sup_norm_ok && sparsity_ok; }
};

/// Checks net against the class H(L, N, B, F[, S]) described by arch.
ConstraintReport check_constraints(const Network& net, const Architecture& arch);

/// Upper bound on the Lipschitz constant of x -> h(x) in the sup norm:
/// C_sigma^L * prod_j ||W_j^T||_inf.
double lipschitz_upper_bound(const Network& net);

// Text serialization: "spdnn-net v1 <d> <L> <p_0 .. p_{L+1}> <B> <F>" followed
// by theta, one value per line with 17 significant digits.
void write_network(std::ostream& out, const Network& net);
Network read_network(std::istream& in, Activation act = Activation::ReLU);
void save_network(const std::string& path, const Network& net);
Network load_network(const std::string& path, Activation act = Activation::ReLU);

}  // namespace spdnn
