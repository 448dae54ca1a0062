#include "spdnn/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "spdnn/errors.hpp"
#include "spdnn/penalty.hpp"

namespace spdnn {

Architecture Architecture::mlp(int input_dim, int hidden_layers, int width, double weight_bound,
                               double output_bound, std::optional<std::int64_t> sparsity) {
    Architecture arch;
    arch.depth = hidden_layers;
    arch.widths.assign(static_cast<std::size_t>(std::max(hidden_layers, 0)) + 2, width);
    arch.widths.front() = input_dim;
    arch.widths.back() = 1;
    arch.weight_bound = weight_bound;
    arch.output_bound = output_bound;
    arch.sparsity = sparsity;
    return arch;
}

int Architecture::max_width() const {
    int w = 0;
    for (std::size_t j = 1; j + 1 < widths.size(); ++j) w = std::max(w, widths[j]);
    return w;
}

std::size_t Architecture::param_count() const {
    std::size_t p = 0;
    for (std::size_t j = 1; j < widths.size(); ++j) {
        const auto in = static_cast<std::size_t>(widths[j - 1]);
        const auto out = static_cast<std::size_t>(widths[j]);
        p += in * out + out;
    }
    return p;
}

void Architecture::validate() const {
    if (depth < 1) throw ConfigError("architecture: depth must be >= 1");
    if (widths.size() != static_cast<std::size_t>(depth) + 2) {
        throw ConfigError("architecture: expected " + std::to_string(depth + 2) +
                          " widths (p_0..p_{L+1}), got " + std::to_string(widths.size()));
    }
    for (int w : widths) {
        if (w < 1) throw ConfigError("architecture: all widths must be >= 1");
    }
    if (widths.back() != 1) throw ConfigError("architecture: output width must be 1");
    if (!(weight_bound > 0.0)) throw ConfigError("architecture: weight bound B must be > 0");
    if (!(output_bound > 0.0)) throw ConfigError("architecture: output bound F must be > 0");
    if (sparsity && *sparsity < 0) throw ConfigError("architecture: sparsity S must be >= 0");
}

double activation_lipschitz(Activation act) noexcept {
    switch (act) {
        case Activation::ReLU: return 1.0;
        case Activation::Sigmoid: return 0.25;
        case Activation::Tanh: return 1.0;
    }
    return 1.0;
}

std::string to_string(Activation act) {
    switch (act) {
        case Activation::ReLU: return "relu";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Tanh: return "tanh";
    }
    return "relu";
}

Activation parse_activation(const std::string& name) {
    if (name == "relu") return Activation::ReLU;
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "tanh") return Activation::Tanh;
    throw ConfigError("unknown activation '" + name + "'");
}

std::vector<std::size_t> layer_offsets(const Architecture& arch) {
    std::vector<std::size_t> offsets;
    offsets.reserve(arch.layer_count());
    std::size_t off = 0;
    for (std::size_t j = 1; j < arch.widths.size(); ++j) {
        offsets.push_back(off);
        const auto in = static_cast<std::size_t>(arch.widths[j - 1]);
        const auto out = static_cast<std::size_t>(arch.widths[j]);
        off += in * out + out;
    }
    return offsets;
}

Network::Network(Architecture arch, Activation act, ParamVector params)
    : arch_(std::move(arch)), act_(act), params_(std::move(params)) {
    arch_.validate();
    if (static_cast<std::size_t>(params_.size()) != arch_.param_count()) {
        throw ShapeError("parameter vector has length " + std::to_string(params_.size()) +
                         ", architecture needs " + std::to_string(arch_.param_count()));
    }
    offsets_ = layer_offsets(arch_);
}

Eigen::Map<const Eigen::MatrixXd> Network::weights(std::size_t layer) const {
    return {params_.data() + offsets_.at(layer), arch_.widths[layer], arch_.widths[layer + 1]};
}

Eigen::Map<const Eigen::VectorXd> Network::bias(std::size_t layer) const {
    const auto rows = static_cast<std::size_t>(arch_.widths[layer]);
    const auto cols = static_cast<std::size_t>(arch_.widths[layer + 1]);
    return {params_.data() + offsets_.at(layer) + rows * cols, static_cast<Eigen::Index>(cols)};
}

namespace {

template <typename Derived>
void apply_activation(Activation act, Eigen::MatrixBase<Derived>& z) {
    switch (act) {
        case Activation::ReLU: z = z.cwiseMax(0.0); break;
        case Activation::Sigmoid:
            z = z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
            break;
        case Activation::Tanh: z = z.array().tanh().matrix(); break;
    }
}

}  // namespace

Eigen::VectorXd Network::forward_batch(const InputMatrix& inputs) const {
    if (inputs.cols() != arch_.input_dim()) {
        throw ShapeError("input has " + std::to_string(inputs.cols()) + " columns, network expects " +
                         std::to_string(arch_.input_dim()));
    }
    Eigen::MatrixXd a = inputs;
    for (std::size_t j = 0; j < arch_.layer_count(); ++j) {
        Eigen::MatrixXd z = a * weights(j);
        z.rowwise() += bias(j).transpose();
        if (j + 1 < arch_.layer_count()) apply_activation(act_, z);
        a = std::move(z);
    }
    const double f = arch_.output_bound;
    // NaN passes through unchanged so that divergence stays visible.
    return a.col(0).unaryExpr([f](double v) { return std::clamp(v, -f, f); });
}

double Network::forward(std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(arch_.input_dim())) {
        throw ShapeError("input has length " + std::to_string(x.size()) + ", network expects " +
                         std::to_string(arch_.input_dim()));
    }
    Eigen::RowVectorXd a = Eigen::Map<const Eigen::RowVectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    for (std::size_t j = 0; j < arch_.layer_count(); ++j) {
        Eigen::RowVectorXd z = a * weights(j) + bias(j).transpose();
        if (j + 1 < arch_.layer_count()) apply_activation(act_, z);
        a = std::move(z);
    }
    return std::clamp(a(0), -arch_.output_bound, arch_.output_bound);
}

bool Network::operator==(const Network& other) const {
    return arch_ == other.arch_ && act_ == other.act_ && params_.size() == other.params_.size() &&
           std::equal(params_.data(), params_.data() + params_.size(), other.params_.data());
}

Network new_network(const Architecture& arch, InitScheme init, RngSeed seed, Activation act) {
    arch.validate();
    ParamVector theta = ParamVector::Zero(static_cast<Eigen::Index>(arch.param_count()));
    if (init == InitScheme::GlorotUniform) {
        Rng rng(seed);
        const auto offsets = layer_offsets(arch);
        for (std::size_t j = 0; j < arch.layer_count(); ++j) {
            const int in = arch.widths[j];
            const int out = arch.widths[j + 1];
            const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
            double* w = theta.data() + offsets[j];
            for (std::size_t k = 0; k < static_cast<std::size_t>(in) * static_cast<std::size_t>(out); ++k) {
                w[k] = rng.uniform(-limit, limit);
            }
        }
    }
    return Network(arch, act, std::move(theta));
}

double forward(const Network& net, std::span<const double> x) { return net.forward(x); }

ParamVector flatten_params(const Network& net) { return net.params(); }

Network load_params(const Network& net, const ParamVector& theta) {
    if (static_cast<std::size_t>(theta.size()) != net.architecture().param_count()) {
        throw ShapeError("load_params: expected " + std::to_string(net.architecture().param_count()) +
                         " values, got " + std::to_string(theta.size()));
    }
    return Network(net.architecture(), net.activation(), theta);
}

ConstraintReport check_constraints(const Network& net, const Architecture& arch) {
    ConstraintReport r;
    const Architecture& own = net.architecture();
    r.depth = own.depth;
    r.width = own.max_width();
    r.sup_norm = linf_norm(net.params());
    r.nonzeros = static_cast<std::int64_t>(l0_norm(net.params()));
    r.depth_ok = r.depth <= arch.depth;
    r.width_ok = r.width <= arch.max_width();
    r.sup_norm_ok = r.sup_norm <= arch.weight_bound;
    r.sparsity_ok = !arch.sparsity || r.nonzeros <= *arch.sparsity;
    return r;
}

double lipschitz_upper_bound(const Network& net) {
    const double c_sigma = activation_lipschitz(net.activation());
    double bound = 1.0;
    for (std::size_t j = 0; j < net.architecture().layer_count(); ++j) {
        // Row form x -> x W: induced sup-norm is the largest absolute column sum of W.
        bound *= net.weights(j).cwiseAbs().colwise().sum().maxCoeff();
        if (j + 1 < net.architecture().layer_count()) bound *= c_sigma;
    }
    return bound;
}

void write_network(std::ostream& out, const Network& net) {
    const Architecture& arch = net.architecture();
    std::ostringstream header;
    header << std::setprecision(17) << "spdnn-net v1 " << arch.input_dim() << ' ' << arch.depth;
    for (int w : arch.widths) header << ' ' << w;
    header << ' ' << arch.weight_bound << ' ' << arch.output_bound;
    out << header.str() << '\n';
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < net.params().size(); ++i) out << net.params()[i] << '\n';
}

Network read_network(std::istream& in, Activation act) {
    std::string line;
    if (!std::getline(in, line)) throw ShapeError("network file is empty");
    std::istringstream header(line);
    std::string magic, version;
    Architecture arch;
    int d = 0;
    header >> magic >> version >> d >> arch.depth;
    if (magic != "spdnn-net" || version != "v1" || !header) {
        throw ShapeError("not an spdnn-net v1 header: '" + line + "'");
    }
    if (arch.depth < 1 || arch.depth > 100000) throw ShapeError("network file: bad depth");
    arch.widths.assign(static_cast<std::size_t>(arch.depth) + 2, 0);
    for (int& w : arch.widths) header >> w;
    header >> arch.weight_bound >> arch.output_bound;
    if (!header) throw ShapeError("truncated spdnn-net header: '" + line + "'");
    if (arch.widths.front() != d) throw ShapeError("network file: input dimension mismatch in header");
    try {
        arch.validate();
    } catch (const ConfigError& e) {
        throw ShapeError(std::string("network file: ") + e.what());
    }
    ParamVector theta(static_cast<Eigen::Index>(arch.param_count()));
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        if (!std::getline(in, line)) {
            throw ShapeError("network file: expected " + std::to_string(theta.size()) + " values, got " +
                             std::to_string(i));
        }
        try {
            std::size_t used = 0;
            theta[i] = std::stod(line, &used);
        } catch (const std::exception&) {
            throw ShapeError("network file: unparsable value on line " + std::to_string(i + 2));
        }
    }
    return Network(std::move(arch), act, std::move(theta));
}

void save_network(const std::string& path, const Network& net) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot open '" + path + "' for writing");
    write_network(out, net);
}

Network load_network(const std::string& path, Activation act) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open '" + path + "'");
    return read_network(in, act);
}

}  // namespace spdnn
