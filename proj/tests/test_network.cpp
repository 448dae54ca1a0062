#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "spdnn/errors.hpp"
#include "spdnn/network.hpp"
#include "spdnn/penalty.hpp"

using namespace spdnn;

namespace {

ParamVector random_params(const Architecture& arch, RngSeed seed, double scale = 1.0) {
    Rng rng(seed);
    ParamVector theta(static_cast<Eigen::Index>(arch.param_count()));
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta[i] = rng.uniform(-scale, scale);
    return theta;
}

std::vector<double> random_input(Rng& rng, int d, double scale = 3.0) {
    std::vector<double> x(static_cast<std::size_t>(d));
    for (double& v : x) v = rng.uniform(-scale, scale);
    return x;
}

}  // namespace

TEST_CASE("parameter counts follow the shape arithmetic") {
    CHECK(Architecture::mlp(2, 2, 100).param_count() == 10501);
    CHECK(Architecture::mlp(3, 2, 100).param_count() == 10601);
    CHECK(Architecture::mlp(3, 2, 100).max_width() == 100);
}

TEST_CASE("invalid architectures are rejected") {
    Architecture a;
    a.depth = 0;
    a.widths = {3, 1};
    CHECK_THROWS_AS(a.validate(), ConfigError);
    a = Architecture{};
    a.widths.back() = 2;
    CHECK_THROWS_AS(a.validate(), ConfigError);
    a = Architecture{};
    a.widths = {3, 100, 1};
    CHECK_THROWS_AS(a.validate(), ConfigError);
    a = Architecture{};
    a.weight_bound = 0.0;
    CHECK_THROWS_AS(a.validate(), ConfigError);
    a = Architecture{};
    a.output_bound = -1.0;
    CHECK_THROWS_AS(a.validate(), ConfigError);
    a = Architecture{};
    a.sparsity = -1;
    CHECK_THROWS_AS(a.validate(), ConfigError);
    CHECK_THROWS_AS(new_network(a, InitScheme::Zero, 0), ConfigError);
}

TEST_CASE("zero init gives the zero network") {
    const Network net = new_network(Architecture::mlp(3, 2, 100), InitScheme::Zero, 1);
    CHECK(net.params().cwiseAbs().maxCoeff() == 0.0);
    const std::vector<double> x{1.0, -2.0, 3.0};
    CHECK(forward(net, x) == 0.0);
    CHECK(flatten_params(net).isZero(0.0));
}

TEST_CASE("Glorot init is deterministic and within its limits") {
    const Architecture arch = Architecture::mlp(3, 2, 100);
    const Network a = new_network(arch, InitScheme::GlorotUniform, 9);
    const Network b = new_network(arch, InitScheme::GlorotUniform, 9);
    const Network c = new_network(arch, InitScheme::GlorotUniform, 10);
    CHECK(a == b);
    CHECK_FALSE(a == c);
    for (std::size_t j = 0; j < arch.layer_count(); ++j) {
        const double limit = std::sqrt(6.0 / (arch.widths[j] + arch.widths[j + 1]));
        CHECK(a.weights(j).cwiseAbs().maxCoeff() <= limit);
        CHECK(a.weights(j).cwiseAbs().maxCoeff() > 0.5 * limit);
        CHECK(a.bias(j).isZero(0.0));
    }
}

TEST_CASE("theta ordering is column-major vec(W) then bias, layer by layer") {
    Architecture arch;
    arch.depth = 1;
    arch.widths = {2, 2, 1};
    ParamVector theta(9);
    theta << 1, 3, 2, 4, 5, 6, 7, 8, 9;
    const Network net(arch, Activation::ReLU, theta);
    CHECK(net.weights(0)(0, 0) == 1.0);
    CHECK(net.weights(0)(0, 1) == 2.0);
    CHECK(net.weights(0)(1, 0) == 3.0);
    CHECK(net.weights(0)(1, 1) == 4.0);
    CHECK(net.bias(0)[0] == 5.0);
    CHECK(net.bias(0)[1] == 6.0);
    CHECK(net.weights(1)(0, 0) == 7.0);
    CHECK(net.weights(1)(1, 0) == 8.0);
    CHECK(net.bias(1)[0] == 9.0);
    // x W1 + b1 = (1+3+5, 2+4+6) = (9, 12); 9*7 + 12*8 + 9 = 168.
    const std::vector<double> x{1.0, 1.0};
    CHECK(forward(net, x) == 168.0);
    CHECK(flatten_params(net) == theta);
}

TEST_CASE("identity first layer reproduces a linear value on positive inputs") {
    Architecture arch;
    arch.depth = 1;
    arch.widths = {2, 2, 1};
    ParamVector theta(9);
    theta << 1, 0, 0, 1, 0, 0, 1, 1, 0;
    const Network net(arch, Activation::ReLU, theta);
    const std::vector<double> x{0.25, 1.5};
    CHECK(forward(net, x) == doctest::Approx(1.75).epsilon(1e-15));
}

TEST_CASE("raw output beyond F is clamped") {
    Architecture arch;
    arch.depth = 1;
    arch.widths = {1, 1, 1};
    arch.output_bound = 1.0;
    ParamVector theta(4);
    theta << 0, 0, 0, 5;
    const Network net(arch, Activation::ReLU, theta);
    const std::vector<double> x{0.3};
    CHECK(forward(net, x) == 1.0);
    theta[3] = -5.0;
    CHECK(forward(Network(arch, Activation::ReLU, theta), x) == -1.0);
}

TEST_CASE("forward never leaves [-F, F]") {
    const Architecture arch = Architecture::mlp(3, 2, 20, 1e3, 0.5);
    Rng rng(2);
    for (int k = 0; k < 20; ++k) {
        const Network net(arch, Activation::ReLU, random_params(arch, 100 + k, 3.0));
        for (int i = 0; i < 50; ++i) {
            const auto x = random_input(rng, 3, 100.0);
            REQUIRE(std::abs(forward(net, x)) <= 0.5);
        }
    }
}

TEST_CASE("dimension mismatches are shape errors") {
    const Architecture arch = Architecture::mlp(3, 2, 10);
    const Network net = new_network(arch, InitScheme::GlorotUniform, 1);
    const std::vector<double> x{1.0, 2.0};
    CHECK_THROWS_AS(forward(net, x), ShapeError);
    CHECK_THROWS_AS(load_params(net, ParamVector::Zero(5)), ShapeError);
    CHECK_THROWS_AS(Network(arch, Activation::ReLU, ParamVector::Zero(7)), ShapeError);
}

TEST_CASE("flatten/load round trip preserves outputs bit for bit") {
    const Architecture arch = Architecture::mlp(3, 2, 100);
    const Network net = new_network(arch, InitScheme::GlorotUniform, 4);
    const Network copy = load_params(new_network(arch, InitScheme::Zero, 0), flatten_params(net));
    CHECK(copy == net);
    Rng rng(8);
    for (int i = 0; i < 100; ++i) {
        const auto x = random_input(rng, 3);
        REQUIRE(forward(copy, x) == forward(net, x));
    }
}

TEST_CASE("forward_batch agrees with row-wise forward") {
    const Architecture arch = Architecture::mlp(3, 2, 30);
    for (Activation act : {Activation::ReLU, Activation::Sigmoid, Activation::Tanh}) {
        const Network net = new_network(arch, InitScheme::GlorotUniform, 6, act);
        Rng rng(1);
        InputMatrix x(25, 3);
        for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-2.0, 2.0);
        const Eigen::VectorXd batch = net.forward_batch(x);
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            const std::vector<double> row{x(i, 0), x(i, 1), x(i, 2)};
            CHECK(batch[i] == doctest::Approx(forward(net, row)).epsilon(1e-13));
        }
    }
}

TEST_CASE("constraint report") {
    Architecture arch = Architecture::mlp(2, 2, 100, 1.0, 1e3, 10000);
    const Network zero = new_network(arch, InitScheme::Zero, 0);
    ConstraintReport r = check_constraints(zero, arch);
    CHECK(r.all_ok());
    CHECK(r.nonzeros == 0);
    CHECK(r.depth == 2);
    CHECK(r.width == 100);

    ParamVector theta = zero.params();
    theta[17] = 2.0;
    r = check_constraints(Network(arch, Activation::ReLU, theta), arch);
    CHECK_FALSE(r.sup_norm_ok);
    CHECK(r.sup_norm == 2.0);
    CHECK(r.sparsity_ok);

    const Network dense(arch, Activation::ReLU, random_params(arch, 5));
    r = check_constraints(dense, arch);
    CHECK_FALSE(r.sparsity_ok);
    CHECK(r.nonzeros == 10501);

    const Architecture narrow = Architecture::mlp(2, 1, 50);
    r = check_constraints(dense, narrow);
    CHECK_FALSE(r.depth_ok);
    CHECK_FALSE(r.width_ok);
}

TEST_CASE("ReLU network is linear inside one activation region") {
    const Architecture arch = Architecture::mlp(3, 2, 20);
    const Network net = new_network(arch, InitScheme::GlorotUniform, 12);
    Rng rng(4);
    for (int k = 0; k < 20; ++k) {
        const auto x = random_input(rng, 3);
        const auto v = random_input(rng, 3, 1.0);
        const double h = 1e-6;
        auto at = [&](double t) {
            std::vector<double> p(3);
            for (int i = 0; i < 3; ++i) p[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + t * v[static_cast<std::size_t>(i)];
            return forward(net, p);
        };
        const double second = at(h) - 2.0 * at(0.0) + at(-h);
        CHECK(std::abs(second) < 1e-12);
    }
}

TEST_CASE("empirical Lipschitz ratio never exceeds the product bound") {
    const Architecture arch = Architecture::mlp(3, 2, 30);
    Rng rng(21);
    for (Activation act : {Activation::ReLU, Activation::Tanh, Activation::Sigmoid}) {
        const Network net(arch, act, random_params(arch, 77, 0.5));
        const double bound = lipschitz_upper_bound(net);
        CHECK(bound > 0.0);
        for (int i = 0; i < 2000; ++i) {
            const auto x = random_input(rng, 3);
            const auto y = random_input(rng, 3);
            double dist = 0.0;
            for (int k = 0; k < 3; ++k) dist = std::max(dist, std::abs(x[static_cast<std::size_t>(k)] - y[static_cast<std::size_t>(k)]));
            REQUIRE(std::abs(forward(net, x) - forward(net, y)) <= bound * dist * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("activation names and constants") {
    CHECK(activation_lipschitz(Activation::ReLU) == 1.0);
    CHECK(activation_lipschitz(Activation::Sigmoid) == 0.25);
    CHECK(parse_activation("tanh") == Activation::Tanh);
    CHECK(to_string(Activation::Sigmoid) == "sigmoid");
    CHECK_THROWS_AS(parse_activation("gelu"), ConfigError);
}

TEST_CASE("text serialization round trip") {
    const Architecture arch = Architecture::mlp(3, 2, 7, 2.5, 10.0);
    const Network net = new_network(arch, InitScheme::GlorotUniform, 3);
    std::stringstream ss;
    write_network(ss, net);
    std::string header;
    std::getline(std::stringstream(ss.str()), header);
    CHECK(header == "spdnn-net v1 3 2 3 7 7 1 2.5 10");
    const Network back = read_network(ss);
    CHECK(back == net);

    std::stringstream bad("spdnn-net v2 3 2 3 7 7 1 2.5 10\n");
    CHECK_THROWS(read_network(bad));
}
