#include "spdnn/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "spdnn/csv.hpp"
#include "spdnn/errors.hpp"

namespace spdnn {

std::string to_string(DgpKind kind) {
    switch (kind) {
        case DgpKind::DGP1: return "dgp1";
        case DgpKind::DGP2: return "dgp2";
        case DgpKind::Custom: return "custom";
    }
    return "custom";
}

DgpKind parse_dgp(const std::string& name) {
    if (name == "dgp1") return DgpKind::DGP1;
    if (name == "dgp2") return DgpKind::DGP2;
    throw ConfigError("unknown DGP '" + name + "' (expected dgp1 or dgp2)");
}

DgpSpec DgpSpec::dgp1() { return DgpSpec{}; }

DgpSpec DgpSpec::dgp2() {
    DgpSpec spec;
    spec.kind = DgpKind::DGP2;
    return spec;
}

void DgpSpec::validate() const {
    if (!(std::abs(alpha1) < 1.0)) throw StabilityError("covariate AR(1) requires |alpha1| < 1");
    if (!(phi0 > 0.0)) throw ConfigError("ARCH intercept phi0 must be > 0");
    if (!(phi1 >= 0.0)) throw ConfigError("ARCH slope phi1 must be >= 0");
    if (!(innovation_halfwidth > 0.0)) throw ConfigError("innovation half-width must be > 0");
    if (kind == DgpKind::Custom && !custom) throw ConfigError("custom DGP needs a target function");
}

std::string DgpSpec::name() const { return to_string(kind); }

double std_uniform(double halfwidth, Rng& rng) {
    return rng.uniform(-halfwidth, halfwidth) * std::sqrt(3.0) / halfwidth;
}

double target_f(DgpKind kind, double y1, double y2, double x) {
    switch (kind) {
        case DgpKind::DGP1:
            return -0.75 + 0.1 * std::max(y1, 0.0) - 0.2 * std::min(y1, 0.0) + 0.15 * y2 +
                   0.4 * std::sqrt(1.0 + 0.5 * x * x);
        case DgpKind::DGP2:
            return 0.4 + (0.2 - 0.15 * std::exp(-y1 * y1)) * y1 - 0.5 / (1.0 + std::abs(x));
        case DgpKind::Custom: break;
    }
    throw ConfigError("target_f: custom DGP needs a DgpSpec carrying the function");
}

double target_f(const DgpSpec& spec, double y1, double y2, double x) {
    if (spec.kind == DgpKind::Custom) return spec.custom(y1, y2, x);
    return target_f(spec.kind, y1, y2, x);
}

namespace {

double draw_innovation(const DgpSpec& spec, Rng& rng) {
    switch (spec.innovations) {
        case InnovationMode::Standardized: return std_uniform(spec.innovation_halfwidth, rng);
        case InnovationMode::Raw: return rng.uniform(-spec.innovation_halfwidth, spec.innovation_halfwidth);
        case InnovationMode::Zero: return 0.0;
    }
    return 0.0;
}

}  // namespace

std::vector<double> simulate_covariate(const DgpSpec& spec, std::size_t n, Rng& rng) {
    spec.validate();
    std::vector<double> out;
    out.reserve(n);
    double x = spec.alpha0 / (1.0 - spec.alpha1);
    for (std::size_t t = 0; t < spec.burn_in + n; ++t) {
        x = spec.alpha0 + spec.alpha1 * x + draw_innovation(spec, rng);
        if (t >= spec.burn_in) out.push_back(x);
    }
    return out;
}

Trajectory simulate_arx_arch(const DgpSpec& spec, std::size_t n, Rng& rng) {
    spec.validate();
    Trajectory traj;
    traj.seed = rng.seed();
    traj.y.reserve(n);
    traj.cov.reserve(n);
    traj.eps.reserve(n);

    double y1 = 0.0;  // Y_{t-1}
    double y2 = 0.0;  // Y_{t-2}
    double x_prev = spec.alpha0 / (1.0 - spec.alpha1);
    double eps_prev = 0.0;
    for (std::size_t t = 0; t < spec.burn_in + n; ++t) {
        const double xi = draw_innovation(spec, rng);
        const double eta = draw_innovation(spec, rng);
        const double eps = xi * std::sqrt(spec.phi0 + spec.phi1 * eps_prev * eps_prev);
        const double y = target_f(spec, y1, y2, x_prev) + eps;
        const double x = spec.alpha0 + spec.alpha1 * x_prev + eta;
        if (!std::isfinite(y) || !std::isfinite(x)) {
            throw DivergenceError("ARX-ARCH recursion diverged at step " + std::to_string(t),
                                  static_cast<long>(t));
        }
        if (t >= spec.burn_in) {
            traj.y.push_back(y);
            traj.cov.push_back(x);
            traj.eps.push_back(eps);
        }
        y2 = y1;
        y1 = y;
        x_prev = x;
        eps_prev = eps;
    }
    return traj;
}

Trajectory simulate_arx_arch(const DgpSpec& spec, std::size_t n, RngSeed seed) {
    Rng rng(seed);
    return simulate_arx_arch(spec, n, rng);
}

LipschitzCoefficients target_lipschitz(DgpKind kind) {
    switch (kind) {
        case DgpKind::DGP1:
            // max(0.1, 0.2) in y1; 0.4 * sup |d/dx sqrt(1 + x^2/2)| = 0.4 / sqrt(2) in x.
            return {0.2, 0.15, 0.4 / std::sqrt(2.0)};
        case DgpKind::DGP2:
            // d/dy [(0.2 - 0.15 e^{-y^2}) y] = 0.2 + 0.15 e^{-y^2}(2y^2 - 1), largest at y^2 = 3/2.
            return {0.2 + 0.3 * std::exp(-1.5), 0.0, 0.5};
        case DgpKind::Custom: break;
    }
    throw ConfigError("no analytic Lipschitz coefficients for a custom target");
}

StabilityReport check_stability(const DgpSpec& spec, const LipschitzCoefficients& lip) {
    if (lip.y1 < 0.0 || lip.y2 < 0.0 || lip.x < 0.0) {
        throw ArgumentError("Lipschitz coefficients must be nonnegative");
    }
    StabilityReport r;
    const double root_phi1 = std::sqrt(spec.phi1);
    r.alpha1y_f = lip.y1;
    r.alpha2y_f = lip.y2;
    r.alpha1y_M = root_phi1 * (1.0 + lip.y1);
    r.alpha2y_M = root_phi1 * lip.y2;
    r.alpha1_cov = std::abs(spec.alpha1);
    r.total = std::max(r.alpha1_cov, r.alpha1y_f + r.alpha1y_M) + r.alpha2y_f + r.alpha2y_M;
    r.stable = r.total < 1.0;
    return r;
}

SupervisedSet make_supervised(const Trajectory& traj, std::size_t lags) {
    const std::size_t n = traj.size();
    if (lags == 0) throw ArgumentError("make_supervised: lags must be >= 1");
    if (traj.cov.size() != n) throw ArgumentError("make_supervised: y and covariate lengths differ");
    if (n <= lags) {
        throw ArgumentError("make_supervised: series of length " + std::to_string(n) + " is too short for " +
                            std::to_string(lags) + " lags");
    }
    SupervisedSet set;
    const auto rows = static_cast<Eigen::Index>(n - lags);
    set.inputs.resize(rows, static_cast<Eigen::Index>(lags + 1));
    set.targets.resize(rows);
    for (std::size_t t = lags; t < n; ++t) {
        const auto r = static_cast<Eigen::Index>(t - lags);
        for (std::size_t k = 1; k <= lags; ++k) set.inputs(r, static_cast<Eigen::Index>(k - 1)) = traj.y[t - k];
        set.inputs(r, static_cast<Eigen::Index>(lags)) = traj.cov[t - 1];
        set.targets[r] = traj.y[t];
    }
    return set;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "# seed=" << traj.seed << '\n';
    out << "# rng=" << Rng::name << '\n';
    out << "t,y,x\n";
    for (std::size_t t = 0; t < traj.size(); ++t) {
        out << (t + 1) << ',' << format_double(traj.y[t]) << ',' << format_double(traj.cov[t]) << '\n';
    }
}

Trajectory read_trajectory_csv(std::istream& in) {
    Trajectory traj;
    std::string line;
    long line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# seed=", 0) == 0) {
                try {
                    traj.seed = std::stoull(line.substr(7));
                } catch (const std::exception&) {
                    throw IngestionError("malformed seed comment", line_no);
                }
            }
            continue;
        }
        const std::vector<std::string> f = split_csv_line(line);
        if (!header) {
            if (f.size() != 3 || f[0] != "t" || f[1] != "y" || f[2] != "x") {
                throw IngestionError("trajectory CSV header must be t,y,x", line_no);
            }
            header = true;
            continue;
        }
        double y = 0.0, x = 0.0;
        if (f.size() != 3 || !parse_double(f[1], y) || !parse_double(f[2], x)) {
            throw IngestionError("malformed trajectory row", line_no);
        }
        traj.y.push_back(y);
        traj.cov.push_back(x);
    }
    if (!header) throw IngestionError("trajectory CSV has no header", -1);
    return traj;
}

}  // namespace spdnn
