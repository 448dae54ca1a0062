#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "spdnn/data.hpp"
#include "spdnn/rng.hpp"

namespace spdnn {

enum class DgpKind { DGP1, DGP2, Custom };

std::string to_string(DgpKind kind);
DgpKind parse_dgp(const std::string& name);

/// How xi_t and eta_t are drawn. Zero switches the noise off entirely and is
/// only meant for deterministic checks.
enum class InnovationMode { Standardized, Raw, Zero };

/// Conditional mean f(y_{t-1}, y_{t-2}, x_{t-1}).
using TargetFn = std::function<double(double y1, double y2, double x)>;

/// Nonlinear ARX-ARCH(1):
///   Y_t   = f(Y_{t-1}, Y_{t-2}, X_{t-1}) + eps_t
///   eps_t = xi_t * sqrt(phi0 + phi1 * eps_{t-1}^2)
///   X_t   = alpha0 + alpha1 * X_{t-1} + eta_t
struct DgpSpec {
    DgpKind kind = DgpKind::DGP1;
    TargetFn custom;  ///< used when kind == Custom
    double phi0 = 0.25;
    double phi1 = 0.1;
    double alpha0 = 0.5;
    double alpha1 = 0.5;
    double innovation_halfwidth = 2.0;
    std::size_t burn_in = 1000;
    InnovationMode innovations = InnovationMode::Standardized;

    static DgpSpec dgp1();
    static DgpSpec dgp2();

    /// Throws ConfigError or StabilityError (|alpha1| >= 1).
    void validate() const;
    std::string name() const;
};

struct Trajectory {
    std::vector<double> y;
    std::vector<double> cov;
    std::vector<double> eps;  ///< ARCH errors, kept for diagnostics
    RngSeed seed = 0;

    std::size_t size() const noexcept { return y.size(); }
};

/// U ~ Uniform[-a, a] rescaled to unit variance: U * sqrt(3) / a.
double std_uniform(double halfwidth, Rng& rng);

double target_f(DgpKind kind, double y1, double y2, double x);
double target_f(const DgpSpec& spec, double y1, double y2, double x);

/// AR(1) covariate started at its stationary mean; burn_in values discarded.
std::vector<double> simulate_covariate(const DgpSpec& spec, std::size_t n, Rng& rng);

/// Joint recursion from Y = eps = 0 and X at its stationary mean. Throws
/// DivergenceError on a non-finite value.
Trajectory simulate_arx_arch(const DgpSpec& spec, std::size_t n, Rng& rng);
Trajectory simulate_arx_arch(const DgpSpec& spec, std::size_t n, RngSeed seed);

/// Lipschitz coefficients of f in (y1, y2, x).
struct LipschitzCoefficients {
    double y1 = 0.0;
    double y2 = 0.0;
    double x = 0.0;
};

/// Analytic Lipschitz coefficients of the built-in targets.
LipschitzCoefficients target_lipschitz(DgpKind kind);

struct StabilityReport {
    double alpha1y_f = 0.0;
    double alpha2y_f = 0.0;
    double alpha1y_M = 0.0;
    double alpha2y_M = 0.0;
    double alpha1_cov = 0.0;
    double total = 0.0;
    bool stable = false;
};

/// max{alpha1, a1(f) + a1(M)} + a2(f) + a2(M) < 1 with
/// a1(M) = sqrt(phi1)(1 + a1(f)) and a2(M) = sqrt(phi1) a2(f).
StabilityReport check_stability(const DgpSpec& spec, const LipschitzCoefficients& lip);

/// Pairs ((Y_{t-1}, ..., Y_{t-lags}, X_{t-1}), Y_t) for t = lags+1 .. n.
SupervisedSet make_supervised(const Trajectory& traj, std::size_t lags = 2);

/// "# seed=<u64>" then "t,y,x".
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
/// Reads the output of write_trajectory_csv (eps is not stored and comes back
/// empty). Throws IngestionError.
Trajectory read_trajectory_csv(std::istream& in);

}  // namespace spdnn
