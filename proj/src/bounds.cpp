#include "spdnn/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "spdnn/errors.hpp"

namespace spdnn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

// K = C_1 - 2L(S+1) log(2M) - log(eta), the constant both thresholds compare against.
double threshold_constant(const BoundInputs& in) {
    return covering_constant(in) - 2.0 * in.L * (in.S + 1.0) * std::log(2.0 * in.M) - std::log(in.eta);
}

// Largest real n >= 1 with g(n) >= 1/2, or 0 if there is none. g must be
// decreasing on [peak, inf) with a limit below 1/2.
double last_violation(const std::function<double(double)>& g, double peak) {
    peak = std::max(peak, 1.0);
    if (g(peak) >= 0.5) {
        double lo = peak;
        double hi = peak * 2.0;
        while (g(hi) >= 0.5) {
            lo = hi;
            hi *= 2.0;
            if (!std::isfinite(hi)) return kInf;
        }
        for (int it = 0; it < 200; ++it) {
            const double mid = std::sqrt(lo) * std::sqrt(hi);
            if (!(mid > lo && mid < hi)) break;
            (g(mid) >= 0.5 ? lo : hi) = mid;
        }
        return lo;
    }
    // g may rise and fall below the peak; scan a log grid from the top down.
    constexpr int kSteps = 4096;
    const double log_peak = std::log(peak);
    double upper = peak;
    for (int k = kSteps - 1; k >= 0; --k) {
        const double n = std::exp(log_peak * static_cast<double>(k) / kSteps);
        if (g(n) >= 0.5) {
            double lo = n;
            double hi = upper;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (!(mid > lo && mid < hi)) break;
                (g(mid) >= 0.5 ? lo : hi) = mid;
            }
            return lo;
        }
        upper = n;
    }
    return 0.0;
}

SampleSizeThreshold finish(double n0, double n_min, double n) {
    SampleSizeThreshold t;
    t.n0 = std::isfinite(n0) ? std::floor(n0) : kInf;
    t.n_min = n_min;
    t.satisfied = n > t.value();
    return t;
}

}  // namespace

void BoundInputs::validate() const {
    if (!(n >= 1.0)) throw ArgumentError("bounds: n must be >= 1");
    if (!(eta > 0.0 && eta < 1.0)) throw ArgumentError("bounds: eta must lie in (0, 1)");
    if (!(nu0 > 0.0 && nu0 < 1.0)) throw ArgumentError("bounds: nu0 must lie in (0, 1)");
    if (!(M > 0.0)) throw ArgumentError("bounds: M must be > 0");
    if (!(theta_inf >= 0.0)) throw ArgumentError("bounds: theta_inf must be >= 0");
    if (!(G > 0.0)) throw ArgumentError("bounds: G must be > 0");
    if (!(C_sigma > 0.0)) throw ArgumentError("bounds: C_sigma must be > 0");
    if (!(L > 0.0 && N > 0.0 && B > 0.0 && S >= 0.0)) {
        throw ArgumentError("bounds: L, N, B must be > 0 and S >= 0");
    }
}

double SampleSizeThreshold::value() const { return std::max(n0, n_min); }

double covering_constant(const BoundInputs& in) {
    return 2.0 * in.L * (in.S + 1.0) *
           std::log(4.0 * in.G * in.C_sigma * in.L * (in.N + 1.0) * std::max(in.B, 1.0));
}

double log_covering_bound(const BoundInputs& in, double eps) {
    if (!(eps > 0.0)) throw ArgumentError("log_covering_bound: eps must be > 0");
    return 2.0 * in.L * (in.S + 1.0) *
           std::log(4.0 * in.G * in.C_sigma * in.L * (in.N + 1.0) * std::max(in.B, 1.0) / eps);
}

double concentration_bound(const BoundInputs& in, double eps) {
    in.validate();
    const double mt = in.M + in.theta_inf;
    const double log_bound = log_covering_bound(in, eps) - std::pow(in.n, in.nu0) * eps +
                             std::pow(in.n, 2.0 * in.nu0 - 1.0) * mt * mt / 2.0;
    return log_bound >= 0.0 ? 1.0 : std::exp(log_bound);
}

double phi(const BoundInputs& in, double eps) {
    const double mt = in.M + in.theta_inf;
    return 2.0 * in.L * (in.S + 1.0) * std::log(eps) + std::pow(in.n, in.nu0) * eps -
           std::pow(in.n, 2.0 * in.nu0 - 1.0) * mt * mt / 2.0 + std::log(in.eta) - covering_constant(in);
}

SampleSizeThreshold stated_threshold(const BoundInputs& in) {
    in.validate();
    const double mt = in.M + in.theta_inf;
    const double c = in.nu0 / 2.0;
    auto g = [&](double n) {
        return in.L * (in.S + 1.0) * in.nu0 * std::log(n) / (2.0 * in.M * std::pow(n, c)) +
               mt * mt / (4.0 * in.M * n);
    };
    const double n0 = last_violation(g, std::exp(1.0 / c));
    const double n_min = std::pow(positive_part(threshold_constant(in)) / in.M, 1.0 / (2.0 * in.nu0));
    return finish(n0, n_min, in.n);
}

SampleSizeThreshold corrected_threshold(const BoundInputs& in) {
    in.validate();
    const double mt = in.M + in.theta_inf;
    const double c = in.nu0 / 2.0;
    const double growth = 1.5 * in.nu0 - 1.0;
    const double n_min = std::pow(positive_part(threshold_constant(in)) / in.M, 2.0 / in.nu0);
    const double limit = growth < 0.0 ? 0.0 : mt * mt / (4.0 * in.M);
    if (growth > 0.0 || limit >= 0.5) return finish(kInf, n_min, in.n);
    auto g = [&](double n) {
        return in.L * (in.S + 1.0) * in.nu0 * std::log(n) / (2.0 * in.M * std::pow(n, c)) +
               std::pow(n, growth) * mt * mt / (4.0 * in.M);
    };
    const double n0 = last_violation(g, std::exp(1.0 / c));
    return finish(n0, n_min, in.n);
}

double generalization_epsilon_prime(const BoundInputs& in) {
    if (!(in.eta > 0.0 && in.eta <= 1.0)) throw ArgumentError("bounds: eta must lie in (0, 1]");
    const double mt = in.M + in.theta_inf;
    return mt * mt / (2.0 * std::pow(in.n, 1.0 - in.nu0)) + std::log(1.0 / in.eta) / std::pow(in.n, in.nu0);
}

GeneralizationBound generalization_epsilon(const BoundInputs& in) {
    in.validate();
    GeneralizationBound out;
    out.C1 = covering_constant(in);
    out.stated = stated_threshold(in);
    out.corrected = corrected_threshold(in);
    out.stated_cap = 2.0 * in.M / std::pow(in.n, in.nu0 / 2.0);
    if (!out.corrected.satisfied) {
        std::ostringstream msg;
        msg << "n = " << in.n << " is below the sample-size threshold: need n > max(n0 = " << out.corrected.n0
            << ", n_min = " << out.corrected.n_min << ")"
            << " (stated conditions: n0 = " << out.stated.n0 << ", n_min = " << out.stated.n_min
            << (out.stated.satisfied ? ", met" : ", not met") << ")";
        throw BelowThresholdError(msg.str(), out.corrected.n0, out.corrected.n_min);
    }

    double lo = 1e-300 * 2.0 * in.M;
    double hi = 2.0 * in.M;
    const double phi_hi = phi(in, hi);
    if (!(phi_hi > 0.0) || !(phi(in, lo) < 0.0)) {
        throw RootBracketError("phi has no sign change on (0, 2M]: phi(2M) = " + std::to_string(phi_hi));
    }
    for (int it = 0; it < 5000; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (!(mid > lo && mid < hi)) break;
        (phi(in, mid) < 0.0 ? lo : hi) = mid;
    }
    const double r_lo = phi(in, lo);
    const double r_hi = phi(in, hi);
    if (std::abs(r_lo) < std::abs(r_hi)) {
        out.eps1 = lo;
        out.phi_residual = r_lo;
    } else {
        out.eps1 = hi;
        out.phi_residual = r_hi;
    }
    out.eps_prime = generalization_epsilon_prime(in);
    return out;
}

std::string to_string(PsiKind kind) {
    switch (kind) {
        case PsiKind::Theta: return "theta";
        case PsiKind::Eta: return "eta";
        case PsiKind::Kappa: return "kappa";
        case PsiKind::Lambda: return "lambda";
    }
    return "theta";
}

PsiKind parse_psi(const std::string& name) {
    if (name == "theta") return PsiKind::Theta;
    if (name == "eta") return PsiKind::Eta;
    if (name == "kappa") return PsiKind::Kappa;
    if (name == "lambda") return PsiKind::Lambda;
    throw ConfigError("unknown dependence kind '" + name + "' (expected theta, eta, kappa or lambda)");
}

double psi_at_one(PsiKind kind) {
    switch (kind) {
        case PsiKind::Theta: return 2.0;   // 2v
        case PsiKind::Eta: return 2.0;     // u + v
        case PsiKind::Kappa: return 1.0;   // uv
        case PsiKind::Lambda: return 1.5;  // (u + v + uv)/2
    }
    return 2.0;
}

DependenceConstants dependence_constants(const DependenceParams& dep, double M) {
    const double psi = psi_at_one(dep.psi);
    return {4.0 * M * M * psi * dep.L1, 2.0 * M * dep.L2 * std::max(std::pow(2.0, 3.0 + dep.mu) / psi, 1.0)};
}

double rho_from_constants(double C1n, double C2n, double mu, double n) {
    if (!(C1n > 0.0 && C2n > 0.0 && mu >= 0.0 && n > 0.0)) {
        throw ArgumentError("rho_n: constants must be positive and mu >= 0");
    }
    const double base = C1n / (2.0 * std::pow(C2n, 1.0 / (mu + 2.0)));
    return std::pow(base, (mu + 2.0) / (2.0 * mu + 3.0)) / std::pow(n, (mu + 1.0) / (2.0 * mu + 3.0));
}

RhoResult rho_n_dependent(const DependenceParams& dep, double M, double n) {
    const DependenceConstants c = dependence_constants(dep, M);
    RhoResult r;
    r.C1n = c.C1n;
    r.C2n = c.C2n;
    r.exponent = (dep.mu + 1.0) / (2.0 * dep.mu + 3.0);
    r.rho = rho_from_constants(c.C1n, c.C2n, dep.mu, n);
    return r;
}

std::string to_string(Regime regime) { return regime == Regime::Power ? "thm3" : "thm4"; }

Regime parse_regime(const std::string& name) {
    if (name == "thm3") return Regime::Power;
    if (name == "thm4") return Regime::Dependent;
    throw ConfigError("unknown regime '" + name + "' (expected thm3 or thm4)");
}

RegimeReport check_regime(Regime regime, const ScheduleParams& p, const DependenceParams& dep) {
    RegimeReport r;
    auto require = [&r](bool ok, const std::string& what) {
        if (!ok) {
            r.valid = false;
            r.violations.push_back(what);
        }
    };
    require(p.nu1 > 0.0, "nu1 > 0");
    require(p.nu2 > 0.0, "nu2 > 0");
    require(p.nu3 > 0.0, "nu3 > 0");
    require(p.nu4 > 0.0, "nu4 > 0");
    require(p.K_ell > 0.0, "K_ell > 0");
    if (regime == Regime::Dependent) {
        require(dep.mu >= 0.0, "mu >= 0");
        require(p.nu1 + p.nu2 + p.nu4 < 1.0 / (dep.mu + 2.0), "nu1 + nu2 + nu4 < 1/(mu + 2)");
        require(p.C1n > 0.0 && p.C2n > 0.0, "C1n > 0 and C2n > 0");
    } else {
        require(p.nu5 > 0.0 && p.nu5 < 1.0, "0 < nu5 < 1");
        require(p.nu6 > 0.0, "nu6 > 0");
        require(p.nu4 + 2.0 * p.nu6 + p.nu1 + p.nu2 < p.nu5, "nu4 + 2 nu6 + nu1 + nu2 < nu5");
        require(p.nu6 < (1.0 - p.nu5) / 2.0, "nu6 < (1 - nu5)/2");
    }
    return r;
}

Schedule schedule(Regime regime, const ScheduleParams& p, const DependenceParams& dep, const ScheduleArch& arch,
                  double n) {
    if (!(n > 1.0)) throw ArgumentError("schedule: n must be > 1");
    if (!(arch.L > 0.0 && arch.N > 0.0 && arch.B > 0.0)) throw ArgumentError("schedule: L, N, B must be > 0");
    Schedule s;
    s.report = check_regime(regime, p, dep);
    if (!s.report.valid) {
        throw RegimeError(to_string(regime) + " exponent condition violated: " + s.report.violations.front());
    }
    s.lambda = p.lambda_multiplier * std::pow(std::log(n), p.nu3) / std::pow(n, p.nu4);
    s.rho = regime == Regime::Power ? 1.0 / std::pow(n, 2.0 * p.nu6)
                                       : rho_from_constants(p.C1n, p.C2n, dep.mu, n);
    const double log_tau = std::log(s.rho) - std::log(4.0 * p.K_ell) - std::log(arch.L + 1.0) -
                           (arch.L + 1.0) * std::log((arch.N + 1.0) * arch.B);
    s.tau_max = std::exp(log_tau);
    return s;
}

HolderRate holder_rate(double s, double d, double nu3, double nu4, double nu6) {
    if (!(s > 0.0)) throw ArgumentError("holder_rate: smoothness must be > 0");
    if (!(d >= 1.0)) throw ArgumentError("holder_rate: dimension must be >= 1");
    HolderRate r;
    const double ratio = 1.0 + d / s;
    r.mean_exponent = nu4 / ratio;
    r.penalty_exponent = 2.0 * nu6;
    r.exponent = std::min(r.mean_exponent, r.penalty_exponent);
    r.nu1 = d * nu4 / (s * ratio);
    r.nu2 = 4.0 * d * nu4 / ((s + 1.0) * ratio);
    std::ostringstream os;
    os << "(log n)^" << (nu3 + 1.0) << " / n^" << r.mean_exponent << " v 1 / n^" << r.penalty_exponent;
    r.rate = os.str();
    return r;
}

}  // namespace spdnn
