#pragma once

#include <string>
#include <vector>

namespace spdnn {

/// Constants entering the concentration and generalization bounds over the
/// sparse class H(L, N, B, F, S).
struct BoundInputs {
    double n = 1000.0;
    double eta = 0.05;       ///< confidence level, in (0, 1)
    double nu0 = 0.5;        ///< in (0, 1)
    double M = 1.0;          ///< loss bound
    double theta_inf = 0.0;  ///< bound on theta_{inf,n}(1)
    double G = 1.0;          ///< Lipschitz constant of h -> ell(h, .)
    double C_sigma = 1.0;    ///< activation Lipschitz constant
    double L = 2.0;          ///< depth
    double N = 100.0;        ///< width
    double B = 1.0;          ///< weight bound
    double S = 100.0;        ///< sparsity

    /// Throws ArgumentError.
    void validate() const;
};

/// 2L(S+1) log(4 G C_sigma L (N+1) max(B,1) / eps). May be negative.
double log_covering_bound(const BoundInputs& in, double eps);

/// min(1, N(H, eps/4G) exp(-n^nu0 eps + n^{2nu0-1}(M+theta)^2/2)).
double concentration_bound(const BoundInputs& in, double eps);

/// C_1 = 2L(S+1) log(4 G C_sigma L (N+1) max(B,1)).
double covering_constant(const BoundInputs& in);

/// phi(eps) = 2L(S+1) log eps + n^nu0 eps - n^{2nu0-1}(M+theta)^2/2 + log eta - C_1.
/// Strictly increasing; its root is the generalization threshold.
double phi(const BoundInputs& in, double eps);

/// Sample-size threshold: the bound holds for n > max(n0, n_min).
struct SampleSizeThreshold {
    double n0 = 0.0;     ///< last n at which the vanishing-term condition fails (+inf if it never settles)
    double n_min = 0.0;  ///< explicit power-law threshold
    bool satisfied = false;

    double value() const;
};

/// Conditions in their originally displayed form:
///   L(S+1) nu0 log n / (2M n^{nu0/2}) + (M+theta)^2/(4Mn) < 1/2 for n > n0, and
///   n > ((C_1 - 2L(S+1) log 2M - log eta)_+ / M)^{1/(2 nu0)}.
/// These do not by themselves imply eps1 < 2M/n^{nu0/2}; see corrected_threshold.
SampleSizeThreshold stated_threshold(const BoundInputs& in);

/// Conditions under which phi(2M/n^{nu0/2}) > 0 actually follows:
///   L(S+1) nu0 log n / (2M n^{nu0/2}) + n^{3nu0/2-1}(M+theta)^2/(4M) < 1/2 for n > n0, and
///   n > ((C_1 - 2L(S+1) log 2M - log eta)_+ / M)^{2/nu0}.
/// For nu0 > 2/3 no finite n0 exists.
SampleSizeThreshold corrected_threshold(const BoundInputs& in);

struct GeneralizationBound {
    double eps1 = 0.0;        ///< root of phi in (0, 2M)
    double eps_prime = 0.0;   ///< (M+theta)^2/(2 n^{1-nu0}) + log(1/eta)/n^{nu0}
    double phi_residual = 0.0;
    double stated_cap = 0.0;  ///< 2M / n^{nu0/2}
    double C1 = 0.0;
    SampleSizeThreshold stated;
    SampleSizeThreshold corrected;
};

/// Root of phi by bisection down to adjacent doubles, and the closed-form
/// eps'. Requires n above the corrected threshold (BelowThresholdError
/// otherwise, naming the thresholds); RootBracketError if phi(2M) <= 0.
GeneralizationBound generalization_epsilon(const BoundInputs& in);

/// eps' alone; valid for any n.
double generalization_epsilon_prime(const BoundInputs& in);

enum class PsiKind { Theta, Eta, Kappa, Lambda };

std::string to_string(PsiKind kind);
PsiKind parse_psi(const std::string& name);

/// Psi(1, 1) for the four weak-dependence choices: 2, 2, 1, 3/2.
double psi_at_one(PsiKind kind);

struct DependenceParams {
    PsiKind psi = PsiKind::Theta;
    double L1 = 1.0;
    double L2 = 1.0;
    double mu = 0.0;
};

struct DependenceConstants {
    double C1n = 0.0;  ///< 4 M^2 Psi(1,1) L1
    double C2n = 0.0;  ///< 2 M L2 max(2^{3+mu}/Psi(1,1), 1)
};

DependenceConstants dependence_constants(const DependenceParams& dep, double M);

struct RhoResult {
    double rho = 0.0;
    double exponent = 0.0;  ///< (mu+1)/(2mu+3)
    double C1n = 0.0;
    double C2n = 0.0;
};

/// (C1/(2 C2^{1/(mu+2)}))^{(mu+2)/(2mu+3)} / n^{(mu+1)/(2mu+3)}.
double rho_from_constants(double C1n, double C2n, double mu, double n);
RhoResult rho_n_dependent(const DependenceParams& dep, double M, double n);

/// Power: rho_n = n^{-2 nu6}. Dependent: rho_n from the weak-dependence constants ("thm3" / "thm4" on the CLI).
enum class Regime { Power, Dependent };

std::string to_string(Regime regime);
Regime parse_regime(const std::string& name);

struct ScheduleParams {
    double nu1 = 0.05;
    double nu2 = 0.05;
    double nu3 = 1.0;
    double nu4 = 0.1;
    double nu5 = 0.5;
    double nu6 = 0.1;
    double K_ell = 1.0;
    double C1n = 1.0;
    double C2n = 1.0;
    /// Proportionality constant in lambda_n = c (log n)^{nu3} / n^{nu4}.
    double lambda_multiplier = 1.0;
};

/// Network-size constants L_n, N_n, B_n entering tau_n.
struct ScheduleArch {
    double L = 2.0;
    double N = 100.0;
    double B = 1.0;
};

struct RegimeReport {
    bool valid = true;
    std::vector<std::string> violations;
};

RegimeReport check_regime(Regime regime, const ScheduleParams& params, const DependenceParams& dep);

struct Schedule {
    double lambda = 0.0;
    double tau_max = 0.0;
    double rho = 0.0;
    RegimeReport report;
};

/// lambda_n = (log n)^{nu3}/n^{nu4}; rho_n = 1/n^{2 nu6} (Power) or the
/// dependence-based expression from params.C1n / params.C2n (Dependent);
/// tau_max = rho_n / (4 K (L+1) ((N+1) B)^{L+1}).
/// Throws RegimeError naming the first violated exponent inequality.
Schedule schedule(Regime regime, const ScheduleParams& params, const DependenceParams& dep,
                  const ScheduleArch& arch, double n);

struct HolderRate {
    double mean_exponent = 0.0;     ///< nu4 / (1 + d/s)
    double penalty_exponent = 0.0;  ///< 2 nu6
    double exponent = 0.0;          ///< min of the two: the slower term dominates
    double nu1 = 0.0;               ///< d nu4 / (s (1 + d/s))
    double nu2 = 0.0;               ///< 4 d nu4 / ((s+1)(1 + d/s))
    std::string rate;
};

/// Excess-risk rate for a target in a Hoelder ball of smoothness s on R^d.
HolderRate holder_rate(double s, double d, double nu3, double nu4, double nu6);

}  // namespace spdnn
