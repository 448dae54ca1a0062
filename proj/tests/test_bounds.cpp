#include <doctest.h>

#include <cmath>

#include "spdnn/bounds.hpp"
#include "spdnn/errors.hpp"

using namespace spdnn;

namespace {

BoundInputs small_class() {
    BoundInputs in;
    in.L = 1.0;
    in.N = 2.0;
    in.S = 2.0;
    in.B = 1.0;
    in.nu0 = 0.5;
    in.M = 1.0;
    in.eta = 0.05;
    in.n = 1e6;
    return in;
}

}  // namespace

TEST_CASE("covering number") {
    BoundInputs in;
    in.L = 1.0;
    in.S = 1.0;
    in.N = 1.0;
    in.B = 0.5;  // max(B, 1) = 1
    CHECK(log_covering_bound(in, 4.0) == doctest::Approx(4.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(log_covering_bound(in, 4.0) == doctest::Approx(2.772589).epsilon(1e-6));
    CHECK(std::abs(log_covering_bound(in, 8.0)) < 1e-14);
    CHECK(log_covering_bound(in, 16.0) < 0.0);
    CHECK(covering_constant(in) == doctest::Approx(4.0 * std::log(8.0)));
    CHECK_THROWS_AS(log_covering_bound(in, 0.0), ArgumentError);
}

TEST_CASE("concentration bound") {
    BoundInputs in = small_class();
    in.n = 1000.0;
    in.theta_inf = 0.3;
    for (double eps : {1e-3, 0.01, 0.1, 0.5, 1.0, 2.0}) {
        // Oracle: evaluate the exponent directly.
        const double mt = in.M + in.theta_inf;
        const double covering = 2.0 * in.L * (in.S + 1.0) *
                                std::log(4.0 * in.G * in.C_sigma * in.L * (in.N + 1.0) / (eps / 1.0));
        const double e = covering - std::pow(in.n, in.nu0) * eps + std::pow(in.n, 2 * in.nu0 - 1) * mt * mt / 2.0;
        const double expect = std::min(1.0, std::exp(e));
        const double got = concentration_bound(in, eps);
        CHECK(got == doctest::Approx(expect).epsilon(1e-12));
        CHECK(got >= 0.0);
        CHECK(got <= 1.0);
    }
    double prev = 1.0;
    for (double eps = 0.01; eps < 3.0; eps += 0.01) {
        const double b = concentration_bound(in, eps);
        CHECK(b <= prev);
        prev = b;
    }
}

TEST_CASE("phi is strictly increasing") {
    const BoundInputs in = small_class();
    double prev = phi(in, 1e-12);
    for (double eps = 1e-11; eps < 2.0; eps *= 1.5) {
        const double v = phi(in, eps);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("generalization epsilon above the threshold") {
    for (double n : {1e5, 1e6, 1e8}) {
        BoundInputs in = small_class();
        in.n = n;
        const GeneralizationBound g = generalization_epsilon(in);
        CHECK(g.corrected.satisfied);
        CHECK(std::abs(g.phi_residual) <= 1e-10);
        CHECK(std::abs(phi(in, g.eps1)) <= 1e-10);
        CHECK(g.eps1 > 0.0);
        CHECK(g.eps1 < g.stated_cap);
        CHECK(g.stated_cap == doctest::Approx(2.0 / std::pow(n, 0.25)));
        CHECK(g.eps_prime == doctest::Approx(1.0 / (2.0 * std::sqrt(n)) + std::log(20.0) / std::sqrt(n)));
    }
}

TEST_CASE("eps prime") {
    BoundInputs in;
    in.n = 100.0;
    in.nu0 = 0.5;
    in.M = 1.0;
    in.theta_inf = 1.0;
    in.eta = 1.0;
    CHECK(generalization_epsilon_prime(in) == doctest::Approx(4.0 / 20.0));
    in.eta = 0.0;
    CHECK_THROWS_AS(generalization_epsilon_prime(in), ArgumentError);
}

TEST_CASE("below the threshold") {
    BoundInputs in = small_class();
    in.n = 10.0;
    try {
        generalization_epsilon(in);
        FAIL("expected BelowThresholdError");
    } catch (const BelowThresholdError& e) {
        CHECK(std::string(e.what()).find("n0") != std::string::npos);
        CHECK(std::string(e.what()).find("n_min") != std::string::npos);
    }
    in.nu0 = 0.9;  // the n^{3nu0/2 - 1} term grows: no finite threshold
    in.n = 1e12;
    CHECK(std::isinf(corrected_threshold(in).n0));
    CHECK_THROWS_AS(generalization_epsilon(in), BelowThresholdError);
    in.nu0 = 1.5;
    CHECK_THROWS_AS(generalization_epsilon(in), ArgumentError);
}

TEST_CASE("corrected threshold implies the cap; the displayed one need not") {
    int corrected_points = 0;
    int stated_defects = 0;
    for (double n : {1e2, 1e3, 1e4, 1e5, 1e6, 1e8}) {
        for (double nu0 : {0.1, 0.3, 0.5, 0.6}) {
            for (double M : {0.5, 1.0, 5.0}) {
                BoundInputs in = small_class();
                in.n = n;
                in.nu0 = nu0;
                in.M = M;
                const double cap = 2.0 * M / std::pow(n, nu0 / 2.0);
                if (stated_threshold(in).satisfied && !(phi(in, cap) > 0.0)) ++stated_defects;
                if (!corrected_threshold(in).satisfied) continue;
                ++corrected_points;
                const GeneralizationBound g = generalization_epsilon(in);
                CHECK(g.eps1 < cap);
                CHECK(std::abs(g.phi_residual) <= 1e-10);
            }
        }
    }
    CHECK(corrected_points > 0);
    CHECK(stated_defects > 0);
}

TEST_CASE("threshold n0 is the last violation") {
    const BoundInputs in = small_class();
    const SampleSizeThreshold t = corrected_threshold(in);
    REQUIRE(std::isfinite(t.n0));
    const double mt = in.M + in.theta_inf;
    auto g = [&](double n) {
        return in.L * (in.S + 1.0) * in.nu0 * std::log(n) / (2.0 * in.M * std::pow(n, in.nu0 / 2.0)) +
               std::pow(n, 1.5 * in.nu0 - 1.0) * mt * mt / (4.0 * in.M);
    };
    for (double n = t.n0 + 1.0; n < 1e7; n *= 1.1) CHECK(g(n) < 0.5);
    if (t.n0 >= 1.0) CHECK(g(t.n0) >= 0.5 - 1e-9);
}

TEST_CASE("dependence constants and rho") {
    CHECK(psi_at_one(PsiKind::Theta) == 2.0);
    CHECK(psi_at_one(PsiKind::Eta) == 2.0);
    CHECK(psi_at_one(PsiKind::Kappa) == 1.0);
    CHECK(psi_at_one(PsiKind::Lambda) == 1.5);
    CHECK(parse_psi("kappa") == PsiKind::Kappa);
    CHECK_THROWS_AS(parse_psi("alpha"), ConfigError);

    DependenceParams dep;
    const DependenceConstants c = dependence_constants(dep, 1.0);
    CHECK(c.C1n == 8.0);
    CHECK(c.C2n == 8.0);

    CHECK(rho_from_constants(2.0, 2.0, 0.0, 1000.0) == doctest::Approx(0.079370).epsilon(1e-5));
    const double oracle = std::cbrt(std::pow(2.0 / (2.0 * std::sqrt(2.0)), 2.0)) / 10.0;
    CHECK(std::abs(rho_from_constants(2.0, 2.0, 0.0, 1000.0) - oracle) < 1e-12);
    CHECK(rho_n_dependent(dep, 1.0, 1000.0).exponent == 1.0 / 3.0);
    dep.mu = 1.0;
    CHECK(rho_n_dependent(dep, 1.0, 1000.0).exponent == doctest::Approx(0.4));
    // The exponent approaches 1/2 from below as mu grows.
    dep.mu = 1e6;
    CHECK(rho_n_dependent(dep, 1.0, 10.0).exponent < 0.5);
    CHECK_THROWS_AS(rho_from_constants(0.0, 1.0, 0.0, 10.0), ArgumentError);
}

TEST_CASE("schedules") {
    ScheduleParams p;
    p.nu1 = 0.05;
    p.nu2 = 0.05;
    p.nu4 = 0.1;
    p.nu5 = 0.5;
    p.nu6 = 0.1;
    const DependenceParams dep;
    const ScheduleArch arch;
    const Schedule s = schedule(Regime::Power, p, dep, arch, 1e4);
    CHECK(s.rho == doctest::Approx(0.158489).epsilon(1e-6));
    const double tau = s.rho / (4.0 * p.K_ell * (arch.L + 1.0) * std::pow((arch.N + 1.0) * arch.B, arch.L + 1.0));
    CHECK(s.tau_max == doctest::Approx(tau).epsilon(1e-12));
    CHECK(s.report.valid);

    ScheduleParams q = p;
    q.nu3 = 1.0;
    q.nu4 = 1.0;
    q.nu5 = 0.9;
    q.nu6 = 0.01;
    q.nu1 = q.nu2 = 0.01;
    // nu4 + 2 nu6 + nu1 + nu2 > nu5.
    CHECK_THROWS_AS(schedule(Regime::Power, q, dep, arch, std::exp(1.0)), RegimeError);
    q.nu4 = 0.3;
    q.C1n = q.C2n = 2.0;
    const Schedule t4 = schedule(Regime::Dependent, q, dep, arch, 1000.0);
    CHECK(t4.rho == doctest::Approx(0.079370).epsilon(1e-5));

    ScheduleParams l = p;
    l.nu3 = 1.0;
    l.nu4 = 1.0;
    l.nu5 = 0.99;
    l.nu6 = 0.001;
    l.nu1 = l.nu2 = -1e-3;
    CHECK_THROWS_AS(schedule(Regime::Power, l, dep, arch, std::exp(1.0)), RegimeError);
    l.nu1 = l.nu2 = 1e-3;
    l.nu4 = 0.9;
    l.nu3 = 1.0;
    const Schedule e = schedule(Regime::Power, l, dep, arch, std::exp(1.0));
    CHECK(e.lambda == doctest::Approx(std::exp(-0.9)));
    CHECK_THROWS_AS(schedule(Regime::Power, p, dep, arch, 1.0), ArgumentError);

    const RegimeReport bad = check_regime(Regime::Dependent, q, DependenceParams{PsiKind::Theta, 1, 1, 5.0});
    CHECK_FALSE(bad.valid);
    CHECK(bad.violations.front() == "nu1 + nu2 + nu4 < 1/(mu + 2)");
}

TEST_CASE("lambda schedule at n = e") {
    ScheduleParams p;
    p.nu1 = p.nu2 = 0.01;
    p.nu3 = 1.0;
    p.nu4 = 0.2;
    p.C1n = p.C2n = 1.0;
    // thm4 with mu = 0: nu1 + nu2 + nu4 = 0.22 < 1/2.
    const Schedule s = schedule(Regime::Dependent, p, DependenceParams{}, ScheduleArch{}, std::exp(1.0));
    CHECK(s.lambda == doctest::Approx(std::exp(-0.2)).epsilon(1e-12));
    p.lambda_multiplier = 3.0;
    CHECK(schedule(Regime::Dependent, p, DependenceParams{}, ScheduleArch{}, std::exp(1.0)).lambda ==
          doctest::Approx(3.0 * std::exp(-0.2)).epsilon(1e-12));
}

TEST_CASE("Hoelder rates") {
    const HolderRate r = holder_rate(3.0, 3.0, 1.0, 0.5, 0.2);
    CHECK(r.mean_exponent == doctest::Approx(0.25));
    CHECK(r.nu1 == doctest::Approx(0.25));
    CHECK(r.nu2 == doctest::Approx(4.0 * 3.0 * 0.5 / (4.0 * 2.0)));
    CHECK(r.exponent == doctest::Approx(0.25));
    for (double d : {1.0, 2.0, 5.0}) CHECK(holder_rate(d, d, 1.0, 0.4, 1.0).mean_exponent == doctest::Approx(0.2));
    CHECK(holder_rate(1.0, 1.0, 1.0, 0.4, 0.05).exponent == doctest::Approx(0.1));
    CHECK_THROWS_AS(holder_rate(0.0, 1.0, 1.0, 0.4, 0.1), ArgumentError);
}
