#include <gtest/gtest.h>

#include <cmath>

#include "yamabe/energy_expansion.hpp"
#include "yamabe/exact_integrals.hpp"
#include "yamabe/quadrature.hpp"

using namespace yamabe;

namespace {

/// int_{B_R} x^alpha over the full ball in R^d (alpha all even).
double ball_monomial(const std::vector<int>& alpha, double R) {
    const int d = static_cast<int>(alpha.size());
    double num = 1.0;
    int total = 0;
    for (int a : alpha) {
        for (int k = a - 1; k > 0; k -= 2) num *= k;
        total += a;
    }
    double den = 1.0;
    for (int k = 0; k < total; k += 2) den *= d + k;
    return num / den * sphere_area(d - 1) * std::pow(R, d + total) / (d + total);
}

double monomial(std::span<const double> x, const std::vector<int>& alpha) {
    double v = 1.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) v *= std::pow(x[i], alpha[i]);
    return v;
}

}  // namespace

TEST(Reduced2d, FiniteIntegralsMatchClosedForms) {
    for (int n : {7, 8})
        for (const auto& e : expansion_integrals(n)) {
            const double exact = e.value.to_double(sphere_area(n - 2), I_value(n));
            const Estimate q = reduced_2d(e.spec);
            EXPECT_NEAR(q.value, exact, 1e-9 * std::abs(exact)) << e.name << " n=" << n;
        }
}

TEST(Reduced2d, ErrorEstimatesAreHonest) {
    // Twenty convergent members of the family with known closed forms.
    int covered = 0, total = 0;
    for (int n : {7, 8, 9, 10})
        for (int a = 0; a <= 2; ++a)
            for (int b : {0, 2}) {
                IntegralSpec s{a, b, n, n};
                if (!s.convergent() || total >= 20) continue;
                const double exact = halfspace_closed_form(s).to_double(sphere_area(n - 2), I_value(n));
                QuadratureConfig cfg;
                cfg.rel_tol = 1e-8;
                const Estimate q = reduced_2d(s, cfg);
                ++total;
                if (std::abs(q.value - exact) <= q.error + 1e-15 * std::abs(exact)) ++covered;
            }
    ASSERT_GE(total, 20);
    EXPECT_GE(covered, 19);
}

TEST(Reduced2d, LogSlopesForSixDimensions) {
    const double sigmaI = sphere_area(4) * I_value(6);
    for (const auto& e : expansion_integrals(6)) {
        const LogFit f = reduced_2d_log_fit(e.spec, {1e2, 1e3, 1e4});
        const double expected = e.value.is_zero() ? 0.0 : e.value.to_double(sphere_area(4), I_value(6));
        EXPECT_NEAR(f.slope, expected, 1e-2 * std::max(std::abs(expected), sigmaI)) << e.name;
    }
}

TEST(FitLog, RecoversExactModel) {
    std::vector<double> L{10, 100, 1000, 10000}, v;
    for (double x : L) v.push_back(2.5 * std::log(x) - 1.0 + 3.0 / x);
    const LogFit three = fit_log(L, v, true);
    EXPECT_NEAR(three.slope, 2.5, 1e-9);
    EXPECT_NEAR(three.intercept, -1.0, 1e-8);
    EXPECT_NEAR(three.inverse, 3.0, 1e-7);
    EXPECT_THROW(fit_log({10.0}, {1.0}), std::invalid_argument);
}

TEST(BallQmc, HalfBallVolume) {
    QuadratureConfig cfg;
    cfg.mc_samples = 1 << 16;
    for (int d : {3, 6, 8}) {
        const Estimate e = ball_qmc([](std::span<const double>) { return 1.0; }, d, 1.5, true, cfg);
        const double exact = 0.5 * sphere_area(d - 1) * std::pow(1.5, d) / d;
        EXPECT_NEAR(e.value, exact, std::max(3.0 * e.error, 1e-3 * exact)) << d;
    }
}

TEST(BallQmc, ZeroIntegrand) {
    const Estimate e = ball_qmc([](std::span<const double>) { return 0.0; }, 5, 1.0, true);
    EXPECT_EQ(e.value, 0.0);
    EXPECT_EQ(e.error, 0.0);
}

TEST(BallQmc, ErrorEstimatesCoverTheTruth) {
    // Twenty even monomials over full and half balls, with and without warps.
    const std::vector<std::vector<int>> alphas{{2, 0, 0}, {2, 2, 0}, {0, 0, 4}, {4, 2, 0}, {2, 2, 2},
                                               {2, 0, 0, 0, 0, 0}, {0, 2, 2, 0, 0, 0}, {0, 0, 0, 0, 0, 4},
                                               {2, 2, 0, 0, 0, 0, 2}, {0, 0, 0, 0, 0, 0, 2}};
    int covered = 0, total = 0;
    for (const auto& alpha : alphas)
        for (bool half : {false, true}) {
            QuadratureConfig cfg;
            cfg.mc_samples = 40000;
            cfg.seed = static_cast<std::uint64_t>(total + 1);
            cfg.radial_scale = half ? 0.5 : 0.0;
            cfg.symmetrize = half;
            const int d = static_cast<int>(alpha.size());
            const Estimate e = ball_qmc([&](std::span<const double> x) { return monomial(x, alpha); }, d, 1.2, half, cfg);
            const double exact = ball_monomial(alpha, 1.2) * (half ? 0.5 : 1.0);
            ++total;
            if (std::abs(e.value - exact) <= 3.0 * e.error) ++covered;
        }
    EXPECT_EQ(total, 20);
    EXPECT_GE(covered, 19);
}

TEST(BallQmc, DeterministicForFixedSeed) {
    QuadratureConfig cfg;
    cfg.mc_samples = 20000;
    cfg.seed = 99;
    cfg.symmetrize = true;
    cfg.radial_scale = 0.1;
    auto f = [](std::span<const double> x) { return std::exp(-x[0] * x[0]) * (1.0 + x[3]); };
    const Estimate a = ball_qmc(f, 5, 1.0, true, cfg);
    const Estimate b = ball_qmc(f, 5, 1.0, true, cfg);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.error, b.error);
    cfg.seed = 100;
    EXPECT_NE(ball_qmc(f, 5, 1.0, true, cfg).value, a.value);
}

TEST(SphereMc, RejectsTooFewSamples) {
    QuadratureConfig cfg;
    cfg.mc_samples = 1;
    EXPECT_THROW(sphere_mc([](std::span<const double>) { return 1.0; }, 3, 1.0, cfg), std::invalid_argument);
}
