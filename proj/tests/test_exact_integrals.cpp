#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

#include "reference_values.hpp"
#include "yamabe/exact_integrals.hpp"

using namespace yamabe;

namespace {

double half_line_numeric(int alpha, int m) {
    boost::math::quadrature::exp_sinh<double> integrator;
    auto f = [&](double s) {
        if (s == 0.0) return alpha == 0 ? 1.0 : 0.0;
        return std::exp(alpha * std::log(s) - m * std::log1p(s * s));
    };
    return integrator.integrate(f);
}

}  // namespace

TEST(HalfLine, BaseValues) {
    EXPECT_EQ(j_normal_form(0, 1).q, Rational(1));
    EXPECT_EQ(j_normal_form(0, 1).parity, 0);
    EXPECT_EQ(j_normal_form(1, 2).q, Rational(1));
    EXPECT_EQ(j_normal_form(1, 2).parity, 1);
    EXPECT_DOUBLE_EQ(half_line_value(0, 1), std::numbers::pi / 2);
    EXPECT_DOUBLE_EQ(half_line_value(1, 2), 0.5);
}

TEST(HalfLine, RecurrenceMatchesBetaFunction) {
    // J(alpha, m) = B((alpha + 1)/2, m - (alpha + 1)/2) / 2.
    for (int alpha = 0; alpha <= 14; ++alpha)
        for (int m = 1; m <= 12; ++m) {
            if (!half_line_convergent(alpha, m)) continue;
            const double a = 0.5 * (alpha + 1);
            const double beta = 0.5 * boost::math::beta(a, m - a);
            EXPECT_NEAR(half_line_value(alpha, m), beta, 1e-13 * beta) << alpha << "," << m;
        }
}

TEST(HalfLine, MatchesIndependentQuadrature) {
    for (int n = 6; n <= 9; ++n) {
        EXPECT_NEAR(I_value(n), half_line_numeric(n, n), 1e-12);
        EXPECT_NEAR(half_line_value(n - 2, n - 1), half_line_numeric(n - 2, n - 1), 1e-12);
    }
}

TEST(HalfLine, ParityMismatchAndDivergence) {
    EXPECT_THROW(half_line_ratio(2, 4, 3, 4), ParityMismatch);
    EXPECT_THROW(j_normal_form(5, 3), DivergentIntegral);
    EXPECT_NO_THROW(half_line_ratio(4, 6, 6, 6));
}

TEST(UnitLine, ClosedFormAndDivergenceKind) {
    EXPECT_EQ(unit_interval_power_integral(0, 2), Rational(1));
    EXPECT_EQ(unit_interval_power_integral(2, 4), Rational(2, 6));
    try {
        unit_interval_power_integral(2, 3);
        FAIL() << "expected a logarithmic divergence";
    } catch (const DivergentIntegral& e) {
        EXPECT_TRUE(e.logarithmic());
    }
    try {
        unit_interval_power_integral(3, 3);
        FAIL() << "expected a power divergence";
    } catch (const DivergentIntegral& e) {
        EXPECT_FALSE(e.logarithmic());
    }
}

TEST(SphereArea, MatchesGammaFormula) {
    for (int k = 0; k <= 10; ++k) {
        const double expected = 2.0 * std::pow(std::numbers::pi, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
        EXPECT_NEAR(sphere_area(k), expected, 1e-13 * expected) << k;
    }
}

TEST(ExpansionIntegrals, FiniteCaseMatchesDisplayedFormulas) {
    for (int n : {7, 8, 9, 10}) {
        const auto table = expansion_integrals(n);
        ASSERT_EQ(table.size(), 6u);
        for (int k = 1; k <= 6; ++k) {
            const auto& v = table[static_cast<std::size_t>(k - 1)].value;
            EXPECT_FALSE(v.log_flag());
            EXPECT_EQ(v.sigma_pow(), 1);
            EXPECT_EQ(v.I_pow(), 1);
            EXPECT_EQ(v.q(), reference::finite_integral(k, n)) << "I" << k << " n=" << n;
        }
    }
}

TEST(ExpansionIntegrals, SixDimensionalLogCoefficients) {
    const auto table = expansion_integrals(6);
    for (int k = 1; k <= 6; ++k) {
        const auto& e = table[static_cast<std::size_t>(k - 1)];
        EXPECT_EQ(e.value.q(), reference::log_coefficient_n6(k)) << "I" << k;
        EXPECT_EQ(e.bounded, k == 2) << "I" << k;
        if (k != 2) EXPECT_TRUE(e.value.log_flag());
    }
}

TEST(ExpansionIntegrals, RefusedBelowSix) { EXPECT_THROW(expansion_integrals(5), std::invalid_argument); }

TEST(HalfspaceClosedForm, DivergenceClassification) {
    IntegralSpec log_spec{2, 4, 6, 6};
    EXPECT_TRUE(log_spec.log_divergent());
    EXPECT_TRUE(halfspace_closed_form(log_spec).log_flag());
    IntegralSpec power_spec{4, 4, 6, 6};
    EXPECT_THROW(halfspace_closed_form(power_spec), DivergentIntegral);
    IntegralSpec radial_spec{0, 8, 3, 6};
    EXPECT_THROW(halfspace_closed_form(radial_spec), DivergentIntegral);
    IntegralSpec convergent{2, 4, 7, 7};
    EXPECT_TRUE(log_coefficient(convergent).is_zero());
}

TEST(HalfspaceClosedForm, SigmaIsTheOnlyTranscendentalFactor) {
    // Every member of the family is a rational multiple of sigma I.
    for (int n = 6; n <= 8; ++n)
        for (int a = 0; a <= 4; ++a)
            for (int b = 0; b <= 4; b += 2)
                for (int c = n - 2; c <= n + 1; ++c) {
                    IntegralSpec s{a, b, c, n};
                    if (!s.convergent()) continue;
                    const auto v = halfspace_closed_form(s);
                    EXPECT_EQ(v.sigma_pow(), 1);
                    EXPECT_EQ(v.I_pow(), 1);
                }
}
