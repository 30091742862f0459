#include <gtest/gtest.h>

#include <cmath>

#include "yamabe/bubble.hpp"
#include "yamabe/curvature.hpp"
#include "yamabe/discrete_quotient.hpp"

using namespace yamabe;

namespace {

QuotientConfig small_config(const BoundaryCurvature<Rational>& c, std::size_t samples) {
    auto cfg = default_quotient_config(to_double(c));
    cfg.sampler.mc_samples = samples;
    cfg.sampler.replicates = 8;
    return cfg;
}

BoundaryCurvature<Rational> curved_instance(int n, unsigned seed) {
    RandomCurvatureOptions ro;
    ro.anisotropic_jets = false;
    return random_admissible(n, seed, rat(1, 10), ro);
}

}  // namespace

TEST(QuotientConfig, RejectsEpsAboveDeltaOverEight) {
    auto cfg = small_config(zero_curvature<Rational>(7), 1000);
    cfg.eps_list = {cfg.delta / 4};
    EXPECT_THROW(cfg.validate_config(), std::invalid_argument);
    cfg.eps_list = {0.0};
    EXPECT_THROW(cfg.validate_config(), std::invalid_argument);
    cfg.eps_list = {cfg.delta / 8};
    EXPECT_NO_THROW(cfg.validate_config());
    cfg.jet_order = 5;
    EXPECT_THROW(cfg.validate_config(), UnsupportedOrder);
}

TEST(QuotientConfig, MismatchedDimension) {
    auto cfg = small_config(zero_curvature<Rational>(7), 1000);
    cfg.n = 8;
    EXPECT_THROW(cfg.validate_config(), std::invalid_argument);
}

TEST(Sweep, EmptyEpsListGivesEmptyTable) {
    auto cfg = small_config(curved_instance(7, 1), 1000);
    cfg.eps_list.clear();
    const SweepTable t = sweep(cfg);
    EXPECT_TRUE(t.rows.empty());
    EXPECT_TRUE(t.fits.empty());
    EXPECT_TRUE(t.curved);
    EXPECT_FALSE(t.monotone_improvement);
}

TEST(Quotient, FlatDataIgnoresTheCorrection) {
    auto cfg = small_config(zero_curvature<Rational>(7), 20000);
    const EnergyParts parts = evaluate_energy_parts(cfg, cfg.delta / 16);
    EXPECT_EQ(parts.energy(1.0).value, parts.energy(0.0).value);
    EXPECT_EQ(parts.drop(1.0).value, 0.0);
}

TEST(Quotient, FlatQuotientApproachesSharpConstant) {
    for (int n : {6, 7, 8}) {
        auto cfg = default_quotient_config(to_double(zero_curvature<Rational>(n)));
        const Estimate q = evaluate_quotient(cfg, 0.0, cfg.delta / 32);
        const double K = sharp_constant(n).value;
        EXPECT_NEAR(q.value, K, 0.02 * K) << n;
        // The cut-off bubble never beats the sharp constant by more than the sampling error.
        EXPECT_GE(q.value, K - 4.0 * q.error - 1e-3 * K) << n;
    }
}

TEST(Quotient, CurvedDataLowersTheQuotient) {
    auto cfg = small_config(curved_instance(8, 1), 200000);
    cfg.eps_list = {cfg.delta / 32};
    const auto pts = evaluate_quotient_points(cfg, cfg.delta / 32);
    ASSERT_EQ(pts.size(), 2u);
    const auto& a1 = pts[1];
    EXPECT_EQ(a1.A, 1.0);
    EXPECT_LT(a1.quotient_drop.value + 3.0 * a1.quotient_drop.error, 0.0);
    EXPECT_LT(a1.predicted_drop, 0.0);
}

TEST(Quotient, PredictedDropScalesAsEpsToTheFourth) {
    const double a = predicted_energy_drop(7, 2.0, 0.01, 0.25, 1.0);
    const double b = predicted_energy_drop(7, 2.0, 0.005, 0.25, 1.0);
    EXPECT_NEAR(a / b, 16.0, 1e-12);
    EXPECT_EQ(predicted_energy_drop(7, 2.0, 0.01, 0.25, 0.0), 0.0);
    // n = 6 carries the extra log(delta/eps).
    const double c = predicted_energy_drop(6, 1.0, 0.01, 0.25, 1.0);
    const double d = predicted_energy_drop(6, 1.0, 0.005, 0.25, 1.0);
    EXPECT_NEAR(c / d, 16.0 * std::log(25.0) / std::log(50.0), 1e-12);
}

TEST(Quotient, QuotientOfPropagatesErrors) {
    const Estimate q = quotient_of({8.0, 0.08}, {4.0, 0.0}, 3);
    EXPECT_DOUBLE_EQ(q.value, 4.0);
    EXPECT_NEAR(q.error, 0.04, 1e-15);
}

TEST(Sweep, SixDimensionalDropExponentIsNearFour) {
    // Deeper sweep: at delta/eps = 8 the O(eps/delta) remainder still dominates in n = 6.
    auto cfg = small_config(curved_instance(6, 1), 400000);
    cfg.eps_list = {cfg.delta / 16, cfg.delta / 32, cfg.delta / 64};
    const SweepTable t = sweep(cfg);
    ASSERT_EQ(t.fits.size(), 1u);
    EXPECT_GT(t.fits[0].exponent, 3.5);
    EXPECT_LT(t.fits[0].exponent, 4.5);
}

TEST(Sweep, CsvHasOneRowPerPoint) {
    auto cfg = small_config(zero_curvature<Rational>(6), 5000);
    cfg.eps_list = {cfg.delta / 8, cfg.delta / 16};
    const SweepTable t = sweep(cfg);
    EXPECT_FALSE(t.curved);
    EXPECT_FALSE(t.monotone_improvement);
    const std::string csv = sweep_csv(t);
    EXPECT_EQ(csv.rfind("n,eps,A,energy,", 0), 0u);
    EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), 1 + t.rows.size());
    EXPECT_EQ(t.rows.size(), 4u);
}
