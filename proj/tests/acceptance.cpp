// Acceptance run: one PASS/FAIL line per criterion, with every tolerance and
// runtime budget pinned below. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "reference_values.hpp"
#include "yamabe/yamabe.hpp"

using namespace yamabe;

namespace {

// Criterion 2
constexpr double integral_rel_tol = 1e-6;
constexpr double log_slope_rel_tol = 1e-2;
// Criterion 4
constexpr int moment_datasets_per_n = 50;
constexpr double moment_mc_sigmas = 3.0;
constexpr std::size_t moment_mc_samples = 20000;
// Round-off allowance added to the 3 SE band: when the integrand is constant on
// the sphere (isotropic jets make R_g radial) the standard error collapses to ~1e-17.
constexpr double moment_roundoff_rel = 1e-12;
// Criterion 5
constexpr int pde_points_per_n = 100;
constexpr double pde_abs_tol = 1e-8;
constexpr double laplacian_rel_tol = 1e-5;
constexpr double laplacian_fd_step = 1e-3;
// Criterion 6
constexpr int dichotomy_datasets = 100;
// Criterion 7
constexpr std::size_t quotient_samples = 2000000;
constexpr double flat_rel_tol = 0.02;
constexpr double drop_rel_tol = 0.25;
// Runtime budgets in seconds.
constexpr double budget_1 = 1, budget_2 = 30, budget_3 = 1, budget_4 = 120, budget_5 = 10, budget_6 = 10,
                 budget_7_per_n = 600, budget_8 = 1;

struct Outcome {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& title, double budget, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(secs < budget, "runtime budget exceeded");
    std::ostringstream line;
    line.precision(3);
    line << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << title << "  [" << secs << " s / " << budget
         << " s]";
    if (!o.detail.empty()) line << "  -- " << o.detail;
    std::cout << line.str() << std::endl;
    if (!o.pass) ++failures;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

struct McTally {
    int compared = 0;
    int exceeded = 0;
    double max_z = 0.0;
};

/// Monte-Carlo counterpart of the three jet sphere averages at one (eps, y_n, r).
Outcome moment_mc_check(McTally& tally, const BoundaryCurvature<Rational>& c, const JetSphereMoments<Rational>& mom, std::uint64_t seed) {
    Outcome o;
    const int n = c.n;
    const int m = n - 1;
    const double eps = 0.3, yn = 0.8, r = 1.2;
    const double sigma = sphere_area(n - 2);
    const auto cd = to_double(c);
    JetEvaluator jet(cd);
    std::vector<double> x(static_cast<std::size_t>(n)), G(static_cast<std::size_t>(m * m));
    auto place = [&](std::span<const double> ybar) {
        for (int i = 0; i < m; ++i) x[static_cast<std::size_t>(i)] = eps * ybar[static_cast<std::size_t>(i)];
        x[static_cast<std::size_t>(m)] = eps * yn;
    };
    auto quad = [&](std::span<const double> ybar) {
        double s = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) s += G[static_cast<std::size_t>(i * m + j)] * ybar[i] * ybar[j];
        return s;
    };
    auto rn_quad = [&](std::span<const double> ybar) {
        double s = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) s += cd.Rn(i, j) * ybar[i] * ybar[j];
        return s;
    };
    QuadratureConfig cfg;
    cfg.mc_samples = moment_mc_samples;
    const std::vector<std::pair<std::string, std::function<double(std::span<const double>)>>> checks{
        {"(g-delta)yy",
         [&](std::span<const double> y) {
             place(y);
             jet.metric(x, G);
             return quad(y);
         }},
        {"(g-delta)R yyyy",
         [&](std::span<const double> y) {
             place(y);
             jet.metric(x, G);
             return quad(y) * rn_quad(y);
         }},
        {"R_g",
         [&](std::span<const double> y) {
             place(y);
             return jet.scalar_curvature(x);
         }},
    };
    const std::vector<const MomentSeries<Rational>*> series{&mom.metric_yy, &mom.metric_rn_yyyy, &mom.scalar};
    for (std::size_t k = 0; k < checks.size(); ++k) {
        cfg.seed = seed * 3 + k;
        const Estimate e = sphere_mc(checks[k].second, m, r, cfg);
        const double exact = series[k]->evaluate(eps, yn, r, sigma);
        const double diff = std::abs(e.value - exact);
        const double band = moment_mc_sigmas * e.error + moment_roundoff_rel * std::abs(exact);
        ++tally.compared;
        if (diff > band) ++tally.exceeded;
        if (diff > moment_roundoff_rel * std::abs(exact)) tally.max_z = std::max(tally.max_z, diff / e.error);
        o.require(diff <= band, "n=" + std::to_string(n) + " " + checks[k].first + " off by " + fmt(diff / e.error) + " SE");
    }
    return o;
}

std::vector<double> random_point(std::mt19937_64& rng, int n, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) v = u(rng);
    x.back() = std::abs(x.back());
    return x;
}

BoundaryCurvature<Rational> quotient_instance(int n) {
    RandomCurvatureOptions ro;
    ro.anisotropic_jets = false;
    return random_admissible(n, 1, rat(1, 10), ro);
}

}  // namespace

int main() {
    std::cout << "acceptance run" << std::endl;

    criterion(1, "exact endgame values P(1) = -2/15, -62, -144", budget_1, [] {
        Outcome o;
        o.require(coefficient_at(7, 1) == Rational(-62), "n=7: " + to_string(coefficient_at(7, 1)));
        o.require(coefficient_at(8, 1) == Rational(-144), "n=8: " + to_string(coefficient_at(8, 1)));
        o.require(coefficient_at(6, 1) == rat(-2, 15), "n=6: " + to_string(coefficient_at(6, 1)));
        return o;
    });

    criterion(2, "closed-form integral table, exact and by quadrature (1e-6 rel; n=6 log slopes 1%)", budget_2, [] {
        Outcome o;
        for (int n : {7, 8}) {
            const auto table = expansion_integrals(n);
            for (int k = 1; k <= 6; ++k) {
                const auto& e = table[static_cast<std::size_t>(k - 1)];
                o.require(e.value.q() == reference::finite_integral(k, n) && e.value.sigma_pow() == 1 &&
                              e.value.I_pow() == 1 && !e.value.log_flag(),
                          "n=" + std::to_string(n) + " " + e.name + " = " + e.value.str());
            }
            for (const auto& r : integral_residuals(n))
                o.require(r.relative < integral_rel_tol, "n=" + std::to_string(n) + " " + r.integral + " rel " + fmt(r.relative));
        }
        const auto six = expansion_integrals(6);
        for (int k = 1; k <= 6; ++k) {
            const auto& e = six[static_cast<std::size_t>(k - 1)];
            const Rational expected = reference::log_coefficient_n6(k);
            const bool ok = expected == 0 ? (e.bounded && e.value.is_zero())
                                          : (e.value.q() == expected && e.value.log_flag() && !e.bounded);
            o.require(ok, "n=6 " + e.name + " = " + e.value.str());
        }
        for (const auto& r : integral_residuals(6))
            o.require(r.relative < log_slope_rel_tol, "n=6 " + r.integral + " slope rel " + fmt(r.relative));
        return o;
    });

    criterion(3, "N2 and D channels cancel identically in A", budget_3, [] {
        Outcome o;
        for (int n : {6, 7, 8}) {
            const auto rep = apply_cancellation(assemble_expansion(n));
            o.require(rep.channel(Channel::N2).is_zero(), "n=" + std::to_string(n) + " N2 survives");
            o.require(rep.channel(Channel::D).is_zero(), "n=" + std::to_string(n) + " D survives");
        }
        return o;
    });

    criterion(4, "sphere moments: closed forms exact, Monte Carlo within 3 SE (50 datasets per n)", budget_4, [] {
        Outcome o;
        McTally tally;
        for (int n : {6, 7, 8})
            for (int s = 0; s < moment_datasets_per_n; ++s) {
                RandomCurvatureOptions opts;
                opts.anisotropic_jets = s % 2 == 0;
                opts.odd_jets = s % 3 == 0;
                const auto c = random_admissible(n, 1000 + static_cast<unsigned>(s), 1, opts);
                const auto mom = jet_sphere_moments(c);
                o.require(mom.metric_yy_leading() == mom.metric_yy_closed, "n=" + std::to_string(n) + " yy closed form");
                o.require(mom.metric_rn_yyyy_leading() == mom.metric_rn_yyyy_closed,
                          "n=" + std::to_string(n) + " R yyyy closed form");
                o.require(mom.scalar_leading() == mom.scalar_closed, "n=" + std::to_string(n) + " R_g closed form");
                const Outcome mc = moment_mc_check(tally, c, mom, static_cast<std::uint64_t>(100 * n + s));
                o.require(mc.pass, mc.detail + " (dataset " + std::to_string(s) + ")");
            }
        // Diagnostic only: with independent Gaussian errors each comparison leaves the
        // 3 SE band with probability 0.27%, so a few hundred of them expect ~1 exceedance.
        const std::string tally_text = std::to_string(tally.exceeded) + " of " + std::to_string(tally.compared) +
                                       " Monte-Carlo comparisons outside 3 SE, largest |z| " + fmt(tally.max_z) +
                                       " (chance level " + fmt(0.0027 * tally.compared) + ")";
        o.detail = o.pass ? tally_text : o.detail + "; " + tally_text;
        return o;
    });

    criterion(5, "bubble PDE residuals 1e-8, correction Laplacian vs finite differences 1e-5 rel", budget_5, [] {
        Outcome o;
        std::mt19937_64 rng(5);
        double worst_pde = 0.0, worst_lap = 0.0;
        for (int n : {6, 7, 8}) {
            Bubble flat({n, 0.7, 0.0, 0.25, {}});
            Bubble curved(BubbleParams::from(to_double(random_admissible(n, 8)), 0.8, 1.0, 0.25));
            for (int k = 0; k < pde_points_per_n; ++k) {
                auto x = random_point(rng, n, 2.0);
                worst_pde = std::max(worst_pde, std::abs(flat.laplacian_U(x)));
                auto xb = x;
                xb.pop_back();
                worst_pde = std::max(worst_pde, std::abs(flat.boundary_residual(xb)));

                auto y = random_point(rng, n, 1.5);
                y.back() += 0.05;
                const double exact = curved.laplacian_phi(y);
                const double h = laplacian_fd_step;
                double fd = 0.0;
                const double f0 = curved.phi(y);
                for (int i = 0; i < n; ++i) {
                    auto yp = y, ym = y;
                    yp[static_cast<std::size_t>(i)] += h;
                    ym[static_cast<std::size_t>(i)] -= h;
                    fd += (curved.phi(yp) - 2.0 * f0 + curved.phi(ym)) / (h * h);
                }
                worst_lap = std::max(worst_lap, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
            }
        }
        o.require(worst_pde <= pde_abs_tol, "PDE residual " + fmt(worst_pde));
        o.require(worst_lap <= laplacian_rel_tol, "Laplacian mismatch " + fmt(worst_lap));
        if (o.pass) o.detail = "max residual " + fmt(worst_pde) + ", max Laplacian mismatch " + fmt(worst_lap);
        return o;
    });

    criterion(6, "W = 0 iff (Rn, Wbar) = (0, 0) on 100 datasets", budget_6, [] {
        Outcome o;
        for (int s = 0; s < dichotomy_datasets; ++s) {
            const int n = 6 + s % 3;
            const auto base = random_admissible(n, 500 + static_cast<unsigned>(s));
            // Cycle through all four zero patterns of (Rn, Wbar).
            const int pattern = (s / 3) % 4;
            const auto c = make_curvature<Rational>(n, pattern % 2 == 1 ? Tensor<Rational>(2, n - 1) : base.Rn,
                                                    pattern >= 2 ? Tensor<Rational>(4, n - 1) : base.Wbar, base.N2);
            validate(c);
            const bool data_zero = c.Rn.all_zero() && c.Wbar.all_zero();
            const bool weyl_zero = weyl_reconstruct(c).all_zero();
            o.require(data_zero == weyl_zero, "dataset " + std::to_string(s));
        }
        return o;
    });

    for (int n : {6, 7, 8}) {
        criterion(7, "quotient at n = " + std::to_string(n) + ": flat within 2% of the sharp constant, curved drop monotone "
                     "and within 25% of the prediction",
                  budget_7_per_n, [n] {
                      Outcome o;
                      auto flat = default_quotient_config(to_double(zero_curvature<Rational>(n)));
                      flat.sampler.mc_samples = quotient_samples;
                      const double K = sharp_constant(n).value;
                      const Estimate q = evaluate_quotient(flat, 0.0, flat.delta / 32);
                      const double flat_dev = std::abs(q.value - K) / K;
                      o.require(flat_dev <= flat_rel_tol, "flat deviation " + fmt(flat_dev));

                      auto cfg = default_quotient_config(to_double(quotient_instance(n)));
                      cfg.sampler.mc_samples = quotient_samples;
                      const SweepTable t = sweep(cfg);
                      o.require(t.curved, "instance has W(x0) = 0");
                      o.require(t.monotone_improvement, "Q(1) < Q(0) fails at one of the two smallest eps");
                      double dev = INFINITY;
                      for (const auto& f : t.fits)
                          if (f.A == 1.0) dev = f.relative_deviation;
                      o.require(dev <= drop_rel_tol, "drop deviation " + fmt(dev));
                      std::ostringstream d;
                      d << "flat deviation " << fmt(flat_dev) << ", drop deviation " << fmt(dev);
                      if (o.pass) o.detail = d.str();
                      else o.detail += " (" + d.str() + ")";
                      return o;
                  });
    }

    criterion(8, "P(optimal A) <= P(1) < 0", budget_8, [] {
        Outcome o;
        for (int n : {6, 7, 8}) {
            const OptimalA a = optimal_A(n);
            o.require(a.P_at_A <= a.P_at_1 && a.P_at_1 < 0,
                      "n=" + std::to_string(n) + ": P(" + to_string(a.A) + ") = " + to_string(a.P_at_A) +
                          ", P(1) = " + to_string(a.P_at_1));
        }
        return o;
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion line(s) failed")
              << std::endl;
    return failures;
}
