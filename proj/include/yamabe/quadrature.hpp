#pragma once

// Numerical integration used to cross-check the exact engine:
//   * reduced_2d: adaptive Gauss-Kronrod on the (y_n, |ybar|) reduction of a
//     radially symmetric half-space integrand;
//   * sphere_mc: Monte-Carlo averages over S_r^{d-1};
//   * ball_qmc: randomized Sobol integration over a (half-)ball in R^d.

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/random/sobol.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "yamabe/errors.hpp"
#include "yamabe/exact_integrals.hpp"
#include "yamabe/polynomial.hpp"
#include "yamabe/sphere_moments.hpp"

namespace yamabe {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    /// Maximum Gauss-Kronrod bisection depth.
    int max_subdivisions = 15;
    /// Radius of the truncated domain; 0 integrates over the whole half-space
    /// through the quadrature's own [0, inf) change of variables.
    double truncation_radius = 0.0;
    std::size_t mc_samples = 100000;
    std::uint64_t seed = 1;
    /// Randomized replicates for the QMC error estimate.
    int replicates = 16;
    /// Average each QMC point over sign flips and cyclic shifts of the boundary
    /// coordinates; exact for integrands with that symmetry, and cancels
    /// trace-free quadratic angular dependence identically.
    bool symmetrize = false;
    /// Radial concentration scale a of the QMC warp; 0 samples the radius uniformly in volume.
    double radial_scale = 0.0;
    /// Tangent: r = a tan(u atan(R/a)), density ~ 1/(a^2 + r^2).
    /// Logarithmic: r = a ((1 + R/a)^u - 1), density ~ 1/(a + r); suited to
    /// integrands whose mass spreads over all scales between a and R.
    enum class Warp { Tangent, Logarithmic } warp = Warp::Logarithmic;
};

struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

/// sigma_{n-2} int_0^L int_0^{sqrt(L^2 - t^2)} t^a r^{b+n-2} ((1+t)^2 + r^2)^{-c} dr dt,
/// or the full quadrant when L = 0.
inline Estimate reduced_2d(const IntegralSpec& spec, const QuadratureConfig& cfg = {}) {
    spec.validate();
    using boost::math::quadrature::gauss_kronrod;
    const double L = cfg.truncation_radius;
    const double inf = std::numeric_limits<double>::infinity();
    auto inner = [&](double t) {
        if (L > 0.0 && t >= L) return 0.0;
        const double rmax = L > 0.0 ? std::sqrt(L * L - t * t) : inf;
        const double s2 = (1.0 + t) * (1.0 + t);
        auto f = [&](double r) {
            if (r == 0.0 && spec.b + spec.n - 2 > 0) return 0.0;
            return std::pow(r, spec.b + spec.n - 2) * std::pow(s2 + r * r, -spec.c);
        };
        // Split at the peak scale 1 + t so the adaptive rule sees a smooth bump.
        const double knee = std::min(rmax, 1.0 + t);
        double v = gauss_kronrod<double, 61>::integrate(f, 0.0, knee, cfg.max_subdivisions, cfg.rel_tol);
        if (rmax > knee) v += gauss_kronrod<double, 61>::integrate(f, knee, rmax, cfg.max_subdivisions, cfg.rel_tol);
        return std::pow(t, spec.a) * v;
    };
    double outer_err = 0.0;
    double value = 0.0;
    if (L > 0.0) {
        // Split the outer range geometrically so that long log-tails stay resolved.
        double lo = 0.0;
        for (double hi = 1.0;; hi *= 10.0) {
            const double top = std::min(hi, L);
            double e = 0.0;
            value += gauss_kronrod<double, 61>::integrate(inner, lo, top, cfg.max_subdivisions, cfg.rel_tol, &e);
            outer_err += e;
            lo = top;
            if (top >= L) break;
        }
    } else {
        value = gauss_kronrod<double, 61>::integrate(inner, 0.0, inf, cfg.max_subdivisions, cfg.rel_tol, &outer_err);
    }
    const double sigma = sphere_area(spec.n - 2);
    // The outer Gauss-Kronrod error estimate also sees the inner-integration noise.
    const Estimate est{sigma * value, sigma * outer_err};
    const double tol = std::max(cfg.abs_tol, 1e3 * cfg.rel_tol * std::abs(est.value));
    if (!(est.error <= tol) && est.value != 0.0) {
        throw ToleranceNotMet("reduced_2d " + spec.str() + ": error estimate " + std::to_string(est.error) +
                              " exceeds " + std::to_string(tol));
    }
    return est;
}

struct LogFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// Coefficient of 1/L when the remainder term is fitted, else 0.
    double inverse = 0.0;
    /// Largest residual of the fit.
    double residual = 0.0;
};

/// Least-squares fit value ~ slope * log(L) + intercept [+ inverse / L].
/// The optional 1/L column models the O(L^{-1}) remainder of integrals over
/// truncated domains, which otherwise biases the slope at moderate L.
inline LogFit fit_log(const std::vector<double>& L, const std::vector<double>& value, bool inverse_term = false) {
    const std::size_t p = inverse_term ? 3 : 2;
    if (L.size() != value.size() || L.size() < p) throw std::invalid_argument("fit_log: too few points");
    auto basis = [&](double x, std::size_t j) { return j == 0 ? std::log(x) : (j == 1 ? 1.0 : 1.0 / x); };
    // Normal equations, solved by Gaussian elimination with partial pivoting.
    std::vector<std::vector<double>> M(p, std::vector<double>(p + 1, 0.0));
    for (std::size_t i = 0; i < L.size(); ++i)
        for (std::size_t r = 0; r < p; ++r) {
            for (std::size_t c = 0; c < p; ++c) M[r][c] += basis(L[i], r) * basis(L[i], c);
            M[r][p] += basis(L[i], r) * value[i];
        }
    for (std::size_t c = 0; c < p; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < p; ++r)
            if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
        std::swap(M[c], M[piv]);
        if (M[c][c] == 0.0) throw std::invalid_argument("fit_log: degenerate radii");
        for (std::size_t r = 0; r < p; ++r) {
            if (r == c) continue;
            const double f = M[r][c] / M[c][c];
            for (std::size_t k = c; k <= p; ++k) M[r][k] -= f * M[c][k];
        }
    }
    std::vector<double> coef(p);
    for (std::size_t c = 0; c < p; ++c) coef[c] = M[c][p] / M[c][c];
    LogFit f;
    f.slope = coef[0];
    f.intercept = coef[1];
    if (inverse_term) f.inverse = coef[2];
    for (std::size_t i = 0; i < L.size(); ++i) {
        double model = 0.0;
        for (std::size_t j = 0; j < p; ++j) model += coef[j] * basis(L[i], j);
        f.residual = std::max(f.residual, std::abs(value[i] - model));
    }
    return f;
}

/// Log mode of reduced_2d: integrates over B^+_L for each L and fits
/// c1 log L + c0 + c_{-1} / L.
inline LogFit reduced_2d_log_fit(const IntegralSpec& spec, const std::vector<double>& radii,
                                 QuadratureConfig cfg = {}) {
    std::vector<double> values;
    for (double L : radii) {
        cfg.truncation_radius = L;
        values.push_back(reduced_2d(spec, cfg).value);
    }
    return fit_log(radii, values, radii.size() >= 3);
}

/// Monte-Carlo integral of f over S_r^{d-1}, with its standard error.
inline Estimate sphere_mc(const std::function<double(std::span<const double>)>& f, int d, double r,
                          const QuadratureConfig& cfg = {}) {
    if (cfg.mc_samples < 2) throw std::invalid_argument("sphere_mc: need at least two samples");
    std::mt19937_64 rng(cfg.seed);
    std::vector<double> x(static_cast<std::size_t>(d));
    double mean = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < cfg.mc_samples; ++k) {
        random_sphere_point(rng, r, x);
        const double v = f(x);
        const double delta = v - mean;
        mean += delta / static_cast<double>(k + 1);
        m2 += delta * (v - mean);
    }
    const double N = static_cast<double>(cfg.mc_samples);
    const double area = sphere_area(d - 1) * std::pow(r, d - 1);
    return {area * mean, area * std::sqrt(m2 / (N - 1.0) / N)};
}

template <class S>
Estimate sphere_mc(const HomPoly<S>& p, double r, const QuadratureConfig& cfg = {}) {
    const Polynomial<S>& poly = p.poly();
    return sphere_mc([&poly](std::span<const double> x) { return poly.evaluate(x); }, p.nvars(), r, cfg);
}

/// Integrand with several outputs evaluated at one point.
using VectorIntegrand = std::function<void(std::span<const double> x, std::span<double> out)>;

/// Randomized-QMC integral over the ball of radius R in R^d (the half ball
/// {x_d >= 0} when `half`). Each replicate uses an independent Cranley-Patterson
/// shift of one Sobol sequence in d + 1 dimensions (d Gaussian-quantile
/// coordinates for the direction, one for the radius). Returns the replicate
/// estimates [output][replicate]; they depend only on (cfg, integrand).
inline std::vector<std::vector<double>> ball_qmc_replicates(const VectorIntegrand& f, std::size_t outputs, int d,
                                                            double R, bool half, const QuadratureConfig& cfg = {}) {
    if (d < 1 || !(R > 0.0)) throw std::invalid_argument("ball_qmc: bad domain");
    if (cfg.replicates < 2) throw std::invalid_argument("ball_qmc: need at least two replicates");
    const int m = d - 1;  // number of coordinates permuted by the symmetrization
    const int flips = (cfg.symmetrize && m >= 1) ? 8 : 1;
    const int shifts = (cfg.symmetrize && m >= 1) ? m : 1;
    const std::size_t images = static_cast<std::size_t>(flips * shifts);
    const std::size_t per_rep = std::max<std::size_t>(
        1, cfg.mc_samples / (images * static_cast<std::size_t>(cfg.replicates)));

    const double a = cfg.radial_scale;
    const bool log_warp = cfg.warp == QuadratureConfig::Warp::Logarithmic;
    const double theta = a > 0.0 ? (log_warp ? std::log1p(R / a) : std::atan(R / a)) : 0.0;
    const double omega = sphere_area(d - 1) * (half ? 0.5 : 1.0);
    const boost::math::normal_distribution<double> normal;

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<std::vector<double>> rep_means(outputs, std::vector<double>(static_cast<std::size_t>(cfg.replicates)));
    std::vector<double> shift(static_cast<std::size_t>(d + 1));
    std::vector<std::uint64_t> raw(static_cast<std::size_t>(d + 1));
    std::vector<double> u(static_cast<std::size_t>(d + 1)), dir(static_cast<std::size_t>(d)),
        x(static_cast<std::size_t>(d)), img(static_cast<std::size_t>(d));
    std::vector<double> out(outputs), point_sum(outputs);
    constexpr std::size_t block = 1024;
    std::vector<double> block_sum(outputs);
    std::vector<double> partials;

    for (int rep = 0; rep < cfg.replicates; ++rep) {
        for (auto& s : shift) s = unif(rng);
        boost::random::sobol qrng(static_cast<std::size_t>(d + 1));
        qrng.discard(static_cast<std::uint64_t>(d + 1));  // skip the origin point
        std::vector<std::vector<double>> parts(outputs);
        std::fill(block_sum.begin(), block_sum.end(), 0.0);
        for (std::size_t k = 0; k < per_rep; ++k) {
            qrng.generate(raw.begin(), raw.end());
            for (int i = 0; i <= d; ++i) {
                double v = std::ldexp(static_cast<double>(raw[static_cast<std::size_t>(i)]), -64) + shift[static_cast<std::size_t>(i)];
                if (v >= 1.0) v -= 1.0;
                u[static_cast<std::size_t>(i)] = std::clamp(v, 1e-15, 1.0 - 1e-15);
            }
            double norm = 0.0;
            for (int i = 0; i < d; ++i) {
                dir[static_cast<std::size_t>(i)] = boost::math::quantile(normal, u[static_cast<std::size_t>(i)]);
                norm += dir[static_cast<std::size_t>(i)] * dir[static_cast<std::size_t>(i)];
            }
            norm = std::sqrt(norm);
            const double ur = u[static_cast<std::size_t>(d)];
            double r, jac;
            if (a > 0.0 && log_warp) {
                r = a * std::expm1(ur * theta);
                jac = theta * (a + r);
            } else if (a > 0.0) {
                r = a * std::tan(ur * theta);
                jac = theta * (a * a + r * r) / a;
            } else {
                r = R * std::pow(ur, 1.0 / d);
                jac = std::pow(R, d) / (d * std::pow(r, d - 1));
            }
            const double weight = omega * jac * std::pow(r, d - 1);
            for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = r * dir[static_cast<std::size_t>(i)] / norm;
            if (half) x[static_cast<std::size_t>(d - 1)] = std::abs(x[static_cast<std::size_t>(d - 1)]);

            std::fill(point_sum.begin(), point_sum.end(), 0.0);
            for (int fl = 0; fl < flips; ++fl)
                for (int sh = 0; sh < shifts; ++sh) {
                    for (int i = 0; i < m; ++i) {
                        const int src = (i + sh) % m;
                        const bool neg = flips > 1 && (std::popcount(static_cast<unsigned>(fl & (i + 1))) & 1);
                        img[static_cast<std::size_t>(i)] = neg ? -x[static_cast<std::size_t>(src)] : x[static_cast<std::size_t>(src)];
                    }
                    img[static_cast<std::size_t>(m)] = x[static_cast<std::size_t>(m)];
                    f(img, out);
                    for (std::size_t o = 0; o < outputs; ++o) point_sum[o] += out[o];
                }
            for (std::size_t o = 0; o < outputs; ++o) block_sum[o] += weight * point_sum[o] / static_cast<double>(images);
            if ((k + 1) % block == 0 || k + 1 == per_rep) {
                for (std::size_t o = 0; o < outputs; ++o) {
                    parts[o].push_back(block_sum[o]);
                    block_sum[o] = 0.0;
                }
            }
        }
        for (std::size_t o = 0; o < outputs; ++o) {
            const double total = std::accumulate(parts[o].begin(), parts[o].end(), 0.0);
            rep_means[o][static_cast<std::size_t>(rep)] = total / static_cast<double>(per_rep);
        }
    }

    return rep_means;
}

/// Mean and standard error of independent replicate estimates.
inline Estimate summarize_replicates(const std::vector<double>& v) {
    const double k = static_cast<double>(v.size());
    if (v.size() < 2) throw std::invalid_argument("summarize_replicates: need >= 2 replicates");
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / k;
    double var = 0.0;
    for (double s : v) var += (s - mean) * (s - mean);
    var /= (k - 1.0);
    return {mean, std::sqrt(var / k)};
}

/// ball_qmc_replicates reduced to one estimate per output.
inline std::vector<Estimate> ball_qmc(const VectorIntegrand& f, std::size_t outputs, int d, double R, bool half,
                                      const QuadratureConfig& cfg = {}) {
    std::vector<Estimate> result;
    for (const auto& reps : ball_qmc_replicates(f, outputs, d, R, half, cfg)) result.push_back(summarize_replicates(reps));
    return result;
}

/// Scalar convenience wrapper of ball_qmc.
inline Estimate ball_qmc(const std::function<double(std::span<const double>)>& f, int d, double R, bool half,
                         const QuadratureConfig& cfg = {}) {
    return ball_qmc([&f](std::span<const double> x, std::span<double> out) { out[0] = f(x); }, 1, d, R, half,
                    cfg)[0];
}

}  // namespace yamabe
