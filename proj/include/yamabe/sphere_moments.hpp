#pragma once

// Integrals of polynomials over spheres S_r^{d-1} in R^d (d = n - 1 is the
// boundary dimension), via the reduction identity
//
//     int_{S_r} p_k = r^2 / (k (k + d - 2)) int_{S_r} Laplacian(p_k),
//
// which walks a homogeneous p_k down to a constant: int_{S_r} c = c sigma_{d-1} r^{d-1}.

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

#include "yamabe/curvature.hpp"
#include "yamabe/polynomial.hpp"
#include "yamabe/rational.hpp"

namespace yamabe {

/// int_{S_r^{d-1}} p = coeff * sigma_{d-1} * r^{r_pow}.
template <class S>
struct SphereIntegral {
    S coeff{0};
    int r_pow = 0;
};

template <class S>
SphereIntegral<S> sphere_integral(const HomPoly<S>& p) {
    const int d = p.nvars();
    if (d < 2) throw std::invalid_argument("sphere_integral: need at least two variables");
    const int k = p.degree();
    SphereIntegral<S> out{S(0), k + d - 1};
    if (k % 2 == 1 || p.is_zero()) return out;
    S scale{1};
    HomPoly<S> q = p;
    for (int deg = k; deg > 0; deg -= 2) {
        scale /= S(deg * (deg + d - 2));
        q = laplacian(q);
    }
    out.coeff = scale * q.poly().coefficient(Exponent(static_cast<std::size_t>(d), 0));
    return out;
}

/// Exact series sum coeff(e, a, b) * sigma_{n-2} * eps^e * y_n^a * r^b.
template <class S>
struct MomentSeries {
    using Key = std::array<int, 3>;  // (eps power, y_n power, r power)
    std::map<Key, S> terms;

    void add(const Key& key, const S& c) {
        if (c == S(0)) return;
        auto [it, inserted] = terms.try_emplace(key, c);
        if (!inserted) {
            it->second += c;
            if (it->second == S(0)) terms.erase(it);
        }
    }
    S coefficient(const Key& key) const {
        auto it = terms.find(key);
        return it == terms.end() ? S(0) : it->second;
    }
    /// Terms of a single power of eps.
    MomentSeries eps_order(int e) const {
        MomentSeries r;
        for (const auto& [k, c] : terms)
            if (k[0] == e) r.terms.emplace(k, c);
        return r;
    }
    /// Terms with eps power <= e.
    MomentSeries up_to_eps(int e) const {
        MomentSeries r;
        for (const auto& [k, c] : terms)
            if (k[0] <= e) r.terms.emplace(k, c);
        return r;
    }
    double evaluate(double eps, double yn, double r, double sigma) const {
        double s = 0.0;
        for (const auto& [k, c] : terms)
            s += ScalarTraits<S>::to_double(c) * std::pow(eps, k[0]) * std::pow(yn, k[1]) * std::pow(r, k[2]);
        return s * sigma;
    }
    friend bool operator==(const MomentSeries& a, const MomentSeries& b) { return a.terms == b.terms; }

    std::string str() const {
        std::string s;
        for (const auto& [k, c] : terms) {
            if (!s.empty()) s += " + ";
            if constexpr (ScalarTraits<S>::exact) {
                s += "(" + to_string(c) + ")";
            } else {
                s += "(" + std::to_string(c) + ")";
            }
            s += "*sigma*eps^" + std::to_string(k[0]) + "*y_n^" + std::to_string(k[1]) + "*r^" +
                 std::to_string(k[2]);
        }
        return s.empty() ? "0" : s;
    }
};

/// Sphere average of a polynomial in (y_1, ..., y_{n-1}, y_n) evaluated at
/// x = eps * y: each monomial's total degree is its eps power, y_n is held fixed
/// and the boundary variables are integrated over S_r^{n-2}.
/// `eps_shift` is subtracted from the total degree when reading off the eps power
/// (for weights such as y_i y_j that are not scaled by eps).
template <class S>
MomentSeries<S> sphere_average_series(const Polynomial<S>& p, int eps_shift = 0) {
    const int n = p.nvars();
    const int yn = n - 1;
    MomentSeries<S> out;
    for (int a = 0; a <= p.max_power(yn); ++a) {
        const Polynomial<S> slice = p.coefficient_of_power(yn, a);
        for (int k = 0; k <= slice.degree(); ++k) {
            const Polynomial<S> part = slice.homogeneous_part(k);
            if (part.is_zero()) continue;
            const auto v = sphere_integral(HomPoly<S>(part, k));
            out.add({a + k - eps_shift, a, v.r_pow}, v.coeff);
        }
    }
    return out;
}

template <class S>
struct JetSphereMoments {
    /// Full series from the explicit jet.
    MomentSeries<S> metric_yy;       // int (g^{ij} - delta^{ij})(eps y) y_i y_j
    MomentSeries<S> metric_rn_yyyy;  // int (g^{ij} - delta^{ij})(eps y) R_nknl y_i y_j y_k y_l
    MomentSeries<S> scalar;          // int R_g(eps y)
    /// Displayed leading terms, from the curvature channels alone.
    MomentSeries<S> metric_yy_closed;
    MomentSeries<S> metric_rn_yyyy_closed;
    MomentSeries<S> scalar_closed;
    /// Metric jets that entered with default values.
    std::vector<std::string> defaulted;

    /// Leading part of the jet series: eps^4 for the first average, eps^2 for the others.
    MomentSeries<S> metric_yy_leading() const { return metric_yy.up_to_eps(4); }
    MomentSeries<S> metric_rn_yyyy_leading() const { return metric_rn_yyyy.eps_order(2); }
    MomentSeries<S> scalar_leading() const { return scalar.eps_order(2); }
};

/// Closed forms of the three leading sphere averages:
///   (g - delta) y y      -> sigma eps^4 [y_n^2 r^{n+2} D / ((n+1)(n-1)) + y_n^4 r^n S / (2(n-1))]
///   (g - delta) R y y y y -> sigma eps^2 y_n^2 r^{n+2} 2 S / ((n+1)(n-1))
///   R_g                   -> sigma eps^2 [y_n^2 r^{n-2} N2 / 2 - r^n W2 / (12(n-1))]
template <class S>
void fill_closed_forms(const BoundaryCurvature<S>& c, JetSphereMoments<S>& out) {
    const int n = c.n;
    const S Sch = c.S_channel();
    const S np1nm1 = S((n + 1) * (n - 1));
    out.metric_yy_closed = {};
    out.metric_yy_closed.add({4, 2, n + 2}, c.D_channel() / np1nm1);
    out.metric_yy_closed.add({4, 4, n}, Sch / S(2 * (n - 1)));
    out.metric_rn_yyyy_closed = {};
    out.metric_rn_yyyy_closed.add({2, 2, n + 2}, S(2) * Sch / np1nm1);
    out.scalar_closed = {};
    out.scalar_closed.add({2, 2, n - 2}, c.N2 / S(2));
    out.scalar_closed.add({2, 0, n}, -c.W2_channel() / S(12 * (n - 1)));
}

/// Computes the three sphere averages from the order-4 metric jet and the scalar
/// curvature model, and checks their leading parts against the closed forms.
/// Throws std::logic_error if the two routes disagree.
template <class S>
JetSphereMoments<S> jet_sphere_moments(const BoundaryCurvature<S>& c) {
    validate(c);
    const int n = c.n;
    const int m = c.m();
    const MetricJet<S> jet = metric_inverse_jet(c, 4);

    auto var = [n](int v) { return Polynomial<S>::variable(n, v); };
    Polynomial<S> yy(n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const auto& g = jet.entry(i, j);
            if (g.is_zero()) continue;
            yy += g * (var(i) * var(j));
        }
    // R_nknl y_k y_l
    Polynomial<S> q(n);
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
            Exponent e(static_cast<std::size_t>(n), 0);
            ++e[k];
            ++e[l];
            q.add_term(e, c.Rn(k, l));
        }
    Polynomial<S> rn4(n);
    if (!q.is_zero()) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const auto& g = jet.entry(i, j);
                if (g.is_zero()) continue;
                rn4 += g * (var(i) * var(j));
            }
        rn4 = rn4 * q;
    }

    JetSphereMoments<S> out;
    out.metric_yy = sphere_average_series(yy, 2);
    out.metric_rn_yyyy = sphere_average_series(rn4, 4);
    out.scalar = sphere_average_series(scalar_curvature_jet(c));
    out.defaulted = jet.defaulted;
    fill_closed_forms(c, out);

    if (!(out.metric_yy_leading() == out.metric_yy_closed))
        throw std::logic_error("metric y y sphere average disagrees with its closed form: " +
                               out.metric_yy_leading().str() + " vs " + out.metric_yy_closed.str());
    if (!(out.metric_rn_yyyy_leading() == out.metric_rn_yyyy_closed))
        throw std::logic_error("metric R y^4 sphere average disagrees with its closed form: " +
                               out.metric_rn_yyyy_leading().str() + " vs " + out.metric_rn_yyyy_closed.str());
    if (!(out.scalar_leading() == out.scalar_closed))
        throw std::logic_error("scalar curvature sphere average disagrees with its closed form: " +
                               out.scalar_leading().str() + " vs " + out.scalar_closed.str());
    return out;
}

/// Uniform point on S_r^{d-1} from normalized Gaussians.
inline void random_sphere_point(std::mt19937_64& rng, double r, std::span<double> out) {
    std::normal_distribution<double> g(0.0, 1.0);
    double norm = 0.0;
    do {
        norm = 0.0;
        for (auto& v : out) {
            v = g(rng);
            norm += v * v;
        }
    } while (norm == 0.0);
    const double s = r / std::sqrt(norm);
    for (auto& v : out) v *= s;
}

}  // namespace yamabe
