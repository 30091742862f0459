#pragma once

// Curvature content at the base point x0 of the boundary, in conformal Fermi
// coordinates. Indices i, j, k, l run over the m = n - 1 boundary directions;
// the normal direction is written n.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "yamabe/errors.hpp"
#include "yamabe/polynomial.hpp"
#include "yamabe/rational.hpp"
#include "yamabe/tensor.hpp"

namespace yamabe {

template <class S>
struct BoundaryCurvature {
    int n = 0;
    Tensor<S> Rn;     // R_{ninj}
    Tensor<S> Wbar;   // boundary Weyl tensor; equals the boundary Riemann tensor at x0
    S N2{0};          // R_{;nn}
    Tensor<S> Rn_k;   // R_{ninj;k}   (i, j, k)
    Tensor<S> Rn_n;   // R_{ninj;n}
    Tensor<S> Rn_kl;  // R_{ninj;kl}  (i, j, k, l)
    Tensor<S> Rn_nk;  // R_{ninj;nk}  (i, j, k)
    Tensor<S> Rn_nn;  // R_{ninj;nn}
    Tensor<S> Rs_ij;  // R_{;ij}
    /// Jets that were not supplied and hold their minimal admissible completion.
    std::vector<std::string> defaulted;

    int m() const { return n - 1; }

    /// S = sum (R_ninj)^2.
    S S_channel() const {
        S s{0};
        for (const auto& v : Rn.data()) s += v * v;
        return s;
    }
    /// W2 = sum (Wbar_ijkl)^2.
    S W2_channel() const {
        S s{0};
        for (const auto& v : Wbar.data()) s += v * v;
        return s;
    }
    /// D = R_{ninj;ij}, always derived as -N2/2 - S.
    S D_channel() const { return -N2 / S(2) - S_channel(); }

    bool is_defaulted(const std::string& name) const {
        return std::find(defaulted.begin(), defaulted.end(), name) != defaulted.end();
    }
};

namespace detail {

template <class S>
Tensor<S> identity(int m) {
    Tensor<S> t(2, m);
    for (int i = 0; i < m; ++i) t(i, i) = S(1);
    return t;
}

template <class S>
S trace(const Tensor<S>& t) {
    S s{0};
    for (int i = 0; i < t.dim(); ++i) s += t(i, i);
    return s;
}

/// Trace-free symmetric-pair tensor with unit ij-ij contraction:
/// E_ijkl = ((d_ik d_jl + d_il d_jk)/2 - d_ij d_kl / m) / ((m + 2)(m - 1)/2).
template <class S>
Tensor<S> isotropic_rn_kl(int m) {
    Tensor<S> t(4, m);
    const S norm = S((m + 2) * (m - 1)) / S(2);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) {
                    S v{0};
                    if (i == k && j == l) v += S(1) / S(2);
                    if (i == l && j == k) v += S(1) / S(2);
                    if (i == j && k == l) v -= S(1) / S(m);
                    t(i, j, k, l) = v / norm;
                }
    return t;
}

template <class S>
S contraction_ijij(const Tensor<S>& t) {
    S s{0};
    for (int i = 0; i < t.dim(); ++i)
        for (int j = 0; j < t.dim(); ++j) s += t(i, j, i, j);
    return s;
}

}  // namespace detail

/// Minimal admissible completions of the second-order jets: isotropic tensors
/// carrying exactly the traces the base-point identities require.
template <class S>
void complete_jet(BoundaryCurvature<S>& c, const std::string& name) {
    const int m = c.m();
    if (name == "Rn_kl") {
        c.Rn_kl = detail::isotropic_rn_kl<S>(m);
        for (auto& v : c.Rn_kl.data()) v *= c.D_channel();
    } else if (name == "Rn_nn") {
        c.Rn_nn = detail::identity<S>(m);
        for (auto& v : c.Rn_nn.data()) v *= S(-2) * c.S_channel() / S(m);
    } else if (name == "Rs_ij") {
        c.Rs_ij = detail::identity<S>(m);
        for (auto& v : c.Rs_ij.data()) v *= -c.W2_channel() / S(6 * m);
    } else if (name == "Rn_k") {
        c.Rn_k = Tensor<S>(3, m);
    } else if (name == "Rn_n") {
        c.Rn_n = Tensor<S>(2, m);
    } else if (name == "Rn_nk") {
        c.Rn_nk = Tensor<S>(3, m);
    } else {
        throw std::invalid_argument("unknown jet '" + name + "'");
    }
    if (!c.is_defaulted(name)) c.defaulted.push_back(name);
}

inline const std::vector<std::string>& jet_names() {
    static const std::vector<std::string> names{"Rn_k", "Rn_n", "Rn_kl", "Rn_nk", "Rn_nn", "Rs_ij"};
    return names;
}

/// Recomputes every defaulted jet from the current (Rn, Wbar, N2).
template <class S>
void refresh_completions(BoundaryCurvature<S>& c) {
    const auto names = c.defaulted;
    for (const auto& name : names) complete_jet(c, name);
}

template <class S>
BoundaryCurvature<S> make_curvature(int n, Tensor<S> Rn, Tensor<S> Wbar, S N2) {
    if (n < 3) throw std::invalid_argument("make_curvature: n must be >= 3");
    BoundaryCurvature<S> c;
    c.n = n;
    c.Rn = std::move(Rn);
    c.Wbar = std::move(Wbar);
    c.N2 = std::move(N2);
    if (c.Rn.rank() != 2 || c.Rn.dim() != n - 1 || c.Wbar.rank() != 4 || c.Wbar.dim() != n - 1) {
        throw std::invalid_argument("make_curvature: tensor shapes do not match n - 1 = " +
                                    std::to_string(n - 1));
    }
    for (const auto& name : jet_names()) complete_jet(c, name);
    return c;
}

template <class S>
BoundaryCurvature<S> zero_curvature(int n) {
    return make_curvature<S>(n, Tensor<S>(2, n - 1), Tensor<S>(4, n - 1), S(0));
}

/// Checks every base-point identity; throws SymmetryViolation naming the first
/// one that fails. `tol` only matters for floating-point data.
template <class S>
void validate(const BoundaryCurvature<S>& c, double tol = 1e-10) {
    using T = ScalarTraits<S>;
    auto zero = [tol](const S& v) { return T::is_zero(v, tol); };
    auto fail = [](const std::string& label) { throw SymmetryViolation(label); };

    if (c.n < 3) fail("dimension n >= 3");
    const int m = c.m();
    auto shape = [&](const Tensor<S>& t, int rank, const char* name) {
        if (t.rank() != rank || t.dim() != m) fail(std::string(name) + " shape");
    };
    shape(c.Rn, 2, "Rn");
    shape(c.Wbar, 4, "Wbar");
    shape(c.Rn_k, 3, "Rn_k");
    shape(c.Rn_n, 2, "Rn_n");
    shape(c.Rn_kl, 4, "Rn_kl");
    shape(c.Rn_nk, 3, "Rn_nk");
    shape(c.Rn_nn, 2, "Rn_nn");
    shape(c.Rs_ij, 2, "Rs_ij");

    auto symmetric2 = [&](const Tensor<S>& t, const char* name) {
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (!zero(t(i, j) - t(j, i))) fail(std::string(name) + " symmetry");
    };

    symmetric2(c.Rn, "Rn");
    if (!zero(detail::trace(c.Rn))) fail("trace Rn != 0 (R_nn = 0)");

    const auto& W = c.Wbar;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) {
                    const S& w = W(i, j, k, l);
                    if (!zero(w + W(j, i, k, l))) fail("Wbar antisymmetry in (i,j)");
                    if (!zero(w + W(i, j, l, k))) fail("Wbar antisymmetry in (k,l)");
                    if (!zero(w - W(k, l, i, j))) fail("Wbar pair symmetry");
                    if (!zero(w + W(i, k, l, j) + W(i, l, j, k))) fail("Wbar first Bianchi identity");
                }
    for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l) {
            S tr{0};
            for (int i = 0; i < m; ++i) tr += W(i, j, i, l);
            if (!zero(tr)) fail("Wbar trace-free");
        }

    const S Sch = c.S_channel();
    const S W2 = c.W2_channel();

    for (int k = 0; k < m; ++k) {
        S tr{0};
        for (int i = 0; i < m; ++i) {
            tr += c.Rn_k(i, i, k);
            for (int j = 0; j < m; ++j) {
                if (!zero(c.Rn_k(i, j, k) - c.Rn_k(j, i, k))) fail("Rn_k symmetry");
                if (!zero(c.Rn_nk(i, j, k) - c.Rn_nk(j, i, k))) fail("Rn_nk symmetry");
            }
        }
        if (!zero(tr)) fail("Rn_k trace (R_nn;k = 0)");
        S trn{0};
        for (int i = 0; i < m; ++i) trn += c.Rn_nk(i, i, k);
        if (!zero(trn)) fail("Rn_nk trace (R_nn;nk = 0)");
    }
    symmetric2(c.Rn_n, "Rn_n");
    if (!zero(detail::trace(c.Rn_n))) fail("Rn_n trace (R_nn;n = 0)");

    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l)
                    if (!zero(c.Rn_kl(i, j, k, l) - c.Rn_kl(j, i, k, l))) fail("Rn_kl symmetry in (i,j)");
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
            S tr{0};
            for (int i = 0; i < m; ++i) tr += c.Rn_kl(i, i, k, l) + c.Rn_kl(i, i, l, k);
            if (!zero(tr)) fail("Rn_kl trace (Sym_kl R_nn;kl = 0)");
        }
    if (!zero(detail::contraction_ijij(c.Rn_kl) - c.D_channel()))
        fail("Rn_kl contraction (R_ninj;ij = -R_;nn/2 - (R_ninj)^2)");

    symmetric2(c.Rn_nn, "Rn_nn");
    if (!zero(detail::trace(c.Rn_nn) + S(2) * Sch)) fail("Rn_nn trace (R_nn;nn = -2 (R_ninj)^2)");

    symmetric2(c.Rs_ij, "Rs_ij");
    if (!zero(detail::trace(c.Rs_ij) + W2 / S(6))) fail("Rs_ij trace (R_;ii = -(Wbar)^2 / 6)");
}

/// Weyl part of an algebraic curvature tensor in dimension `dim` (flat metric):
/// W = R - (Ric (.) g)/(dim - 2) + scal (g_ac g_bd - g_ad g_bc)/((dim - 2)(dim - 1)),
/// with Ric_bd = sum_a R_abad.
template <class S>
Tensor<S> weyl_part(const Tensor<S>& R) {
    const int d = R.dim();
    if (d < 3) return Tensor<S>(4, d);
    Tensor<S> ric(2, d);
    S scal{0};
    for (int b = 0; b < d; ++b)
        for (int e = 0; e < d; ++e) {
            S s{0};
            for (int a = 0; a < d; ++a) s += R(a, b, a, e);
            ric(b, e) = s;
        }
    for (int b = 0; b < d; ++b) scal += ric(b, b);
    auto g = [](int x, int y) { return x == y ? S(1) : S(0); };
    Tensor<S> W(4, d);
    const S c1 = S(1) / S(d - 2);
    const S c2 = scal / S((d - 2) * (d - 1));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e) {
                    W(a, b, c, e) = R(a, b, c, e) -
                                    c1 * (ric(a, c) * g(b, e) - ric(a, e) * g(b, c) + ric(b, e) * g(a, c) -
                                          ric(b, c) * g(a, e)) +
                                    c2 * (g(a, c) * g(b, e) - g(a, e) * g(b, c));
                }
    return W;
}

/// Full n-dimensional Weyl tensor at x0 (index n - 1 is the normal):
///   W_ninj = (n-3)/(n-2) R_ninj,  W_nijk = 0,
///   W_ijkl = Wbar_ijkl - (R_nink d_jl - R_ninl d_jk + R_njnl d_ik - R_njnk d_il)/(n-2).
template <class S>
Tensor<S> weyl_reconstruct(const BoundaryCurvature<S>& c) {
    const int n = c.n;
    const int m = c.m();
    const int N = n - 1;
    Tensor<S> W(4, n);
    auto d = [](int x, int y) { return x == y ? S(1) : S(0); };
    const S inv = S(1) / S(n - 2);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) {
                    W(i, j, k, l) = c.Wbar(i, j, k, l) -
                                    inv * (c.Rn(i, k) * d(j, l) - c.Rn(i, l) * d(j, k) +
                                           c.Rn(j, l) * d(i, k) - c.Rn(j, k) * d(i, l));
                }
    const S f = S(n - 3) / S(n - 2);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const S v = f * c.Rn(i, j);
            W(N, i, N, j) = v;
            W(i, N, j, N) = v;
            W(N, i, j, N) = -v;
            W(i, N, N, j) = -v;
        }
    return W;
}

/// Inverse of weyl_reconstruct on its image: recovers (Rn, Wbar) from W.
template <class S>
std::pair<Tensor<S>, Tensor<S>> recover_from_weyl(const Tensor<S>& W) {
    const int n = W.dim();
    const int m = n - 1;
    const int N = n - 1;
    if (n < 4) throw std::invalid_argument("recover_from_weyl: need n >= 4");
    Tensor<S> Rn(2, m);
    const S f = S(n - 2) / S(n - 3);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) Rn(i, j) = f * W(N, i, N, j);
    Tensor<S> Wbar(4, m);
    auto d = [](int x, int y) { return x == y ? S(1) : S(0); };
    const S inv = S(1) / S(n - 2);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l)
                    Wbar(i, j, k, l) = W(i, j, k, l) + inv * (Rn(i, k) * d(j, l) - Rn(i, l) * d(j, k) +
                                                            Rn(j, l) * d(i, k) - Rn(j, k) * d(i, l));
    return {Rn, Wbar};
}

struct RandomCurvatureOptions {
    /// Random (rather than isotropic) second-order jets Rn_kl, Rn_nn, Rs_ij.
    bool anisotropic_jets = true;
    /// Random trace-free odd-order jets Rn_k, Rn_n, Rn_nk (zero otherwise).
    bool odd_jets = false;
};

namespace detail {

inline Rational random_entry(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dist(-6, 6);
    return rat(dist(rng), 4);
}

inline Tensor<Rational> random_symmetric(std::mt19937_64& rng, int m) {
    Tensor<Rational> t(2, m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) t(i, j) = t(j, i) = random_entry(rng);
    return t;
}

inline void remove_trace(Tensor<Rational>& t, const Rational& target = 0) {
    const int m = t.dim();
    const Rational shift = (trace(t) - target) / m;
    for (int i = 0; i < m; ++i) t(i, i) -= shift;
}

/// (h (.) k)_abcd = h_ac k_bd + h_bd k_ac - h_ad k_bc - h_bc k_ad.
inline void add_kulkarni_nomizu(Tensor<Rational>& R, const Tensor<Rational>& h, const Tensor<Rational>& k) {
    const int d = R.dim();
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e)
                    R(a, b, c, e) += h(a, c) * k(b, e) + h(b, e) * k(a, c) - h(a, e) * k(b, c) -
                                     h(b, c) * k(a, e);
}

}  // namespace detail

/// Deterministic pseudo-random curvature data satisfying every base-point identity.
/// Wbar is nonzero only when the boundary has dimension >= 4 (n >= 5).
inline BoundaryCurvature<Rational> random_admissible(int n, unsigned long long seed, const Rational& scale = 1,
                                                     RandomCurvatureOptions opts = {}) {
    if (n < 3) throw std::invalid_argument("random_admissible: n must be >= 3");
    const int m = n - 1;
    std::mt19937_64 rng(seed);

    Tensor<Rational> Rn = detail::random_symmetric(rng, m);
    detail::remove_trace(Rn);
    for (auto& v : Rn.data()) v *= scale;

    Tensor<Rational> Wbar(4, m);
    if (m >= 4) {
        Tensor<Rational> R(4, m);
        for (int term = 0; term < 2; ++term) {
            auto h = detail::random_symmetric(rng, m);
            auto k = detail::random_symmetric(rng, m);
            detail::add_kulkarni_nomizu(R, h, k);
        }
        Wbar = weyl_part(R);
        for (auto& v : Wbar.data()) v *= scale / 4;
    }
    const Rational N2 = detail::random_entry(rng) * scale * scale;

    auto c = make_curvature<Rational>(n, std::move(Rn), std::move(Wbar), N2);

    if (opts.anisotropic_jets) {
        const Rational s2 = scale * scale;
        Tensor<Rational> T(4, m);
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j)
                for (int k = 0; k < m; ++k)
                    for (int l = k; l < m; ++l) {
                        const Rational v = detail::random_entry(rng) * s2;
                        T(i, j, k, l) = T(j, i, k, l) = T(i, j, l, k) = T(j, i, l, k) = v;
                    }
        for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) {
                Rational tr = 0;
                for (int a = 0; a < m; ++a) tr += T(a, a, k, l);
                for (int a = 0; a < m; ++a) T(a, a, k, l) -= tr / m;
            }
        const Rational fix = c.D_channel() - detail::contraction_ijij(T);
        const auto E = detail::isotropic_rn_kl<Rational>(m);
        for (std::size_t p = 0; p < T.size(); ++p) T.data()[p] += fix * E.data()[p];
        c.Rn_kl = std::move(T);

        auto Rnn = detail::random_symmetric(rng, m);
        for (auto& v : Rnn.data()) v *= s2;
        detail::remove_trace(Rnn, -2 * c.S_channel());
        c.Rn_nn = std::move(Rnn);

        auto Rs = detail::random_symmetric(rng, m);
        for (auto& v : Rs.data()) v *= s2;
        detail::remove_trace(Rs, -c.W2_channel() / 6);
        c.Rs_ij = std::move(Rs);

        std::erase_if(c.defaulted, [](const std::string& s) {
            return s == "Rn_kl" || s == "Rn_nn" || s == "Rs_ij";
        });
    }
    if (opts.odd_jets) {
        Tensor<Rational> Rk(3, m), Rnk(3, m);
        for (int k = 0; k < m; ++k) {
            Tensor<Rational> a = detail::random_symmetric(rng, m);
            Tensor<Rational> b = detail::random_symmetric(rng, m);
            detail::remove_trace(a);
            detail::remove_trace(b);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    Rk(i, j, k) = a(i, j) * scale;
                    Rnk(i, j, k) = b(i, j) * scale;
                }
        }
        auto Rnn1 = detail::random_symmetric(rng, m);
        detail::remove_trace(Rnn1);
        for (auto& v : Rnn1.data()) v *= scale;
        c.Rn_k = std::move(Rk);
        c.Rn_nk = std::move(Rnk);
        c.Rn_n = std::move(Rnn1);
        std::erase_if(c.defaulted, [](const std::string& s) {
            return s == "Rn_k" || s == "Rn_n" || s == "Rn_nk";
        });
    }
    return c;
}

inline BoundaryCurvature<double> to_double(const BoundaryCurvature<Rational>& c) {
    auto conv = [](const Rational& r) { return yamabe::to_double(r); };
    auto cast = [&](const Tensor<Rational>& t) {
        Tensor<double> r(t.rank(), t.dim());
        for (std::size_t k = 0; k < t.size(); ++k) r.data()[k] = conv(t.data()[k]);
        return r;
    };
    BoundaryCurvature<double> d;
    d.n = c.n;
    d.Rn = cast(c.Rn);
    d.Wbar = cast(c.Wbar);
    d.N2 = conv(c.N2);
    d.Rn_k = cast(c.Rn_k);
    d.Rn_n = cast(c.Rn_n);
    d.Rn_kl = cast(c.Rn_kl);
    d.Rn_nk = cast(c.Rn_nk);
    d.Rn_nn = cast(c.Rn_nn);
    d.Rs_ij = cast(c.Rs_ij);
    d.defaulted = c.defaulted;
    return d;
}

// ---------------------------------------------------------------------------
// Metric jet

/// Polynomial coefficients of g^{ij}(x) - delta^{ij} in the variables
/// (x_1, ..., x_{n-1}, x_n). In the Fermi gauge g^{nn} = 1 and g^{in} = 0.
template <class S>
struct MetricJet {
    int n = 0;
    int order = 0;
    std::vector<Polynomial<S>> entries;  // row-major (i, j), i, j < n - 1
    /// Jets that entered with their default value.
    std::vector<std::string> defaulted;

    int m() const { return n - 1; }
    const Polynomial<S>& entry(int i, int j) const { return entries.at(static_cast<std::size_t>(i * m() + j)); }
};

template <class S>
MetricJet<S> metric_inverse_jet(const BoundaryCurvature<S>& c, int order) {
    if (order < 2 || order > 4) {
        throw UnsupportedOrder("metric jet order " + std::to_string(order) + " (supported: 2, 3, 4)");
    }
    const int n = c.n;
    const int m = c.m();
    const int N = n - 1;  // variable index of x_n

    MetricJet<S> jet;
    jet.n = n;
    jet.order = order;
    jet.entries.assign(static_cast<std::size_t>(m * m), Polynomial<S>(n));
    for (const auto& name : c.defaulted) {
        const bool used = (order >= 3 && (name == "Rn_k" || name == "Rn_n")) ||
                          (order >= 4 && (name == "Rn_kl" || name == "Rn_nk" || name == "Rn_nn"));
        if (used) jet.defaulted.push_back(name);
    }

    auto mono = [n](std::initializer_list<int> vars) {
        Exponent e(n, 0);
        for (int v : vars) ++e[v];
        return e;
    };
    auto at = [&](int i, int j) -> Polynomial<S>& { return jet.entries[static_cast<std::size_t>(i * m + j)]; };

    const S third = S(1) / S(3);
    // v_is = sum_{k,l} Wbar_iksl x_k x_l, shared by the order-2 and order-4 terms.
    std::vector<Polynomial<S>> v(static_cast<std::size_t>(m * m), Polynomial<S>(n));
    for (int i = 0; i < m; ++i)
        for (int s = 0; s < m; ++s)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) {
                    const S& w = c.Wbar(i, k, s, l);
                    if (!(w == S(0))) v[static_cast<std::size_t>(i * m + s)].add_term(mono({k, l}), w);
                }

    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Polynomial<S>& g = at(i, j);
            // order 2
            g += v[static_cast<std::size_t>(i * m + j)] * third;
            g.add_term(mono({N, N}), c.Rn(i, j));
            if (order < 3) continue;
            // order 3
            for (int k = 0; k < m; ++k) g.add_term(mono({N, N, k}), c.Rn_k(i, j, k));
            g.add_term(mono({N, N, N}), c.Rn_n(i, j) * third);
            if (order < 4) continue;
            // order 4
            Polynomial<S> ww(n);
            for (int s = 0; s < m; ++s)
                ww += v[static_cast<std::size_t>(i * m + s)] * v[static_cast<std::size_t>(j * m + s)];
            g += ww * (S(1) / S(15));
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) g.add_term(mono({N, N, k, l}), c.Rn_kl(i, j, k, l) / S(2));
            // (1/3) Sym_ij(Wbar_iksl R_nsnj) x_n^2 x_k x_l
            Polynomial<S> sym(n);
            for (int s = 0; s < m; ++s) {
                sym += v[static_cast<std::size_t>(i * m + s)] * c.Rn(s, j);
                sym += v[static_cast<std::size_t>(j * m + s)] * c.Rn(s, i);
            }
            g += sym * Polynomial<S>::monomial(mono({N, N}), S(1) / S(6));
            for (int k = 0; k < m; ++k) g.add_term(mono({N, N, N, k}), c.Rn_nk(i, j, k) * third);
            S rr{0};
            for (int s = 0; s < m; ++s) rr += c.Rn(i, s) * c.Rn(s, j);
            g.add_term(mono({N, N, N, N}), c.Rn_nn(i, j) / S(12) + rr * S(2) / S(3));
        }
    return jet;
}

/// Leading scalar-curvature model R_g(x) = R_;ij x_i x_j / 2 + R_;nn x_n^2 / 2.
template <class S>
Polynomial<S> scalar_curvature_jet(const BoundaryCurvature<S>& c) {
    const int n = c.n;
    const int m = c.m();
    Polynomial<S> p(n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Exponent e(n, 0);
            ++e[i];
            ++e[j];
            p.add_term(e, c.Rs_ij(i, j) / S(2));
        }
    Exponent e(n, 0);
    e[n - 1] = 2;
    p.add_term(e, c.N2 / S(2));
    return p;
}

/// Fast floating-point evaluation of the order-4 metric jet and the scalar
/// curvature model; the hot path of the discrete quotient.
class JetEvaluator {
public:
    explicit JetEvaluator(const BoundaryCurvature<double>& c, int order = 4)
        : n_(c.n), m_(c.n - 1), order_(order), Wbar_(c.Wbar.data()), Rn_(c.Rn.data()),
          Rn_k_(c.Rn_k.data()), Rn_n_(c.Rn_n.data()), Rn_kl_(c.Rn_kl.data()), Rn_nk_(c.Rn_nk.data()),
          Rs_(c.Rs_ij.data()), N2_(c.N2) {
        if (order < 2 || order > 4) throw UnsupportedOrder("JetEvaluator order " + std::to_string(order));
        x4_.assign(static_cast<std::size_t>(m_ * m_), 0.0);
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j) {
                double rr = 0.0;
                for (int s = 0; s < m_; ++s) rr += Rn_[i * m_ + s] * Rn_[s * m_ + j];
                x4_[i * m_ + j] = c.Rn_nn(i, j) / 12.0 + 2.0 * rr / 3.0;
            }
        w_nonzero_ = std::any_of(Wbar_.begin(), Wbar_.end(), [](double w) { return w != 0.0; });
        odd_nonzero_ = std::any_of(Rn_k_.begin(), Rn_k_.end(), [](double w) { return w != 0.0; }) ||
                       std::any_of(Rn_n_.begin(), Rn_n_.end(), [](double w) { return w != 0.0; }) ||
                       std::any_of(Rn_nk_.begin(), Rn_nk_.end(), [](double w) { return w != 0.0; });
        v_.assign(static_cast<std::size_t>(m_ * m_), 0.0);
    }

    int n() const { return n_; }

    /// G[i*m + j] = g^{ij}(x) - delta^{ij}.
    void metric(std::span<const double> x, std::span<double> G) {
        const int m = m_;
        const double xn = x[m];
        const double xn2 = xn * xn;
        if (w_nonzero_) {
            for (int i = 0; i < m; ++i)
                for (int s = 0; s < m; ++s) {
                    const double* w = &Wbar_[static_cast<std::size_t>(((i * m) * m + s) * m)];
                    double acc = 0.0;
                    for (int k = 0; k < m; ++k) {
                        double inner = 0.0;
                        for (int l = 0; l < m; ++l) inner += w[k * m * m + l] * x[l];
                        acc += inner * x[k];
                    }
                    v_[i * m + s] = acc;
                }
        }
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                double g = Rn_[i * m + j] * xn2;
                if (w_nonzero_) g += v_[i * m + j] / 3.0;
                if (order_ >= 3 && odd_nonzero_) {
                    double t = 0.0;
                    for (int k = 0; k < m; ++k) t += Rn_k_[(i * m + j) * m + k] * x[k];
                    g += xn2 * t + Rn_n_[i * m + j] * xn2 * xn / 3.0;
                }
                if (order_ >= 4) {
                    if (w_nonzero_) {
                        double ww = 0.0, sym = 0.0;
                        for (int s = 0; s < m; ++s) {
                            ww += v_[i * m + s] * v_[j * m + s];
                            sym += v_[i * m + s] * Rn_[s * m + j] + v_[j * m + s] * Rn_[s * m + i];
                        }
                        g += ww / 15.0 + xn2 * sym / 6.0;
                    }
                    const double* t = &Rn_kl_[static_cast<std::size_t>((i * m + j) * m * m)];
                    double q = 0.0;
                    for (int k = 0; k < m; ++k) {
                        double inner = 0.0;
                        for (int l = 0; l < m; ++l) inner += t[k * m + l] * x[l];
                        q += inner * x[k];
                    }
                    g += 0.5 * xn2 * q;
                    if (odd_nonzero_) {
                        double r = 0.0;
                        for (int k = 0; k < m; ++k) r += Rn_nk_[(i * m + j) * m + k] * x[k];
                        g += xn2 * xn * r / 3.0;
                    }
                    g += x4_[i * m + j] * xn2 * xn2;
                }
                G[i * m + j] = g;
                G[j * m + i] = g;
            }
    }

    double scalar_curvature(std::span<const double> x) const {
        const int m = m_;
        double q = 0.0;
        for (int i = 0; i < m; ++i) {
            double inner = 0.0;
            for (int j = 0; j < m; ++j) inner += Rs_[i * m + j] * x[j];
            q += inner * x[i];
        }
        return 0.5 * q + 0.5 * N2_ * x[m] * x[m];
    }

private:
    int n_, m_, order_;
    std::vector<double> Wbar_, Rn_, Rn_k_, Rn_n_, Rn_kl_, Rn_nk_, Rs_;
    double N2_;
    std::vector<double> x4_;
    std::vector<double> v_;
    bool w_nonzero_ = false;
    bool odd_nonzero_ = false;
};

}  // namespace yamabe
