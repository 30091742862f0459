#pragma once

// The standard bubble U_eps, the curvature correction phi_eps, the cut-off chi
// and the test function psi = chi(|x|) (U_eps + phi_eps) on the half-space
// {x_n >= 0}. The last coordinate is the normal one.
//
//   U_eps(x)   = eps^{(n-2)/2} Z^{-(n-2)/2},            Z = |xbar|^2 + (eps + x_n)^2
//   phi_eps(x) = eps^{(n-2)/2} A R_ninj x_i x_j x_n^2 Z^{-n/2}

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "yamabe/curvature.hpp"
#include "yamabe/exact_integrals.hpp"
#include "yamabe/rational.hpp"

namespace yamabe {

struct BubbleParams {
    int n = 6;
    double eps = 1.0;
    double A = 0.0;
    /// Inner cut-off radius; chi vanishes beyond 2 delta.
    double delta = 0.25;
    /// R_ninj, row-major (n-1) x (n-1). Empty means zero.
    std::vector<double> Rn;

    static BubbleParams from(const BoundaryCurvature<double>& c, double eps, double A, double delta) {
        return {c.n, eps, A, delta, c.Rn.data()};
    }
};

/// C^2 quintic cut-off: chi = 1 on [0, delta], chi = 0 on [2 delta, inf),
/// chi = 1 - (10 t^3 - 15 t^4 + 6 t^5) with t = (r - delta)/delta in between.
/// 0 <= chi <= 1 and |chi'| <= 15/(8 delta).
inline double cutoff(double r, double delta) {
    if (r <= delta) return 1.0;
    if (r >= 2.0 * delta) return 0.0;
    const double t = (r - delta) / delta;
    return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

inline double cutoff_derivative(double r, double delta) {
    if (r <= delta || r >= 2.0 * delta) return 0.0;
    const double t = (r - delta) / delta;
    return -30.0 * t * t * (1.0 - t) * (1.0 - t) / delta;
}

inline constexpr double cutoff_derivative_bound = 15.0 / 8.0;

/// Closed-form evaluation of the bubble family at given parameters.
class Bubble {
public:
    explicit Bubble(BubbleParams p) : p_(std::move(p)), m_(p_.n - 1) {
        if (p_.n < 3) throw std::invalid_argument("Bubble: n must be >= 3");
        if (!(p_.eps > 0.0)) throw std::invalid_argument("Bubble: eps must be positive");
        if (!p_.Rn.empty() && static_cast<int>(p_.Rn.size()) != m_ * m_)
            throw std::invalid_argument("Bubble: Rn has the wrong size");
        if (p_.Rn.empty()) p_.Rn.assign(static_cast<std::size_t>(m_ * m_), 0.0);
        half_ = 0.5 * (p_.n - 2);
        scale_ = std::pow(p_.eps, half_);
    }

    const BubbleParams& params() const { return p_; }

    double Z(std::span<const double> x) const {
        double s = 0.0;
        for (int i = 0; i < m_; ++i) s += x[i] * x[i];
        const double t = p_.eps + x[m_];
        return s + t * t;
    }

    double U(std::span<const double> x) const { return scale_ * std::pow(Z(x), -half_); }

    /// grad U = -(n-2) eps^{(n-2)/2} Z^{-n/2} (xbar, eps + x_n).
    void grad_U(std::span<const double> x, std::span<double> g) const {
        const double z = Z(x);
        const double f = -(p_.n - 2) * scale_ * std::pow(z, -0.5 * p_.n);
        for (int i = 0; i < m_; ++i) g[i] = f * x[i];
        g[m_] = f * (p_.eps + x[m_]);
    }

    /// Exact second derivatives of U, row-major n x n.
    void hessian_U(std::span<const double> x, std::span<double> H) const {
        const int n = p_.n;
        const double z = Z(x);
        std::vector<double> w(x.begin(), x.begin() + n);
        w[m_] += p_.eps;
        const double a = -(n - 2) * scale_ * std::pow(z, -0.5 * n);
        const double b = (n - 2) * n * scale_ * std::pow(z, -0.5 * n - 1.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) H[i * n + j] = (i == j ? a : 0.0) + b * w[i] * w[j];
    }

    double laplacian_U(std::span<const double> x) const {
        std::vector<double> H(static_cast<std::size_t>(p_.n * p_.n));
        hessian_U(x, H);
        double s = 0.0;
        for (int i = 0; i < p_.n; ++i) s += H[i * p_.n + i];
        return s;
    }

    /// Neumann residual dU/dx_n + (n-2) U^{n/(n-2)} at a boundary point (x_n = 0).
    double boundary_residual(std::span<const double> xbar) const {
        std::vector<double> x(xbar.begin(), xbar.begin() + m_);
        x.push_back(0.0);
        std::vector<double> g(static_cast<std::size_t>(p_.n));
        grad_U(x, g);
        return g[m_] + (p_.n - 2) * std::pow(U(x), static_cast<double>(p_.n) / (p_.n - 2));
    }

    /// R_ninj x_i x_j.
    double q(std::span<const double> x) const {
        double s = 0.0;
        for (int i = 0; i < m_; ++i) {
            double inner = 0.0;
            for (int j = 0; j < m_; ++j) inner += p_.Rn[i * m_ + j] * x[j];
            s += inner * x[i];
        }
        return s;
    }

    double phi(std::span<const double> x) const {
        const double xn = x[m_];
        return scale_ * p_.A * q(x) * xn * xn * std::pow(Z(x), -0.5 * p_.n);
    }

    void grad_phi(std::span<const double> x, std::span<double> g) const {
        const int n = p_.n;
        const double xn = x[m_];
        const double z = Z(x);
        const double zp = std::pow(z, -0.5 * n);
        const double c = scale_ * p_.A;
        double qv = 0.0;
        for (int i = 0; i < m_; ++i) {
            double rx = 0.0;
            for (int j = 0; j < m_; ++j) rx += p_.Rn[i * m_ + j] * x[j];
            g[i] = 2.0 * rx;  // grad q, finished below
            qv += rx * x[i];
        }
        const double zp1 = zp / z;
        for (int i = 0; i < m_; ++i) g[i] = c * xn * xn * (g[i] * zp - n * qv * zp1 * x[i]);
        g[m_] = c * qv * (2.0 * xn * zp - n * xn * xn * zp1 * (p_.eps + xn));
    }

    /// Laplacian of phi_eps through the rescaled closed form
    ///   Delta phi(y) = A q(y) [2 Z^{-n/2} - 4 n y_n Z^{-(n+2)/2} - 6 n y_n^2 Z^{-(n+2)/2}],
    /// with Delta_x phi_eps(x) = eps^{-(n-2)/2} (Delta phi)(x / eps).
    double laplacian_phi(std::span<const double> x) const {
        const int n = p_.n;
        std::vector<double> y(x.begin(), x.begin() + n);
        for (auto& v : y) v /= p_.eps;
        return laplacian_phi_rescaled(y) / scale_;
    }

    /// Delta phi in the rescaled variable y (bubble at eps = 1).
    double laplacian_phi_rescaled(std::span<const double> y) const {
        const int n = p_.n;
        double zy = 0.0;
        for (int i = 0; i < m_; ++i) zy += y[i] * y[i];
        zy += (1.0 + y[m_]) * (1.0 + y[m_]);
        const double qv = q(y);
        const double yn = y[m_];
        const double a = std::pow(zy, -0.5 * n);
        const double b = std::pow(zy, -0.5 * (n + 2));
        return p_.A * qv * (2.0 * a - 4.0 * n * yn * b - 6.0 * n * yn * yn * b);
    }

    double chi(std::span<const double> x) const { return cutoff(norm(x), p_.delta); }

    double psi(std::span<const double> x) const {
        const double c = chi(x);
        return c == 0.0 ? 0.0 : c * (U(x) + phi(x));
    }

    void grad_psi(std::span<const double> x, std::span<double> g) const {
        const int n = p_.n;
        const double r = norm(x);
        const double c = cutoff(r, p_.delta);
        if (c == 0.0) {
            for (int i = 0; i < n; ++i) g[i] = 0.0;
            return;
        }
        std::vector<double> gu(static_cast<std::size_t>(n)), gp(static_cast<std::size_t>(n));
        grad_U(x, gu);
        grad_phi(x, gp);
        const double dc = cutoff_derivative(r, p_.delta);
        const double v = U(x) + phi(x);
        for (int i = 0; i < n; ++i) g[i] = c * (gu[i] + gp[i]) + (r > 0.0 ? dc * v * x[i] / r : 0.0);
    }

private:
    double norm(std::span<const double> x) const {
        double s = 0.0;
        for (int i = 0; i < p_.n; ++i) s += x[i] * x[i];
        return std::sqrt(s);
    }

    BubbleParams p_;
    int m_;
    double half_ = 0.0;
    double scale_ = 1.0;
};

/// Sharp constant Q(B^n, dB) = (n - 2) (int_{R^{n-1}} U^{2(n-1)/(n-2)})^{1/(n-1)},
/// where the boundary integral equals sigma_{n-2} J(n - 2, n - 1).
struct SharpConstant {
    int n = 0;
    /// J(n-2, n-1) = q * J(p, p + 1), p = n mod 2.
    JNormalForm boundary_radial;
    double boundary_integral = 0.0;
    double value = 0.0;
};

inline SharpConstant sharp_constant(int n) {
    if (n < 3) throw std::invalid_argument("sharp_constant: n must be >= 3");
    SharpConstant s;
    s.n = n;
    s.boundary_radial = j_normal_form(n - 2, n - 1);
    s.boundary_integral = sphere_area(n - 2) * half_line_value(n - 2, n - 1);
    s.value = (n - 2) * std::pow(s.boundary_integral, 1.0 / (n - 1));
    return s;
}

}  // namespace yamabe
