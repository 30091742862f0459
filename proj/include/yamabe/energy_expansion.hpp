#pragma once

// The eps^4 coefficient of the energy of the test function, assembled term by
// term from the exact half-space integrals, the channel cancellation that
// removes R_{;nn} and R_{ninj;ij}, and the resulting sign certificate.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "yamabe/curvature.hpp"
#include "yamabe/errors.hpp"
#include "yamabe/exact_integrals.hpp"
#include "yamabe/quadrature.hpp"
#include "yamabe/rational.hpp"
#include "yamabe/scaled_rational.hpp"

namespace yamabe {

/// Curvature channels the coefficient decomposes over:
///   S = (R_ninj)^2, D = R_ninj;ij, N2 = R_;nn, W2 = (Wbar_ijkl)^2.
enum class Channel { S, D, N2, W2 };

inline const char* channel_name(Channel c) {
    switch (c) {
        case Channel::S: return "S";
        case Channel::D: return "D";
        case Channel::N2: return "N2";
        case Channel::W2: return "W2";
    }
    return "?";
}

/// c0 + c1 A + c2 A^2 with exact coefficients of any scalar type.
template <class T>
struct QuadraticInA {
    std::array<T, 3> c{};

    QuadraticInA& operator+=(const QuadraticInA& o) {
        for (int k = 0; k < 3; ++k) c[k] += o.c[k];
        return *this;
    }
    template <class F>
    QuadraticInA& operator*=(const F& f) {
        for (auto& v : c) v *= f;
        return *this;
    }
    bool is_zero() const {
        for (const auto& v : c)
            if (!(v == T{})) return false;
        return true;
    }
    friend bool operator==(const QuadraticInA& a, const QuadraticInA& b) { return a.c == b.c; }
};

using ExactQuadratic = QuadraticInA<Rational>;

inline Rational evaluate(const ExactQuadratic& p, const Rational& A) { return p.c[0] + p.c[1] * A + p.c[2] * A * A; }

inline ScaledRational evaluate(const QuadraticInA<ScaledRational>& p, const Rational& A) {
    return p.c[0] + p.c[1] * A + p.c[2] * (A * A);
}

enum class ErrorClass { Eps4DeltaMinus4, Eps5Log, Eps5 };

inline const char* error_class_name(ErrorClass e) {
    switch (e) {
        case ErrorClass::Eps4DeltaMinus4: return "O(eps^4 delta^-4)";
        case ErrorClass::Eps5Log: return "O(eps^5 log(delta/eps))";
        case ErrorClass::Eps5: return "O(eps^5)";
    }
    return "?";
}

struct ExpansionTerm {
    /// Integral label I1..I6.
    std::string integral;
    /// Rational prefactor, without the power of A.
    Rational prefactor;
    int A_power = 0;
    Channel channel = Channel::S;
    /// Exact integral (log(delta/eps) coefficient for n = 6).
    ScaledRational integral_value;
    /// n = 6: the integral stays bounded, so the term is absent from the log part.
    bool bounded = false;

    ScaledRational contribution() const { return integral_value * prefactor; }
};

struct ExpansionReport {
    int n = 0;
    std::vector<ExpansionTerm> terms;
    /// eps^4 coefficient per channel, as a polynomial in A.
    std::map<Channel, QuadraticInA<ScaledRational>> channels;
    ErrorClass error_class = ErrorClass::Eps5;
    bool cancelled = false;
    bool log_channel() const { return n == 6; }

    const QuadraticInA<ScaledRational>& channel(Channel c) const {
        static const QuadraticInA<ScaledRational> zero{};
        auto it = channels.find(c);
        return it == channels.end() ? zero : it->second;
    }
};

/// The eight eps^4 terms of the energy bound, each (prefactor) x (integral) x (channel) x A^k.
inline ExpansionReport assemble_expansion(int n) {
    if (n < 6) throw std::invalid_argument("assemble_expansion: n must be >= 6");
    const auto integrals = expansion_integrals(n);
    auto I = [&](int k) -> const ExpansionIntegral& { return integrals.at(static_cast<std::size_t>(k - 1)); };
    const Rational np1nm1 = (n + 1) * (n - 1);
    const Rational nm1 = n - 1;
    const Rational nm2 = n - 2;

    struct Row {
        int integral;
        Rational prefactor;
        int A_power;
        Channel channel;
    };
    const std::vector<Row> rows{
        {1, Rational(-4) / np1nm1, 2, Channel::S},
        {1, nm2 * nm2 / np1nm1, 0, Channel::D},
        {2, Rational(8 * n) / np1nm1, 2, Channel::S},
        {3, Rational(12 * n) / np1nm1, 2, Channel::S},
        {3, Rational(-4 * n * (n - 2)) / np1nm1, 1, Channel::S},
        {4, nm2 * nm2 / (2 * nm1), 0, Channel::S},
        {5, nm2 / (8 * nm1), 0, Channel::N2},
        {6, -nm2 / (48 * nm1 * nm1), 0, Channel::W2},
    };

    ExpansionReport rep;
    rep.n = n;
    rep.error_class = n == 6 ? ErrorClass::Eps4DeltaMinus4 : (n == 7 ? ErrorClass::Eps5Log : ErrorClass::Eps5);
    for (const auto& row : rows) {
        ExpansionTerm t{I(row.integral).name, row.prefactor, row.A_power, row.channel, I(row.integral).value,
                        I(row.integral).bounded};
        rep.channels[row.channel].c[static_cast<std::size_t>(row.A_power)] += t.contribution();
        rep.terms.push_back(std::move(t));
    }
    return rep;
}

/// Substitutes D = -N2/2 - S and checks that the N2 channel cancels exactly.
inline ExpansionReport apply_cancellation(ExpansionReport rep) {
    if (rep.cancelled) return rep;
    const QuadraticInA<ScaledRational> d = rep.channel(Channel::D);
    auto& s = rep.channels[Channel::S];
    auto& n2 = rep.channels[Channel::N2];
    for (int k = 0; k < 3; ++k) {
        s.c[static_cast<std::size_t>(k)] -= d.c[static_cast<std::size_t>(k)];
        n2.c[static_cast<std::size_t>(k)] -= d.c[static_cast<std::size_t>(k)] / Rational(2);
    }
    rep.channels[Channel::D] = {};
    if (!n2.is_zero()) {
        throw CancellationFailure("R_;nn channel survives the substitution: " + n2.c[0].str() + " + " +
                                  n2.c[1].str() + " A + " + n2.c[2].str() + " A^2");
    }
    rep.cancelled = true;
    return rep;
}

/// Normalization of the S-channel polynomial: gamma sigma I for n >= 7 with
/// gamma = 1 / ((n-1)(n-2)(n-3)(n-4)(n-5)(n-6)), and sigma I log(delta/eps) for n = 6.
inline ScaledRational s_channel_normalization(int n) {
    if (n == 6) return ScaledRational::sigma_I(1, true);
    Rational g = 1;
    for (int k = 1; k <= 6; ++k) g *= (n - k);
    return ScaledRational::sigma_I(Rational(1) / g);
}

/// The normalized S-channel polynomial P(A), derived from the assembled expansion.
inline ExactQuadratic s_channel_polynomial(int n) {
    const ExpansionReport rep = apply_cancellation(assemble_expansion(n));
    const ScaledRational norm = s_channel_normalization(n);
    ExactQuadratic p;
    for (std::size_t k = 0; k < 3; ++k) p.c[k] = rep.channel(Channel::S).c[k] / norm;
    return p;
}

/// The endgame polynomial in the form it is displayed for each branch:
///   n >= 7: 16(n+1) A^2 - 48(n-2) A + 2(8-n)(n-2)^2
///   n = 6:  (6(n-3)-4)/((n-1)(n-3)) A^2 - 2(n-2)/(n-1) A + (n-2)^2(n-5)/(2(n-1)(n-3))
inline ExactQuadratic displayed_polynomial(int n) {
    ExactQuadratic p;
    if (n == 6) {
        p.c[2] = Rational(6 * (n - 3) - 4) / ((n - 1) * (n - 3));
        p.c[1] = Rational(-2 * (n - 2)) / (n - 1);
        p.c[0] = Rational((n - 2) * (n - 2) * (n - 5)) / (2 * (n - 1) * (n - 3));
    } else {
        p.c[2] = 16 * (n + 1);
        p.c[1] = -48 * (n - 2);
        p.c[0] = 2 * (8 - n) * (n - 2) * (n - 2);
    }
    return p;
}

/// Normalized P(A) for n in {6, 7, 8}.
inline Rational coefficient_at(int n, const Rational& A) {
    if (n < 6 || n > 8) throw std::invalid_argument("coefficient_at: n must be 6, 7 or 8");
    return evaluate(s_channel_polynomial(n), A);
}

struct OptimalA {
    Rational A;
    Rational P_at_A;
    Rational P_at_1;
};

/// Vertex of the upward parabola P(A).
inline OptimalA optimal_A(int n) {
    if (n < 6 || n > 8) throw std::invalid_argument("optimal_A: n must be 6, 7 or 8");
    const ExactQuadratic p = s_channel_polynomial(n);
    if (p.c[2] <= 0) throw std::logic_error("optimal_A: P is not convex in A");
    OptimalA o;
    o.A = -p.c[1] / (2 * p.c[2]);
    o.P_at_A = evaluate(p, o.A);
    o.P_at_1 = evaluate(p, Rational(1));
    if (o.P_at_A > o.P_at_1) throw std::logic_error("optimal_A: vertex does not minimize P");
    return o;
}

/// Exact W2-channel coefficient -(n-2)/(48(n-1)^2) I6 (log coefficient for n = 6).
inline ScaledRational w2_coefficient(int n) { return assemble_expansion(n).channel(Channel::W2).c[0]; }

struct QuadratureResidual {
    std::string integral;
    double exact = 0.0;
    double numeric = 0.0;
    double relative = 0.0;
    /// "value" for finite integrals, "log slope" for n = 6.
    std::string mode;
};

/// Checks every integral of the expansion against reduced_2d quadrature.
inline std::vector<QuadratureResidual> integral_residuals(int n, const QuadratureConfig& cfg = {}) {
    std::vector<QuadratureResidual> out;
    const double sigma = sphere_area(n - 2);
    const double I = I_value(n);
    for (const auto& pi : expansion_integrals(n)) {
        QuadratureResidual r;
        r.integral = pi.name;
        r.exact = pi.value.is_zero() ? 0.0 : pi.value.to_double(sigma, I);
        if (n == 6) {
            r.mode = "log slope";
            r.numeric = reduced_2d_log_fit(pi.spec, {1e2, 1e3, 1e4}, cfg).slope;
            // A bounded integral has slope 0; measure it against the unit-line scale sigma I.
            const double scale = pi.bounded ? sigma * I : std::abs(r.exact);
            r.relative = std::abs(r.numeric - r.exact) / scale;
        } else {
            r.mode = "value";
            r.numeric = reduced_2d(pi.spec, cfg).value;
            r.relative = std::abs(r.numeric - r.exact) / std::abs(r.exact);
        }
        out.push_back(r);
    }
    return out;
}

struct Certificate {
    int n = 0;
    Rational A_used;
    /// Normalized S-channel value P(A).
    Rational P_value;
    /// The normalization P is measured in ("gamma*sigma*I" or "sigma*I*log(delta/eps)").
    std::string normalization;
    ScaledRational S_coefficient;
    ScaledRational W2_coefficient;
    Rational S;
    Rational W2;
    /// eps^4 (or eps^4 log) coefficient of the energy, c_S S + c_W2 W2.
    ScaledRational total;
    OptimalA optimum;
    ErrorClass error_class = ErrorClass::Eps5;
    bool verdict = false;
    std::string justification;
    std::vector<QuadratureResidual> quadrature_residuals;
};

/// Certifies that the eps^4 energy coefficient is negative for the given curvature.
/// Requires W(x0) != 0, which forces S > 0 or W2 > 0.
inline Certificate certify(int n, const BoundaryCurvature<Rational>& curv, const Rational& A = 1,
                           bool with_quadrature = false) {
    if (n < 6 || n > 8) {
        throw PreconditionViolation("certificate covers n = 6, 7, 8 only (got n = " + std::to_string(n) + ")");
    }
    if (curv.n != n) throw std::invalid_argument("certify: curvature data is for n = " + std::to_string(curv.n));
    validate(curv);
    if (weyl_reconstruct(curv).all_zero()) {
        throw PreconditionViolation("W(x0) = 0: the strict inequality is not claimed at an umbilic point with vanishing Weyl tensor");
    }
    const ExpansionReport rep = apply_cancellation(assemble_expansion(n));
    Certificate c;
    c.n = n;
    c.A_used = A;
    c.error_class = rep.error_class;
    c.normalization = n == 6 ? "sigma*I*log(delta/eps)" : "gamma*sigma*I";
    c.S_coefficient = evaluate(rep.channel(Channel::S), A);
    c.W2_coefficient = rep.channel(Channel::W2).c[0];
    c.P_value = c.S_coefficient / s_channel_normalization(n);
    c.S = curv.S_channel();
    c.W2 = curv.W2_channel();
    c.total = c.S_coefficient * c.S + c.W2_coefficient * c.W2;
    c.optimum = optimal_A(n);

    const bool s_active = c.S > 0;
    const bool w_active = c.W2 > 0;
    const bool s_ok = !s_active || c.P_value < 0;
    const bool w_ok = c.W2_coefficient.sign() < 0;
    c.verdict = (s_active || w_active) && s_ok && w_ok && c.total.sign() < 0;

    std::string why = "W(x0) != 0, so (R_ninj, Wbar) != 0: ";
    why += s_active ? "S > 0" : "S = 0";
    why += w_active ? ", W2 > 0" : ", W2 = 0";
    why += "; P(" + to_string(A) + ") = " + to_string(c.P_value) + " (" + c.normalization + ")";
    why += "; W2 coefficient " + c.W2_coefficient.str();
    why += c.verdict ? "; eps^4 coefficient " + c.total.str() + " < 0" : "; no strict decrease certified";
    c.justification = why;

    if (with_quadrature) c.quadrature_residuals = integral_residuals(n);
    return c;
}

}  // namespace yamabe
