#pragma once

// Exact reduction of the radially symmetric half-space integrals
//
//     int_{R^n_+} y_n^a |ybar|^b ((1 + y_n)^2 + |ybar|^2)^{-c} dy
//
// to q * sigma_{n-2} * I, with I = J(n, n) and
//
//     J(alpha, m) = int_0^inf s^alpha / (1 + s^2)^m ds.
//
// The substitution ybar = (1 + y_n) z splits the integral into a unit-line
// factor int_0^inf t^a (1 + t)^{-(2c - b - n + 1)} dt and sigma_{n-2} J(b + n - 2, c).

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "yamabe/errors.hpp"
#include "yamabe/rational.hpp"
#include "yamabe/scaled_rational.hpp"

namespace yamabe {

/// int_0^inf t^k (1 + t)^{-m} dt = k! / ((m-1)(m-2)...(m-1-k)), for m > k + 1.
inline Rational unit_interval_power_integral(int k, int m) {
    if (k < 0 || m < 1) throw std::invalid_argument("unit_interval_power_integral: need k >= 0, m >= 1");
    if (m == k + 1) {
        throw DivergentIntegral(DivergentIntegral::Kind::Logarithmic,
                                "int t^" + std::to_string(k) + "/(1+t)^" + std::to_string(m) +
                                    " diverges logarithmically");
    }
    if (m < k + 1) {
        throw DivergentIntegral(DivergentIntegral::Kind::Power,
                                "int t^" + std::to_string(k) + "/(1+t)^" + std::to_string(m) +
                                    " diverges");
    }
    Rational den = 1;
    for (int j = 1; j <= k + 1; ++j) den *= (m - j);
    return factorial(k) / den;
}

inline bool half_line_convergent(int alpha, int m) { return alpha >= 0 && alpha + 1 < 2 * m; }

/// J(alpha, m) = q * J(p, p + 1) with p = alpha mod 2; J(0,1) = pi/2, J(1,2) = 1/2.
struct JNormalForm {
    Rational q;
    int parity = 0;
};

/// Walks J(alpha, m) down to its parity representative using only the
/// integration-by-parts recurrences:
///   J(alpha, m) = (alpha - 1) / (2m - alpha - 1) * J(alpha - 2, m)
///   J(p, m)     = (2m - 3 - p) / (2(m - 1))     * J(p, m - 1)
inline JNormalForm j_normal_form(int alpha, int m) {
    if (!half_line_convergent(alpha, m)) {
        throw DivergentIntegral(DivergentIntegral::Kind::Power,
                                "J(" + std::to_string(alpha) + "," + std::to_string(m) + ") diverges");
    }
    Rational q = 1;
    int a = alpha;
    while (a >= 2) {
        q *= rat(a - 1, 2 * m - a - 1);
        a -= 2;
    }
    int mm = m;
    while (mm > a + 1) {
        q *= rat(2 * mm - 3 - a, 2 * (mm - 1));
        --mm;
    }
    return {q, a};
}

/// Exact J(alpha1, m1) / J(alpha2, m2); both exponents must share parity.
inline Rational half_line_ratio(int alpha1, int m1, int alpha2, int m2) {
    const JNormalForm top = j_normal_form(alpha1, m1);
    const JNormalForm bottom = j_normal_form(alpha2, m2);
    if (top.parity != bottom.parity) {
        throw ParityMismatch("J(" + std::to_string(alpha1) + "," + std::to_string(m1) + ") / J(" +
                             std::to_string(alpha2) + "," + std::to_string(m2) +
                             ") is not rational: exponents differ in parity");
    }
    return top.q / bottom.q;
}

/// Numeric J(alpha, m) from the normal form.
inline double half_line_value(int alpha, int m) {
    const JNormalForm nf = j_normal_form(alpha, m);
    const double base = nf.parity == 0 ? std::numbers::pi / 2.0 : 0.5;
    return to_double(nf.q) * base;
}

/// Volume of the unit sphere S^k in R^{k+1}, by sigma_k = 2 pi / (k - 1) sigma_{k-2}.
inline double sphere_area(int k) {
    if (k < 0) throw std::invalid_argument("sphere_area: negative dimension");
    double s = (k % 2 == 0) ? 2.0 : 2.0 * std::numbers::pi;
    for (int j = (k % 2 == 0) ? 2 : 3; j <= k; j += 2) s *= 2.0 * std::numbers::pi / (j - 1);
    return s;
}

/// I = J(n, n).
inline double I_value(int n) { return half_line_value(n, n); }

struct IntegralSpec {
    int a = 0;  // power of y_n
    int b = 0;  // power of |ybar|
    int c = 1;  // power of the denominator
    int n = 3;

    /// Exponent of (1 + t) in the y_n factor after the substitution.
    int line_exponent() const { return 2 * c - b - n + 1; }
    bool radial_convergent() const { return b + n - 1 < 2 * c; }
    bool convergent() const { return radial_convergent() && a + 1 < line_exponent(); }
    bool log_divergent() const { return radial_convergent() && a + 1 == line_exponent(); }

    void validate() const {
        if (a < 0 || b < 0 || c < 1 || n < 3) throw std::invalid_argument("IntegralSpec: bad exponents");
    }

    std::string str() const {
        return "(a=" + std::to_string(a) + ",b=" + std::to_string(b) + ",c=" + std::to_string(c) +
               ",n=" + std::to_string(n) + ")";
    }
};

/// Radial factor J(b + n - 2, c) as a rational multiple of I = J(n, n).
inline Rational radial_factor_over_I(const IntegralSpec& spec) {
    spec.validate();
    if (!spec.radial_convergent()) {
        throw DivergentIntegral(DivergentIntegral::Kind::Power,
                                "radial part of " + spec.str() + " diverges");
    }
    return half_line_ratio(spec.b + spec.n - 2, spec.c, spec.n, spec.n);
}

/// Closed form of the half-space integral. Log-divergent integrals return the
/// coefficient of log(delta/eps) (the O(1) remainder is dropped) with log_flag set.
inline ScaledRational halfspace_closed_form(const IntegralSpec& spec) {
    spec.validate();
    const Rational radial = radial_factor_over_I(spec);
    const int m = spec.line_exponent();
    if (spec.a + 1 == m) return ScaledRational::sigma_I(radial, true);
    if (spec.a + 1 > m) {
        throw DivergentIntegral(DivergentIntegral::Kind::Power,
                                "y_n part of " + spec.str() + " diverges faster than log");
    }
    return ScaledRational::sigma_I(unit_interval_power_integral(spec.a, m) * radial);
}

/// Coefficient of log(delta/eps) in the integral over B^+_{delta/eps}: zero
/// when the integral converges.
inline ScaledRational log_coefficient(const IntegralSpec& spec) {
    if (spec.convergent()) {
        radial_factor_over_I(spec);  // parity check still applies
        return ScaledRational{};
    }
    ScaledRational v = halfspace_closed_form(spec);
    return v;
}

struct ExpansionIntegral {
    std::string name;
    IntegralSpec spec;
    ScaledRational value;
    /// n = 6 only: the integral stays bounded, so it has no log coefficient.
    bool bounded = false;
};

/// The six integrals of the energy expansion, indexed I1..I6:
///   I1 = y_n^2 |y|^4 / Z^n,     I2 = y_n^3 |y|^4 / Z^{n+1},  I3 = y_n^4 |y|^4 / Z^{n+1},
///   I4 = y_n^4 |y|^2 / Z^n,     I5 = y_n^2 / Z^{n-2},        I6 = |y|^2 / Z^{n-2}.
/// For n >= 7 the values are finite; for n = 6 they are log(delta/eps) coefficients.
inline std::vector<IntegralSpec> expansion_integral_specs(int n) {
    return {
        {2, 4, n, n}, {3, 4, n + 1, n}, {4, 4, n + 1, n},
        {4, 2, n, n}, {2, 0, n - 2, n}, {0, 2, n - 2, n},
    };
}

inline std::vector<ExpansionIntegral> expansion_integrals(int n) {
    if (n < 6) {
        throw std::invalid_argument("integral table needs n >= 6 (n = " + std::to_string(n) +
                                    " makes the closed forms singular)");
    }
    std::vector<ExpansionIntegral> out;
    const auto specs = expansion_integral_specs(n);
    for (std::size_t k = 0; k < specs.size(); ++k) {
        ExpansionIntegral e{"I" + std::to_string(k + 1), specs[k], {}, false};
        if (n == 6) {
            e.value = log_coefficient(specs[k]);
            e.bounded = specs[k].convergent();
        } else {
            e.value = halfspace_closed_form(specs[k]);
        }
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace yamabe
