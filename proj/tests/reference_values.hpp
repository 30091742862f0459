#pragma once

// Independent reference values, written out by hand from the closed-form
// expressions of the expansion. They are only used by the tests; the library
// derives all of them through the general reduction machinery.

#include "yamabe/rational.hpp"

namespace yamabe::reference {

/// I_k / (sigma_{n-2} I) for the finite case n >= 7, k = 1..6.
inline Rational finite_integral(int k, int n) {
    const Rational N = n;
    switch (k) {
        case 1: return 2 * (N + 1) / ((N - 3) * (N - 4) * (N - 5) * (N - 6));
        case 2: return 3 * (N + 1) / (N * (N - 2) * (N - 3) * (N - 4) * (N - 5));
        case 3: return 12 * (N + 1) / (N * (N - 2) * (N - 3) * (N - 4) * (N - 5) * (N - 6));
        case 4: return 24 / ((N - 2) * (N - 3) * (N - 4) * (N - 5) * (N - 6));
        case 5: return 8 * (N - 2) / ((N - 3) * (N - 4) * (N - 5) * (N - 6));
        case 6: return 4 * (N - 1) * (N - 2) / ((N - 3) * (N - 5) * (N - 6));
        default: return 0;
    }
}

/// Coefficient of sigma_{n-2} I log(delta/eps) in I_k for n = 6 (zero: bounded).
inline Rational log_coefficient_n6(int k) {
    const Rational N = 6;
    switch (k) {
        case 1: return (N + 1) / (N - 3);
        case 2: return 0;
        case 3: return (N + 1) / (2 * N);
        case 4: return 1;
        case 5: return 4 * (N - 2) / (N - 3);
        case 6: return 4 * (N - 1) * (N - 2) / ((N - 3) * (N - 5));
        default: return 0;
    }
}

/// gamma = 1/((n-1)(n-2)(n-3)(n-4)(n-5)(n-6)) for n >= 7.
inline Rational gamma(int n) {
    Rational g = 1;
    for (int k = 1; k <= 6; ++k) g *= n - k;
    return 1 / g;
}

/// Bracket polynomial p(A) = c0 + c1 A + c2 A^2 multiplying S in the final expansion.
struct Bracket {
    Rational c0, c1, c2;
    Rational at(const Rational& A) const { return c0 + c1 * A + c2 * A * A; }
};

inline Bracket bracket(int n) {
    const Rational N = n;
    if (n == 6) {
        return {(N - 2) * (N - 2) * (N - 5) / (2 * (N - 1) * (N - 3)), -2 * (N - 2) / (N - 1),
                (6 * (N - 3) - 4) / ((N - 1) * (N - 3))};
    }
    return {2 * (8 - N) * (N - 2) * (N - 2), -48 * (N - 2), 16 * (N + 1)};
}

/// Bracket values at A = 1.
inline Rational endgame(int n) {
    switch (n) {
        case 6: return rat(-2, 15);
        case 7: return -62;
        case 8: return -144;
        default: return 0;
    }
}

/// W2 coefficient over sigma_{n-2} I (times log(delta/eps) for n = 6).
inline Rational w2_over_sigma_I(int n) {
    const Rational N = n;
    if (n == 6) return -(N - 2) * (N - 2) / (12 * (N - 1) * (N - 3) * (N - 5));
    // -(n-2)/(48(n-1)^2) times I6, with I6 = sigma I * 4(n-1)(n-2)/((n-3)(n-5)(n-6)) for n >= 7.
    return -(N - 2) / (48 * (N - 1) * (N - 1)) * 4 * (N - 1) * (N - 2) / ((N - 3) * (N - 5) * (N - 6));
}

/// Vertex of the bracket polynomial, -c1 / (2 c2).
inline Rational vertex(int n) {
    const Bracket b = bracket(n);
    return -b.c1 / (2 * b.c2);
}

}  // namespace yamabe::reference
