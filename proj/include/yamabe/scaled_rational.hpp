#pragma once

#include <cmath>
#include <ostream>
#include <string>

#include "yamabe/errors.hpp"
#include "yamabe/rational.hpp"

namespace yamabe {

/// Exact value of the form q * sigma^sigma_pow * I^I_pow [* log(delta/eps)],
/// where sigma = |S^{n-2}| and I = int_0^inf r^n / (1 + r^2)^n dr.
///
/// `divergent` marks an integral that diverges faster than logarithmically;
/// such a value has no finite interpretation and refuses arithmetic.
class ScaledRational {
public:
    ScaledRational() = default;
    ScaledRational(Rational q, int sigma_pow = 0, int I_pow = 0, bool log_flag = false)
        : q_(std::move(q)), sigma_pow_(sigma_pow), I_pow_(I_pow), log_flag_(log_flag) {
        normalize();
    }

    static ScaledRational divergent_value() {
        ScaledRational v;
        v.divergent_ = true;
        return v;
    }

    /// q * sigma * I, the shape every half-space integral reduces to.
    static ScaledRational sigma_I(Rational q, bool log_flag = false) {
        return ScaledRational(std::move(q), 1, 1, log_flag);
    }

    const Rational& q() const { return q_; }
    int sigma_pow() const { return sigma_pow_; }
    int I_pow() const { return I_pow_; }
    bool log_flag() const { return log_flag_; }
    bool divergent() const { return divergent_; }
    bool is_zero() const { return !divergent_ && q_ == 0; }

    /// Sign of the value; sigma, I and log(delta/eps) (for eps < delta) are positive.
    int sign() const {
        require_finite();
        return q_ > 0 ? 1 : (q_ < 0 ? -1 : 0);
    }

    bool same_basis(const ScaledRational& o) const {
        return sigma_pow_ == o.sigma_pow_ && I_pow_ == o.I_pow_ && log_flag_ == o.log_flag_;
    }

    double to_double(double sigma, double I, double log_value = 1.0) const {
        require_finite();
        double v = yamabe::to_double(q_) * std::pow(sigma, sigma_pow_) * std::pow(I, I_pow_);
        return log_flag_ ? v * log_value : v;
    }

    ScaledRational operator-() const {
        require_finite();
        ScaledRational r = *this;
        r.q_ = -r.q_;
        return r;
    }

    ScaledRational& operator+=(const ScaledRational& o) {
        require_finite();
        o.require_finite();
        if (o.is_zero()) return *this;
        if (is_zero()) return *this = o;
        if (!same_basis(o)) {
            throw IncompatibleBasis("cannot add " + str() + " and " + o.str());
        }
        q_ += o.q_;
        normalize();
        return *this;
    }
    ScaledRational& operator-=(const ScaledRational& o) { return *this += -o; }

    ScaledRational& operator*=(const ScaledRational& o) {
        require_finite();
        o.require_finite();
        if (log_flag_ && o.log_flag_ && !is_zero() && !o.is_zero()) {
            throw IncompatibleBasis("log(delta/eps)^2 is not representable");
        }
        q_ *= o.q_;
        sigma_pow_ += o.sigma_pow_;
        I_pow_ += o.I_pow_;
        log_flag_ = log_flag_ || o.log_flag_;
        normalize();
        return *this;
    }
    ScaledRational& operator*=(const Rational& r) {
        require_finite();
        q_ *= r;
        normalize();
        return *this;
    }
    ScaledRational& operator/=(const Rational& r) {
        require_finite();
        if (r == 0) throw std::domain_error("ScaledRational: division by zero");
        q_ /= r;
        normalize();
        return *this;
    }

    friend ScaledRational operator+(ScaledRational a, const ScaledRational& b) { return a += b; }
    friend ScaledRational operator-(ScaledRational a, const ScaledRational& b) { return a -= b; }
    friend ScaledRational operator*(ScaledRational a, const ScaledRational& b) { return a *= b; }
    friend ScaledRational operator*(ScaledRational a, const Rational& r) { return a *= r; }
    friend ScaledRational operator*(const Rational& r, ScaledRational a) { return a *= r; }
    friend ScaledRational operator/(ScaledRational a, const Rational& r) { return a /= r; }

    /// Exact ratio of two values sharing a basis.
    friend Rational operator/(const ScaledRational& a, const ScaledRational& b) {
        a.require_finite();
        b.require_finite();
        if (b.is_zero()) throw std::domain_error("ScaledRational: division by zero");
        if (!a.is_zero() && !a.same_basis(b)) {
            throw IncompatibleBasis("ratio of " + a.str() + " and " + b.str() + " is not rational");
        }
        return a.q_ / b.q_;
    }

    friend bool operator==(const ScaledRational& a, const ScaledRational& b) {
        if (a.divergent_ || b.divergent_) return a.divergent_ == b.divergent_;
        return a.q_ == b.q_ && a.same_basis(b);
    }

    std::string str() const {
        if (divergent_) return "divergent";
        std::string s = to_string(q_);
        auto factor = [&s](const char* name, int p) {
            if (p == 0) return;
            s += std::string("*") + name;
            if (p != 1) s += "^" + std::to_string(p);
        };
        factor("sigma", sigma_pow_);
        factor("I", I_pow_);
        if (log_flag_) s += "*log(delta/eps)";
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const ScaledRational& v) { return os << v.str(); }

private:
    void normalize() {
        if (q_ == 0) {
            sigma_pow_ = 0;
            I_pow_ = 0;
            log_flag_ = false;
        }
    }
    void require_finite() const {
        if (divergent_) {
            throw DivergentIntegral(DivergentIntegral::Kind::Power,
                                    "arithmetic on a divergent integral");
        }
    }

    Rational q_{0};
    int sigma_pow_ = 0;
    int I_pow_ = 0;
    bool log_flag_ = false;
    bool divergent_ = false;
};

}  // namespace yamabe
