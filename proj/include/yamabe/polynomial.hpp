#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "yamabe/rational.hpp"

namespace yamabe {

using Exponent = std::vector<int>;

/// Sparse multivariate polynomial; zero coefficients are never stored.
template <class S>
class Polynomial {
public:
    explicit Polynomial(int nvars = 0) : nvars_(nvars) {
        if (nvars < 0) throw std::invalid_argument("Polynomial: negative variable count");
    }

    static Polynomial constant(int nvars, const S& c) {
        Polynomial p(nvars);
        p.add_term(Exponent(nvars, 0), c);
        return p;
    }
    static Polynomial variable(int nvars, int v) {
        Exponent e(nvars, 0);
        e.at(v) = 1;
        Polynomial p(nvars);
        p.add_term(e, S(1));
        return p;
    }
    static Polynomial monomial(Exponent e, const S& c) {
        Polynomial p(static_cast<int>(e.size()));
        p.add_term(std::move(e), c);
        return p;
    }

    int nvars() const { return nvars_; }
    const std::map<Exponent, S>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(const Exponent& e, const S& c) {
        if (static_cast<int>(e.size()) != nvars_) throw std::invalid_argument("Polynomial: exponent arity");
        if (c == S(0)) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == S(0)) terms_.erase(it);
        }
    }

    S coefficient(const Exponent& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? S(0) : it->second;
    }

    static int total(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

    int degree() const {
        int d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, total(e));
        return d;
    }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        const int d = total(terms_.begin()->first);
        return std::all_of(terms_.begin(), terms_.end(),
                           [d](const auto& t) { return total(t.first) == d; });
    }

    Polynomial& operator+=(const Polynomial& o) {
        check_arity(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        check_arity(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    Polynomial& operator*=(const S& s) {
        if (s == S(0)) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const S& s) { return a *= s; }
    friend Polynomial operator*(const S& s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_arity(b);
        Polynomial r(a.nvars_);
        Exponent e(a.nvars_);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                for (int v = 0; v < a.nvars_; ++v) e[v] = ea[v] + eb[v];
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    Polynomial derivative(int v) const {
        Polynomial r(nvars_);
        for (const auto& [e, c] : terms_) {
            if (e.at(v) == 0) continue;
            Exponent d = e;
            d[v] -= 1;
            r.add_term(d, c * S(e[v]));
        }
        return r;
    }

    /// Laplacian in the first `count` variables (all of them by default).
    Polynomial laplacian(int count = -1) const {
        if (count < 0) count = nvars_;
        Polynomial r(nvars_);
        for (const auto& [e, c] : terms_) {
            for (int v = 0; v < count; ++v) {
                if (e[v] < 2) continue;
                Exponent d = e;
                d[v] -= 2;
                r.add_term(d, c * S(e[v] * (e[v] - 1)));
            }
        }
        return r;
    }

    /// Terms whose total degree is exactly d.
    Polynomial homogeneous_part(int d) const {
        Polynomial r(nvars_);
        for (const auto& [e, c] : terms_) {
            if (total(e) == d) r.terms_.emplace(e, c);
        }
        return r;
    }

    /// Coefficient of x_v^p, as a polynomial in the remaining variables.
    Polynomial coefficient_of_power(int v, int p) const {
        Polynomial r(nvars_ - 1);
        for (const auto& [e, c] : terms_) {
            if (e.at(v) != p) continue;
            Exponent d;
            d.reserve(nvars_ - 1);
            for (int k = 0; k < nvars_; ++k) {
                if (k != v) d.push_back(e[k]);
            }
            r.add_term(d, c);
        }
        return r;
    }

    /// Highest power of x_v appearing.
    int max_power(int v) const {
        int p = 0;
        for (const auto& [e, c] : terms_) p = std::max(p, e.at(v));
        return p;
    }

    double evaluate(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != nvars_) throw std::invalid_argument("Polynomial::evaluate: arity");
        double sum = 0.0;
        for (const auto& [e, c] : terms_) {
            double t = ScalarTraits<S>::to_double(c);
            for (int v = 0; v < nvars_; ++v) {
                for (int k = 0; k < e[v]; ++k) t *= x[v];
            }
            sum += t;
        }
        return sum;
    }

    template <class T>
    Polynomial<T> cast() const {
        Polynomial<T> r(nvars_);
        for (const auto& [e, c] : terms_) r.add_term(e, static_cast<T>(ScalarTraits<S>::to_double(c)));
        return r;
    }

private:
    void check_arity(const Polynomial& o) const {
        if (o.nvars_ != nvars_) throw std::invalid_argument("Polynomial: mismatched variable count");
    }

    int nvars_;
    std::map<Exponent, S> terms_;
};

/// Homogeneous polynomial of fixed degree. Mixing degrees in a sum is an error.
template <class S>
class HomPoly {
public:
    HomPoly(int nvars, int degree) : degree_(degree), poly_(nvars) {
        if (degree < 0) throw std::invalid_argument("HomPoly: negative degree");
    }
    HomPoly(Polynomial<S> p, int degree) : degree_(degree), poly_(std::move(p)) {
        if (degree < 0) throw std::invalid_argument("HomPoly: negative degree");
        for (const auto& [e, c] : poly_.terms()) {
            if (Polynomial<S>::total(e) != degree_) {
                throw std::invalid_argument("HomPoly: term of degree " +
                                            std::to_string(Polynomial<S>::total(e)) +
                                            " in a degree-" + std::to_string(degree_) + " polynomial");
            }
        }
    }
    /// Degree inferred from the terms; the zero polynomial gets degree 0.
    static HomPoly from(Polynomial<S> p) {
        const int d = p.is_zero() ? 0 : Polynomial<S>::total(p.terms().begin()->first);
        return HomPoly(std::move(p), d);
    }

    int nvars() const { return poly_.nvars(); }
    int degree() const { return degree_; }
    const Polynomial<S>& poly() const { return poly_; }
    bool is_zero() const { return poly_.is_zero(); }

    void add_term(const Exponent& e, const S& c) {
        if (Polynomial<S>::total(e) != degree_) throw std::invalid_argument("HomPoly: wrong term degree");
        poly_.add_term(e, c);
    }

    HomPoly& operator+=(const HomPoly& o) {
        check_degree(o);
        poly_ += o.poly_;
        return *this;
    }
    HomPoly& operator-=(const HomPoly& o) {
        check_degree(o);
        poly_ -= o.poly_;
        return *this;
    }
    HomPoly& operator*=(const S& s) {
        poly_ *= s;
        return *this;
    }
    friend HomPoly operator+(HomPoly a, const HomPoly& b) { return a += b; }
    friend HomPoly operator-(HomPoly a, const HomPoly& b) { return a -= b; }
    friend HomPoly operator*(HomPoly a, const S& s) { return a *= s; }
    friend HomPoly operator*(const S& s, HomPoly a) { return a *= s; }
    friend HomPoly operator*(const HomPoly& a, const HomPoly& b) {
        return HomPoly(a.poly_ * b.poly_, a.degree_ + b.degree_);
    }
    friend bool operator==(const HomPoly& a, const HomPoly& b) {
        return a.degree_ == b.degree_ && a.poly_ == b.poly_;
    }

    double evaluate(std::span<const double> x) const { return poly_.evaluate(x); }

private:
    void check_degree(const HomPoly& o) const {
        if (o.degree_ != degree_ || o.nvars() != nvars()) {
            throw std::invalid_argument("HomPoly: cannot mix degree " + std::to_string(degree_) +
                                        " with degree " + std::to_string(o.degree_));
        }
    }

    int degree_;
    Polynomial<S> poly_;
};

/// Euclidean Laplacian; constants and linear forms map to the zero polynomial
/// of degree max(d - 2, 0).
template <class S>
HomPoly<S> laplacian(const HomPoly<S>& p) {
    return HomPoly<S>(p.poly().laplacian(), std::max(p.degree() - 2, 0));
}

}  // namespace yamabe
