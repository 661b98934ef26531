// SPDX-License-Identifier: MIT
// Copyright (c) 2026 the specrec authors

#pragma once

#include <string>
#include <utility>

#include "polynomial.hpp"

namespace specrec {

// Quotient of two polynomials over a field F. Over exact fields the fraction
// is kept reduced (monic denominator); over inexact fields only the monic
// normalization is applied, since float gcd is not meaningful.
template <class F>
class rational_function {
public:
    rational_function() : m_num(), m_den(field_traits<F>::one()) {}
    rational_function(const F& c) // NOLINT: implicit scalar embedding by design
        : m_num(c), m_den(field_traits<F>::one()) {}
    rational_function(polynomial<F> num, polynomial<F> den = polynomial<F>(field_traits<F>::one()))
        : m_num(std::move(num)), m_den(std::move(den)) {
        if (m_den.is_zero()) throw internal_error("rational function with zero denominator");
        normalize();
    }

    static rational_function variable() {
        return rational_function(polynomial<F>::variable());
    }

    const polynomial<F>& num() const { return m_num; }
    const polynomial<F>& den() const { return m_den; }
    bool is_zero() const { return m_num.is_zero(); }
    bool is_polynomial() const { return m_den.degree() == 0; }

    friend rational_function operator+(const rational_function& a, const rational_function& b) {
        return rational_function(a.m_num * b.m_den + b.m_num * a.m_den, a.m_den * b.m_den);
    }
    friend rational_function operator-(const rational_function& a, const rational_function& b) {
        return rational_function(a.m_num * b.m_den - b.m_num * a.m_den, a.m_den * b.m_den);
    }
    friend rational_function operator-(const rational_function& a) {
        rational_function r = a;
        r.m_num = -r.m_num;
        return r;
    }
    friend rational_function operator*(const rational_function& a, const rational_function& b) {
        return rational_function(a.m_num * b.m_num, a.m_den * b.m_den);
    }
    friend rational_function operator/(const rational_function& a, const rational_function& b) {
        if (b.is_zero()) throw internal_error("rational function division by zero");
        return rational_function(a.m_num * b.m_den, a.m_den * b.m_num);
    }

    rational_function& operator+=(const rational_function& b) { return *this = *this + b; }
    rational_function& operator-=(const rational_function& b) { return *this = *this - b; }
    rational_function& operator*=(const rational_function& b) { return *this = *this * b; }
    rational_function& operator/=(const rational_function& b) { return *this = *this / b; }

    // Structural equality of the reduced forms would be enough over exact
    // fields; cross-multiplication also covers the inexact case.
    friend bool operator==(const rational_function& a, const rational_function& b) {
        return a.m_num * b.m_den == b.m_num * a.m_den;
    }
    friend bool operator!=(const rational_function& a, const rational_function& b) {
        return !(a == b);
    }

    F eval(const F& x) const {
        F d = m_den.eval(x);
        if (!field_traits<F>::is_invertible(d))
            throw internal_error("rational function evaluated at a pole");
        return m_num.eval(x) / d;
    }

    // True if x is a pole (denominator vanishes in reduced form).
    bool has_pole_at(const F& x) const {
        return field_traits<F>::is_zero(m_den.eval(x));
    }

    rational_function derivative() const {
        return rational_function(m_num.derivative() * m_den - m_num * m_den.derivative(),
                                 m_den * m_den);
    }

    // f(g(z)) for rational g.
    rational_function compose(const rational_function& g) const {
        rational_function num_acc, den_acc(field_traits<F>::one());
        // Horner over the numerator and denominator separately, tracking the
        // common power of g's denominator.
        auto lift = [&](const polynomial<F>& p) {
            rational_function acc;
            for (int k = p.degree(); k >= 0; --k)
                acc = acc * g + rational_function(p.coeff(k));
            return acc;
        };
        num_acc = lift(m_num);
        den_acc = lift(m_den);
        return num_acc / den_acc;
    }

    // f(1/z); cheaper and more robust than compose() for the involution that
    // exchanges the two spectral-curve sheets' coordinates.
    rational_function compose_reciprocal() const {
        int n = std::max(m_num.degree(), m_den.degree());
        auto flip = [&](const polynomial<F>& p) {
            std::vector<F> v(static_cast<std::size_t>(n) + 1, field_traits<F>::zero());
            for (int k = 0; k <= p.degree(); ++k)
                v[static_cast<std::size_t>(n - k)] = p.coeff(k);
            return polynomial<F>(std::move(v));
        };
        return rational_function(flip(m_num), flip(m_den));
    }

    std::string str(const std::string& var = "z") const {
        if (is_polynomial()) return m_num.str(var);
        return "(" + m_num.str(var) + ") / (" + m_den.str(var) + ")";
    }

private:
    void normalize() {
        if (m_num.is_zero()) {
            m_den = polynomial<F>(field_traits<F>::one());
            return;
        }
        if constexpr (field_traits<F>::is_exact) {
            polynomial<F> g = gcd(m_num, m_den);
            if (g.degree() > 0) {
                m_num = m_num.divmod(g).first;
                m_den = m_den.divmod(g).first;
            }
        }
        F lead = m_den.leading();
        if (!field_traits<F>::is_invertible(lead))
            throw internal_error("rational function denominator with non-invertible leading coefficient");
        F inv = field_traits<F>::one() / lead;
        m_num = inv * m_num;
        m_den = inv * m_den;
    }

    polynomial<F> m_num, m_den;
};

// Rational functions over F form a field, so they can serve as the scalar
// type of the whole pipeline. Running the engine over F(q) keeps an external
// point q fully symbolic; identities then come out as bit-exact rational
// function equalities instead of spot checks.
template <class F>
struct field_traits<rational_function<F>> {
    static constexpr bool is_exact = field_traits<F>::is_exact;
    static constexpr bool is_ordered = false;

    static rational_function<F> zero() { return rational_function<F>(); }
    static rational_function<F> one() {
        return rational_function<F>(field_traits<F>::one());
    }
    static rational_function<F> from_int(long n) {
        return rational_function<F>(field_traits<F>::from_int(n));
    }
    static rational_function<F> from_rational(const rational& r) {
        return rational_function<F>(field_traits<F>::from_rational(r));
    }

    static bool is_zero(const rational_function<F>& f) { return f.is_zero(); }
    static bool is_invertible(const rational_function<F>& f) { return !f.is_zero(); }
    static bool approx_equal(const rational_function<F>& a, const rational_function<F>& b) {
        if constexpr (field_traits<F>::is_exact) {
            return a == b;
        } else {
            return field_traits<polynomial<F>>::approx_equal(a.num() * b.den(),
                                                             b.num() * a.den());
        }
    }
    static bool prefer_pivot(const rational_function<F>& candidate,
                             const rational_function<F>& incumbent) {
        // Favor low-degree pivots to keep intermediate degrees small.
        auto size = [](const rational_function<F>& f) {
            return f.num().degree() + f.den().degree();
        };
        return size(candidate) < size(incumbent);
    }

    static std::string to_string(const rational_function<F>& f) { return f.str("q"); }
};

} // namespace specrec
