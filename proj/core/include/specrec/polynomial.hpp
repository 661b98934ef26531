// SPDX-License-Identifier: MIT
// Copyright (c) 2026 the specrec authors

#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "scalar.hpp"

namespace specrec {

// Dense univariate polynomial over a field F, coefficients stored in
// ascending order with no trailing (exact) zeros.
template <class F>
class polynomial {
public:
    polynomial() = default;
    polynomial(const F& c) { // NOLINT: implicit scalar embedding by design
        m_c.push_back(c);
        trim();
    }
    explicit polynomial(std::vector<F> coeffs) : m_c(std::move(coeffs)) { trim(); }

    static polynomial monomial(const F& c, unsigned k) {
        std::vector<F> v(k + 1, field_traits<F>::zero());
        v[k] = c;
        return polynomial(std::move(v));
    }
    static polynomial variable() { return monomial(field_traits<F>::one(), 1); }

    // Degree of the zero polynomial is -1.
    int degree() const { return static_cast<int>(m_c.size()) - 1; }
    bool is_zero() const { return m_c.empty(); }

    F coeff(int k) const {
        if (k < 0 || k >= static_cast<int>(m_c.size())) return field_traits<F>::zero();
        return m_c[static_cast<std::size_t>(k)];
    }
    const std::vector<F>& coeffs() const { return m_c; }
    const F& leading() const { return m_c.back(); }

    friend polynomial operator+(const polynomial& a, const polynomial& b) {
        std::vector<F> v(std::max(a.m_c.size(), b.m_c.size()), field_traits<F>::zero());
        for (std::size_t i = 0; i < a.m_c.size(); ++i) v[i] = a.m_c[i];
        for (std::size_t i = 0; i < b.m_c.size(); ++i) v[i] = v[i] + b.m_c[i];
        return polynomial(std::move(v));
    }
    friend polynomial operator-(const polynomial& a, const polynomial& b) {
        return a + (-b);
    }
    friend polynomial operator-(const polynomial& a) {
        std::vector<F> v(a.m_c);
        for (auto& c : v) c = -c;
        return polynomial(std::move(v));
    }
    friend polynomial operator*(const polynomial& a, const polynomial& b) {
        if (a.is_zero() || b.is_zero()) return polynomial();
        std::vector<F> v(a.m_c.size() + b.m_c.size() - 1, field_traits<F>::zero());
        for (std::size_t i = 0; i < a.m_c.size(); ++i)
            for (std::size_t j = 0; j < b.m_c.size(); ++j)
                v[i + j] = v[i + j] + a.m_c[i] * b.m_c[j];
        return polynomial(std::move(v));
    }
    friend polynomial operator*(const F& s, const polynomial& a) {
        std::vector<F> v(a.m_c);
        for (auto& c : v) c = s * c;
        return polynomial(std::move(v));
    }
    friend polynomial operator*(const polynomial& a, const F& s) { return s * a; }

    polynomial& operator+=(const polynomial& b) { return *this = *this + b; }
    polynomial& operator-=(const polynomial& b) { return *this = *this - b; }
    polynomial& operator*=(const polynomial& b) { return *this = *this * b; }

    friend bool operator==(const polynomial& a, const polynomial& b) {
        if (a.m_c.size() != b.m_c.size()) return false;
        for (std::size_t i = 0; i < a.m_c.size(); ++i)
            if (!(a.m_c[i] == b.m_c[i])) return false;
        return true;
    }
    friend bool operator!=(const polynomial& a, const polynomial& b) { return !(a == b); }

    F eval(const F& x) const {
        F r = field_traits<F>::zero();
        for (auto it = m_c.rbegin(); it != m_c.rend(); ++it) r = r * x + *it;
        return r;
    }

    polynomial derivative() const {
        if (m_c.size() <= 1) return polynomial();
        std::vector<F> v(m_c.size() - 1, field_traits<F>::zero());
        for (std::size_t i = 1; i < m_c.size(); ++i)
            v[i - 1] = field_traits<F>::from_int(static_cast<long>(i)) * m_c[i];
        return polynomial(std::move(v));
    }

    // Antiderivative with zero constant term.
    polynomial antiderivative() const {
        if (is_zero()) return polynomial();
        std::vector<F> v(m_c.size() + 1, field_traits<F>::zero());
        for (std::size_t i = 0; i < m_c.size(); ++i)
            v[i + 1] = m_c[i] / field_traits<F>::from_int(static_cast<long>(i + 1));
        return polynomial(std::move(v));
    }

    polynomial compose(const polynomial& g) const {
        polynomial r;
        for (auto it = m_c.rbegin(); it != m_c.rend(); ++it) r = r * g + polynomial(*it);
        return r;
    }

    // Quotient and remainder; the divisor's leading coefficient must be
    // invertible.
    std::pair<polynomial, polynomial> divmod(const polynomial& d) const {
        if (d.is_zero()) throw internal_error("polynomial division by zero");
        if (!field_traits<F>::is_invertible(d.leading()))
            throw internal_error("polynomial division by non-invertible leading coefficient");
        polynomial q, r = *this;
        F inv_lead = field_traits<F>::one() / d.leading();
        while (!r.is_zero() && r.degree() >= d.degree()) {
            int k = r.degree() - d.degree();
            F c = r.leading() * inv_lead;
            polynomial t = monomial(c, static_cast<unsigned>(k));
            q += t;
            r -= t * d;
        }
        return {q, r};
    }

    polynomial monic() const {
        if (is_zero()) return *this;
        return (field_traits<F>::one() / leading()) * *this;
    }

    std::string str(const std::string& var = "z") const {
        if (is_zero()) return "0";
        std::string out;
        for (int k = degree(); k >= 0; --k) {
            const F& c = m_c[static_cast<std::size_t>(k)];
            if (field_traits<F>::is_zero(c)) continue;
            if (!out.empty()) out += " + ";
            out += "(" + field_traits<F>::to_string(c) + ")";
            if (k >= 1) out += "*" + var;
            if (k >= 2) out += "^" + std::to_string(k);
        }
        return out;
    }

private:
    void trim() {
        while (!m_c.empty() && field_traits<F>::is_zero(m_c.back())) m_c.pop_back();
    }

    std::vector<F> m_c;
};

// Monic greatest common divisor by the Euclidean algorithm. Meaningful over
// exact fields. Over rings with non-invertible elements (dual numbers) the
// algorithm can stall on a remainder whose leading coefficient cannot divide;
// it then reports no common factor, which is always safe for the callers that
// use gcd to reduce fractions.
template <class F>
polynomial<F> gcd(polynomial<F> a, polynomial<F> b) {
    while (!b.is_zero()) {
        if (!field_traits<F>::is_invertible(b.leading()))
            return polynomial<F>(field_traits<F>::one());
        auto [q, r] = a.divmod(b);
        (void)q;
        a = std::move(b);
        b = std::move(r);
    }
    if (!field_traits<F>::is_invertible(a.leading()))
        return polynomial<F>(field_traits<F>::one());
    return a.monic();
}

// Polynomials over F form a ring; exposing them through field_traits lets the
// Laurent-series template carry polynomial coefficients (used to track the
// dependence on an external marked point during residue extraction). The
// division-related entries are honest about invertibility: only nonzero
// constants are invertible.
template <class F>
struct field_traits<polynomial<F>> {
    static constexpr bool is_exact = field_traits<F>::is_exact;
    static constexpr bool is_ordered = false;

    static polynomial<F> zero() { return polynomial<F>(); }
    static polynomial<F> one() { return polynomial<F>(field_traits<F>::one()); }
    static polynomial<F> from_int(long n) { return polynomial<F>(field_traits<F>::from_int(n)); }
    static polynomial<F> from_rational(const rational& r) {
        return polynomial<F>(field_traits<F>::from_rational(r));
    }

    static bool is_zero(const polynomial<F>& p) { return p.is_zero(); }
    static bool is_invertible(const polynomial<F>& p) {
        return p.degree() == 0 && field_traits<F>::is_invertible(p.coeff(0));
    }
    static bool approx_equal(const polynomial<F>& a, const polynomial<F>& b) {
        int d = std::max(a.degree(), b.degree());
        for (int k = 0; k <= d; ++k)
            if (!field_traits<F>::approx_equal(a.coeff(k), b.coeff(k))) return false;
        return true;
    }
    static bool prefer_pivot(const polynomial<F>&, const polynomial<F>&) { return false; }

    static std::string to_string(const polynomial<F>& p) { return p.str(); }
};

} // namespace specrec
