// SPDX-License-Identifier: MIT
// Copyright (c) 2026 the specrec authors

#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "rational_function.hpp"

namespace specrec {

// Truncated Laurent series over a coefficient ring C (usually a field; the
// residue extractor also instantiates polynomial coefficients).
//
// The series represents sum_{n = base}^{lim-1} c_n s^n + O(s^lim). The
// reliable order lim is tracked through every operation: addition takes the
// minimum, multiplication min(val1 + lim2, val2 + lim1), inversion lim - 2v,
// and so on. Asking for a coefficient at or beyond lim throws instead of
// silently returning zero, which turns truncation bugs into loud failures.
template <class C>
class laurent_series {
public:
    laurent_series() : m_base(0), m_lim(0) {}

    laurent_series(int base, int lim, std::vector<C> coeffs)
        : m_base(base), m_lim(lim), m_c(std::move(coeffs)) {
        if (m_lim < m_base || m_c.size() != static_cast<std::size_t>(m_lim - m_base))
            throw internal_error("laurent series constructed with inconsistent window");
        strip();
    }

    static laurent_series zero_to(int lim) { return laurent_series(lim, lim, {}); }

    static laurent_series monomial(const C& c, int n, int lim) {
        if (n >= lim) return zero_to(lim);
        std::vector<C> v(static_cast<std::size_t>(lim - n), field_traits<C>::zero());
        v[0] = c;
        return laurent_series(n, lim, std::move(v));
    }

    template <class F>
    static laurent_series from_polynomial(const polynomial<F>& p, int lim) {
        std::vector<C> v(static_cast<std::size_t>(std::max(lim, 0)), field_traits<C>::zero());
        for (int k = 0; k <= p.degree() && k < lim; ++k)
            v[static_cast<std::size_t>(k)] = p.coeff(k);
        return laurent_series(0, std::max(lim, 0), std::move(v));
    }

    int base() const { return m_base; }
    int lim() const { return m_lim; }

    // Index of the first coefficient that is not an exact zero; equals lim()
    // when the series is zero to its known order.
    int valuation() const {
        for (std::size_t i = 0; i < m_c.size(); ++i)
            if (!field_traits<C>::is_zero(m_c[i])) return m_base + static_cast<int>(i);
        return m_lim;
    }
    bool known_zero() const { return valuation() == m_lim; }

    C coeff(int n) const {
        if (n >= m_lim)
            throw internal_error("laurent series coefficient requested beyond reliable order (n=" +
                                 std::to_string(n) + ", lim=" + std::to_string(m_lim) + ")");
        if (n < m_base) return field_traits<C>::zero();
        return m_c[static_cast<std::size_t>(n - m_base)];
    }

    C residue() const { return coeff(-1); }

    friend laurent_series operator+(const laurent_series& a, const laurent_series& b) {
        int lim = std::min(a.m_lim, b.m_lim);
        int base = std::min({a.m_base, b.m_base, lim});
        std::vector<C> v(static_cast<std::size_t>(lim - base), field_traits<C>::zero());
        for (int n = base; n < lim; ++n) {
            C x = (n >= a.m_base && n < a.m_lim) ? a.m_c[static_cast<std::size_t>(n - a.m_base)]
                                                 : field_traits<C>::zero();
            C y = (n >= b.m_base && n < b.m_lim) ? b.m_c[static_cast<std::size_t>(n - b.m_base)]
                                                 : field_traits<C>::zero();
            v[static_cast<std::size_t>(n - base)] = x + y;
        }
        return laurent_series(base, lim, std::move(v));
    }
    friend laurent_series operator-(const laurent_series& a, const laurent_series& b) {
        return a + (-b);
    }
    friend laurent_series operator-(const laurent_series& a) {
        laurent_series r = a;
        for (auto& c : r.m_c) c = -c;
        return r;
    }

    friend laurent_series operator*(const laurent_series& a, const laurent_series& b) {
        int va = a.valuation(), vb = b.valuation();
        int lim = std::min(va + b.m_lim, vb + a.m_lim);
        if (va == a.m_lim || vb == b.m_lim) return zero_to(lim);
        int base = va + vb;
        std::vector<C> v(static_cast<std::size_t>(lim - base), field_traits<C>::zero());
        for (int i = va; i < a.m_lim; ++i) {
            const C& ai = a.m_c[static_cast<std::size_t>(i - a.m_base)];
            if (field_traits<C>::is_zero(ai)) continue;
            int jmax = std::min(b.m_lim, lim - i);
            for (int j = vb; j < jmax; ++j) {
                const C& bj = b.m_c[static_cast<std::size_t>(j - b.m_base)];
                auto& slot = v[static_cast<std::size_t>(i + j - base)];
                slot = slot + ai * bj;
            }
        }
        return laurent_series(base, lim, std::move(v));
    }

    friend laurent_series operator*(const C& s, const laurent_series& a) {
        laurent_series r = a;
        for (auto& c : r.m_c) c = s * c;
        return r;
    }
    friend laurent_series operator*(const laurent_series& a, const C& s) { return s * a; }

    laurent_series& operator+=(const laurent_series& b) { return *this = *this + b; }
    laurent_series& operator-=(const laurent_series& b) { return *this = *this - b; }
    laurent_series& operator*=(const laurent_series& b) { return *this = *this * b; }

    // Multiplicative inverse about the true valuation; requires an
    // invertible leading coefficient.
    laurent_series inverse() const {
        int v = valuation();
        if (v == m_lim)
            throw internal_error("inverting a laurent series that is zero to its known order");
        const C& lead = m_c[static_cast<std::size_t>(v - m_base)];
        if (!field_traits<C>::is_invertible(lead))
            throw internal_error("inverting a laurent series with non-invertible leading coefficient");
        int rel = m_lim - v; // number of reliable coefficients of the unit part
        std::vector<C> u(static_cast<std::size_t>(rel));
        for (int i = 0; i < rel; ++i) u[static_cast<std::size_t>(i)] = coeff(v + i);
        std::vector<C> w(static_cast<std::size_t>(rel), field_traits<C>::zero());
        C inv0 = field_traits<C>::one() / u[0];
        w[0] = inv0;
        for (int n = 1; n < rel; ++n) {
            C acc = field_traits<C>::zero();
            for (int j = 1; j <= n; ++j)
                acc = acc + u[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(n - j)];
            w[static_cast<std::size_t>(n)] = -acc * inv0;
        }
        return laurent_series(-v, -v + rel, std::move(w));
    }

    friend laurent_series operator/(const laurent_series& a, const laurent_series& b) {
        return a * b.inverse();
    }

    laurent_series derivative() const {
        std::vector<C> v(m_c.size(), field_traits<C>::zero());
        for (std::size_t i = 0; i < m_c.size(); ++i) {
            int n = m_base + static_cast<int>(i);
            v[i] = field_traits<C>::from_int(n) * m_c[i];
        }
        return laurent_series(m_base - 1, m_lim - 1, std::move(v));
    }

    // Termwise antiderivative; the s^(-1) coefficient must be absent or an
    // exact zero.
    laurent_series antiderivative() const {
        std::vector<C> v(m_c.size(), field_traits<C>::zero());
        for (std::size_t i = 0; i < m_c.size(); ++i) {
            int n = m_base + static_cast<int>(i);
            if (n == -1) {
                if (!field_traits<C>::is_zero(m_c[i]))
                    throw internal_error("antiderivative of a series with nonzero residue");
                continue;
            }
            v[i] = m_c[i] / field_traits<C>::from_int(n + 1);
        }
        return laurent_series(m_base + 1, m_lim + 1, std::move(v));
    }

    // f(g(s)) for g with valuation >= 1.
    laurent_series compose(const laurent_series& g) const {
        int vg = g.valuation();
        if (vg < 1)
            throw internal_error("laurent series composition needs valuation >= 1 inner series");
        // Tail of f beyond its reliable order contributes O(s^(lim_f * vg)).
        int cap = m_lim * vg;
        laurent_series acc = zero_to(cap);
        if (known_zero()) return acc;
        laurent_series gpow = monomial(field_traits<C>::one(), 0, cap + std::max(1, -m_base) * vg + 1);
        int v = valuation();
        if (v < 0) {
            laurent_series ginv = g.inverse();
            for (int n = -1; n >= v; --n) {
                gpow = gpow * ginv;
                const C c = coeff(n);
                if (!field_traits<C>::is_zero(c)) acc += c * gpow;
            }
            gpow = monomial(field_traits<C>::one(), 0, cap + 1);
        }
        const int start = std::max(v, 0);
        for (int j = 0; j < start; ++j) gpow = gpow * g;
        for (int n = start; n < m_lim; ++n) {
            if (n > start) gpow = gpow * g;
            const C c = coeff(n);
            if (!field_traits<C>::is_zero(c)) acc += c * gpow;
        }
        return acc.truncate(std::min(acc.lim(), cap));
    }

    // Compositional inverse of a series with valuation exactly 1 and
    // invertible linear coefficient; solved coefficient by coefficient.
    laurent_series reverse() const {
        if (valuation() != 1)
            throw internal_error("series reversion requires valuation exactly 1");
        const C c1 = coeff(1);
        if (!field_traits<C>::is_invertible(c1))
            throw internal_error("series reversion requires invertible linear coefficient");
        int L = m_lim;
        C inv1 = field_traits<C>::one() / c1;
        // Partial inverse, declared reliable to order L so intermediate
        // compositions can be read where the bookkeeping needs them; correct
        // by construction of the triangular solve.
        std::vector<C> t(static_cast<std::size_t>(L), field_traits<C>::zero());
        if (L > 1) t[1] = inv1;
        for (int m = 2; m < L; ++m) {
            laurent_series partial(0, L, std::vector<C>(t.begin(), t.end()));
            laurent_series comp = compose_exact_inner(partial);
            // comp = g(t) agrees with s up to s^(m-1); the s^m mismatch fixes t_m.
            C mismatch = comp.coeff(m);
            t[static_cast<std::size_t>(m)] = -mismatch * inv1;
        }
        return laurent_series(0, L, std::move(t));
    }

    // Square root of a series with valuation 0 and leading coefficient
    // exactly 1 (callers normalize first).
    laurent_series sqrt_unit() const {
        if (valuation() != 0 || !field_traits<C>::is_zero(coeff(0) - field_traits<C>::one()))
            throw internal_error("sqrt_unit requires a series starting at 1");
        int L = m_lim;
        std::vector<C> y(static_cast<std::size_t>(L), field_traits<C>::zero());
        y[0] = field_traits<C>::one();
        C half = field_traits<C>::one() / field_traits<C>::from_int(2);
        for (int n = 1; n < L; ++n) {
            C acc = coeff(n);
            for (int j = 1; j < n; ++j)
                acc = acc - y[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(n - j)];
            y[static_cast<std::size_t>(n)] = half * acc;
        }
        return laurent_series(0, L, std::move(y));
    }

    laurent_series truncate(int new_lim) const {
        if (new_lim > m_lim)
            throw internal_error("cannot extend a laurent series by truncation");
        if (new_lim <= m_base) return zero_to(new_lim);
        return laurent_series(m_base, new_lim,
                              std::vector<C>(m_c.begin(), m_c.begin() + (new_lim - m_base)));
    }

    // Multiplication by s^k.
    laurent_series shift(int k) const {
        return laurent_series(m_base + k, m_lim + k, m_c);
    }

    template <class D, class Fn>
    laurent_series<D> map(Fn&& fn) const {
        std::vector<D> v;
        v.reserve(m_c.size());
        for (const auto& c : m_c) v.push_back(fn(c));
        return laurent_series<D>(m_base, m_lim, std::move(v));
    }

    std::string str(const std::string& var = "s") const {
        std::string out;
        for (int n = m_base; n < m_lim; ++n) {
            const C& c = m_c[static_cast<std::size_t>(n - m_base)];
            if (field_traits<C>::is_zero(c)) continue;
            if (!out.empty()) out += " + ";
            out += "(" + field_traits<C>::to_string(c) + ")*" + var + "^" + std::to_string(n);
        }
        if (out.empty()) out = "0";
        return out + " + O(" + var + "^" + std::to_string(m_lim) + ")";
    }

private:
    // Like compose but without the tail cap; used by reverse(), whose
    // bookkeeping handles reliability itself.
    laurent_series compose_exact_inner(const laurent_series& g) const {
        laurent_series acc = zero_to(g.lim());
        laurent_series gpow = monomial(field_traits<C>::one(), 0, g.lim());
        for (int n = 0; n < m_lim; ++n) {
            if (n > 0) gpow = gpow * g;
            if (n >= m_base) {
                const C c = coeff(n);
                if (!field_traits<C>::is_zero(c)) acc += c * gpow;
            }
            if (gpow.known_zero() && n > 0) break;
        }
        return acc;
    }

    void strip() {
        std::size_t lead = 0;
        while (lead < m_c.size() && field_traits<C>::is_zero(m_c[lead])) ++lead;
        if (lead > 0) {
            m_c.erase(m_c.begin(), m_c.begin() + static_cast<std::ptrdiff_t>(lead));
            m_base += static_cast<int>(lead);
        }
    }

    int m_base, m_lim;
    std::vector<C> m_c;
};

// p(a + s) as a power series, reliable to any order (the expansion is exact;
// lim is just the storage window).
template <class F>
laurent_series<F> shifted_polynomial_series(const polynomial<F>& p, const F& a, int lim) {
    laurent_series<F> acc = laurent_series<F>::zero_to(lim);
    laurent_series<F> shift(0, lim, [&] {
        std::vector<F> v(static_cast<std::size_t>(lim), field_traits<F>::zero());
        if (lim > 0) v[0] = a;
        if (lim > 1) v[1] = field_traits<F>::one();
        return v;
    }());
    for (int k = p.degree(); k >= 0; --k) {
        acc = acc * shift;
        acc += laurent_series<F>::monomial(p.coeff(k), 0, lim);
    }
    return acc;
}

// Local expansion of a rational function at z = a (z = a + s).
template <class F>
laurent_series<F> expand_at(const rational_function<F>& f, const F& a, int lim) {
    if (f.is_zero()) return laurent_series<F>::zero_to(lim);
    // Guard window: dividing by a denominator with a zero of order m costs
    // 2m reliable coefficients; poles of interest here are low order.
    int guard = 2 * std::max(1, f.den().degree()) + 2;
    auto num = shifted_polynomial_series(f.num(), a, lim + guard);
    auto den = shifted_polynomial_series(f.den(), a, lim + guard);
    return (num * den.inverse()).truncate(lim);
}

// p(1/w) as an exact Laurent series in w.
template <class F>
laurent_series<F> polynomial_series_at_infinity(const polynomial<F>& p, int lim) {
    int d = p.degree();
    if (d < 0) return laurent_series<F>::zero_to(lim);
    std::vector<F> v;
    for (int k = d; k >= 0; --k) v.push_back(p.coeff(k));
    laurent_series<F> s(-d, 1, std::move(v));
    if (lim <= 1) return s.truncate(lim);
    // Pad with exact zeros: the expansion of a polynomial terminates.
    std::vector<F> w;
    for (int k = d; k >= 0; --k) w.push_back(p.coeff(k));
    for (int n = 1; n < lim; ++n) w.push_back(field_traits<F>::zero());
    return laurent_series<F>(-d, lim, std::move(w));
}

// Expansion of a rational function around z = infinity in the local
// coordinate w = 1/z.
template <class F>
laurent_series<F> expand_at_infinity(const rational_function<F>& f, int lim) {
    if (f.is_zero()) return laurent_series<F>::zero_to(lim);
    int guard = 2;
    int extra = f.num().degree() + f.den().degree() + guard;
    auto num = polynomial_series_at_infinity(f.num(), lim + extra);
    auto den = polynomial_series_at_infinity(f.den(), lim + extra);
    return (num * den.inverse()).truncate(lim);
}

} // namespace specrec
