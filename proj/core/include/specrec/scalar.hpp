// SPDX-License-Identifier: MIT
// Copyright (c) 2026 the specrec authors

#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdint>
#include <string>

#include "errors.hpp"

namespace specrec {

// Exact scalars: arbitrary-precision rationals on top of GMP. Expression
// templates are switched off so the types behave like ordinary values inside
// our own templates.
using bigint = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;
using rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

// Float scalars: MPFR with runtime-selectable precision.
using bigfloat = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                               boost::multiprecision::et_off>;

namespace detail {
inline unsigned& float_bits_storage() {
    static unsigned bits = 256;
    return bits;
}
} // namespace detail

// Sets the working precision of the float backend, in bits. MPFR precision is
// managed through boost in decimal digits, so we convert with a couple of
// guard digits; the stored bit count is what tolerance checks use. Returns
// the previous setting.
inline unsigned set_float_precision_bits(unsigned bits) {
    unsigned previous = detail::float_bits_storage();
    detail::float_bits_storage() = bits;
    const unsigned digits10 = static_cast<unsigned>(bits * 0.30103) + 3;
    bigfloat::default_precision(digits10);
    return previous;
}

inline unsigned float_precision_bits() { return detail::float_bits_storage(); }

// Guarantees the default precision has been set at least once (mpfr default
// otherwise depends on the library build).
inline void ensure_float_precision_initialized() {
    static bool done = [] {
        set_float_precision_bits(detail::float_bits_storage());
        return true;
    }();
    (void)done;
}

// Traits describing the scalar field an algorithm runs over. Everything in
// the library is templated on the field type F and talks to scalars through
// this interface, so the same code runs over rationals, big floats, dual
// numbers and rational-function fields.
template <class F>
struct field_traits;

template <>
struct field_traits<rational> {
    static constexpr bool is_exact = true;
    static constexpr bool is_ordered = true;

    static rational zero() { return rational(0); }
    static rational one() { return rational(1); }
    static rational from_int(long n) { return rational(n); }
    static rational from_rational(const rational& r) { return r; }

    static bool is_zero(const rational& x) { return x.is_zero(); }
    static bool is_invertible(const rational& x) { return !x.is_zero(); }
    // Exact scalars compare exactly.
    static bool approx_equal(const rational& a, const rational& b) { return a == b; }
    // Pivot preference during elimination; exact fields take the first
    // invertible entry, so nothing is ever "better".
    static bool prefer_pivot(const rational&, const rational&) { return false; }

    static std::string to_string(const rational& x) { return x.str(); }
};

template <>
struct field_traits<bigfloat> {
    static constexpr bool is_exact = false;
    static constexpr bool is_ordered = true;

    static bigfloat zero() { return bigfloat(0); }
    static bigfloat one() { return bigfloat(1); }
    static bigfloat from_int(long n) { return bigfloat(n); }
    static bigfloat from_rational(const rational& r) {
        ensure_float_precision_initialized();
        return bigfloat(r);
    }

    static bool is_zero(const bigfloat& x) { return x.is_zero(); }
    static bool is_invertible(const bigfloat& x) { return !x.is_zero(); }

    // Relative comparison at half the working precision, the documented
    // contract of the float backend: a == b iff |a-b| <= 2^(-p/2) max(1,|a|,|b|).
    static bigfloat tolerance() {
        ensure_float_precision_initialized();
        return boost::multiprecision::ldexp(bigfloat(1),
                                            -static_cast<long>(float_precision_bits() / 2));
    }
    static bool approx_equal(const bigfloat& a, const bigfloat& b) {
        bigfloat scale = 1;
        bigfloat aa = boost::multiprecision::abs(a);
        bigfloat ab = boost::multiprecision::abs(b);
        if (aa > scale) scale = aa;
        if (ab > scale) scale = ab;
        return boost::multiprecision::abs(a - b) <= tolerance() * scale;
    }
    static bool prefer_pivot(const bigfloat& candidate, const bigfloat& incumbent) {
        return boost::multiprecision::abs(candidate) > boost::multiprecision::abs(incumbent);
    }

    static std::string to_string(const bigfloat& x) {
        return x.str(0, std::ios_base::scientific);
    }
};

// Dual numbers a + b*eps with eps^2 = 0, over a base field F. Used for exact
// first derivatives with respect to potential couplings: run the whole
// pipeline over dual<rational> and read off the eps part. This is a local
// ring, not a field; division requires an invertible (nonzero base part)
// divisor, which the pipeline guarantees whenever the base computation
// itself succeeds.
template <class F>
class dual {
public:
    dual() : m_a(field_traits<F>::zero()), m_b(field_traits<F>::zero()) {}
    dual(const F& a) : m_a(a), m_b(field_traits<F>::zero()) {} // NOLINT: implicit by design
    dual(F a, F b) : m_a(std::move(a)), m_b(std::move(b)) {}

    const F& base() const { return m_a; }
    const F& eps() const { return m_b; }

    friend dual operator+(const dual& x, const dual& y) {
        return dual(x.m_a + y.m_a, x.m_b + y.m_b);
    }
    friend dual operator-(const dual& x, const dual& y) {
        return dual(x.m_a - y.m_a, x.m_b - y.m_b);
    }
    friend dual operator-(const dual& x) { return dual(-x.m_a, -x.m_b); }
    friend dual operator*(const dual& x, const dual& y) {
        return dual(x.m_a * y.m_a, x.m_a * y.m_b + x.m_b * y.m_a);
    }
    friend dual operator/(const dual& x, const dual& y) {
        if (!field_traits<F>::is_invertible(y.m_a))
            throw internal_error("dual number division by a pure-eps element");
        F inv_a = field_traits<F>::one() / y.m_a;
        F a = x.m_a * inv_a;
        return dual(a, (x.m_b - a * y.m_b) * inv_a);
    }

    dual& operator+=(const dual& y) { return *this = *this + y; }
    dual& operator-=(const dual& y) { return *this = *this - y; }
    dual& operator*=(const dual& y) { return *this = *this * y; }
    dual& operator/=(const dual& y) { return *this = *this / y; }

    friend bool operator==(const dual& x, const dual& y) {
        return x.m_a == y.m_a && x.m_b == y.m_b;
    }
    friend bool operator!=(const dual& x, const dual& y) { return !(x == y); }

private:
    F m_a, m_b;
};

using dual_rational = dual<rational>;

template <class F>
struct field_traits<dual<F>> {
    static constexpr bool is_exact = field_traits<F>::is_exact;
    static constexpr bool is_ordered = false;

    static dual<F> zero() { return dual<F>(); }
    static dual<F> one() { return dual<F>(field_traits<F>::one()); }
    static dual<F> from_int(long n) { return dual<F>(field_traits<F>::from_int(n)); }
    static dual<F> from_rational(const rational& r) {
        return dual<F>(field_traits<F>::from_rational(r));
    }

    static bool is_zero(const dual<F>& x) {
        return field_traits<F>::is_zero(x.base()) && field_traits<F>::is_zero(x.eps());
    }
    static bool is_invertible(const dual<F>& x) {
        return field_traits<F>::is_invertible(x.base());
    }
    static bool approx_equal(const dual<F>& a, const dual<F>& b) {
        return field_traits<F>::approx_equal(a.base(), b.base()) &&
               field_traits<F>::approx_equal(a.eps(), b.eps());
    }
    static bool prefer_pivot(const dual<F>& candidate, const dual<F>& incumbent) {
        return field_traits<F>::prefer_pivot(candidate.base(), incumbent.base());
    }

    static std::string to_string(const dual<F>& x) {
        return field_traits<F>::to_string(x.base()) + " + (" +
               field_traits<F>::to_string(x.eps()) + ")*eps";
    }
};

// Parses an exact scalar: an optionally signed integer or "p/q" fraction.
inline rational parse_rational(const std::string& text) {
    auto bad = [&]() -> rational {
        throw invalid_job_error("cannot parse exact scalar '" + text + "'");
    };
    if (text.empty()) return bad();
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return rational(bigint(text));
        bigint num(text.substr(0, slash));
        bigint den(text.substr(slash + 1));
        if (den.is_zero()) return bad();
        return rational(num) / rational(den);
    } catch (const std::exception&) {
        return bad();
    }
}

// Parses a float scalar at the current working precision. Accepts anything
// parse_rational accepts, plus decimal/scientific notation.
inline bigfloat parse_bigfloat(const std::string& text) {
    ensure_float_precision_initialized();
    if (text.find('/') != std::string::npos)
        return bigfloat(parse_rational(text));
    try {
        return bigfloat(text);
    } catch (const std::exception&) {
        throw invalid_job_error("cannot parse float scalar '" + text + "'");
    }
}

template <class F>
F parse_scalar(const std::string& text);

template <>
inline rational parse_scalar<rational>(const std::string& text) {
    return parse_rational(text);
}
template <>
inline bigfloat parse_scalar<bigfloat>(const std::string& text) {
    return parse_bigfloat(text);
}

} // namespace specrec
