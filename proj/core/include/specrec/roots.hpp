// SPDX-License-Identifier: MIT
// Copyright (c) 2026 the specrec authors

#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "polynomial.hpp"
#include "scalar.hpp"

namespace specrec {

// Root finding for the two scalar backends. The exact path locates rational
// roots with certified multiplicities: a float solve proposes candidates,
// continued fractions turn them into rationals, and an exact evaluation
// accepts or rejects each one. Roots that survive are genuine; whatever is
// left over is reported as unresolved (irrational or complex) rather than
// guessed at. The float path returns real roots with multiplicities read off
// from root clusters.

namespace detail {

// Minimal complex arithmetic over bigfloat for the simultaneous (Aberth)
// iteration. std::complex is not specified for user-defined scalar types, so
// we carry our own.
struct cfloat {
    bigfloat re, im;

    cfloat() : re(0), im(0) {}
    explicit cfloat(bigfloat r) : re(std::move(r)), im(0) {}
    cfloat(bigfloat r, bigfloat i) : re(std::move(r)), im(std::move(i)) {}

    friend cfloat operator+(const cfloat& a, const cfloat& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend cfloat operator-(const cfloat& a, const cfloat& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend cfloat operator*(const cfloat& a, const cfloat& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend cfloat operator/(const cfloat& a, const cfloat& b) {
        bigfloat n = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
};

inline bigfloat cabs(const cfloat& z) {
    return boost::multiprecision::sqrt(z.re * z.re + z.im * z.im);
}

// Temporarily raises the mpfr working precision; restores it on scope exit.
// Numbers created inside the scope carry the elevated precision.
class precision_guard {
public:
    explicit precision_guard(unsigned bits)
        : m_saved(bigfloat::default_precision()) {
        bigfloat::default_precision(static_cast<unsigned>(bits * 0.30103) + 3);
    }
    ~precision_guard() { bigfloat::default_precision(m_saved); }
    precision_guard(const precision_guard&) = delete;
    precision_guard& operator=(const precision_guard&) = delete;

private:
    unsigned m_saved;
};

inline cfloat ceval(const std::vector<cfloat>& coeffs, const cfloat& z) {
    cfloat acc;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

// All complex roots of the polynomial with the given bigfloat coefficients
// (ascending, leading nonzero), by the Aberth-Ehrlich simultaneous iteration
// at the current working precision. `bits` is that precision, used for the
// stopping rule. Throws cluster_error if the iteration stalls.
inline std::vector<cfloat> aberth_roots(const std::vector<bigfloat>& coeffs, unsigned bits) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    std::vector<cfloat> a(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        a[i] = cfloat(coeffs[i] / coeffs.back());
    std::vector<cfloat> da(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i)
        da[static_cast<std::size_t>(i - 1)] =
            cfloat(bigfloat(i)) * a[static_cast<std::size_t>(i)];

    // Cauchy bound for the root radius, starting points on a slightly rotated
    // circle so real-axis symmetry cannot trap the iteration.
    bigfloat radius = 0;
    for (int i = 0; i < n; ++i) {
        bigfloat m = boost::multiprecision::abs(cabs(a[static_cast<std::size_t>(i)]));
        if (m > radius) radius = m;
    }
    radius += 1;
    const bigfloat pi = boost::multiprecision::atan(bigfloat(1)) * 4;
    std::vector<cfloat> z(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        bigfloat theta = pi * (2 * bigfloat(i) + bigfloat(1) / 2) / n + bigfloat(7) / 16;
        z[static_cast<std::size_t>(i)] = cfloat(radius * boost::multiprecision::cos(theta),
                                                radius * boost::multiprecision::sin(theta));
    }

    const bigfloat step_eps =
        boost::multiprecision::ldexp(bigfloat(1), -static_cast<long>(bits) + 24);
    const int max_iterations = 600;
    for (int iter = 0; iter < max_iterations; ++iter) {
        bigfloat worst = 0;
        for (int i = 0; i < n; ++i) {
            auto& zi = z[static_cast<std::size_t>(i)];
            cfloat p = ceval(a, zi);
            cfloat dp = ceval(da, zi);
            if (cabs(dp).is_zero()) {
                // Sitting on a critical point; nudge and continue.
                zi = zi + cfloat(step_eps * radius, step_eps * radius);
                worst = radius;
                continue;
            }
            cfloat newton = p / dp;
            cfloat repulsion;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                cfloat diff = zi - z[static_cast<std::size_t>(j)];
                if (cabs(diff).is_zero()) {
                    diff = cfloat(step_eps * radius, bigfloat(0));
                }
                repulsion = repulsion + cfloat(bigfloat(1)) / diff;
            }
            cfloat denom = cfloat(bigfloat(1)) - newton * repulsion;
            cfloat correction =
                cabs(denom).is_zero() ? newton : newton / denom;
            zi = zi - correction;
            bigfloat rel = cabs(correction) / (cabs(zi) + 1);
            if (rel > worst) worst = rel;
        }
        if (worst <= step_eps) return z;
    }
    throw cluster_error("root iteration did not separate the roots at " +
                        std::to_string(bits) + " bits");
}

// Continued-fraction reconstruction: best rational approximation of x with
// denominator at most den_bound. The caller verifies the result exactly, so
// this only has to be a good guess.
inline rational reconstruct_rational(const bigfloat& x, const bigint& den_bound) {
    bigint h0 = 1, h1 = 0; // numerators of consecutive convergents (reversed seed)
    bigint k0 = 0, k1 = 1; // denominators
    bigfloat rest = x;
    const bigfloat tiny = boost::multiprecision::ldexp(
        bigfloat(1), -static_cast<long>(bigfloat::default_precision() * 3));
    for (int steps = 0; steps < 20000; ++steps) {
        bigfloat fl = boost::multiprecision::floor(rest);
        bigint ai = fl.convert_to<bigint>();
        bigint h2 = ai * h0 + h1;
        bigint k2 = ai * k0 + k1;
        if (k2 > den_bound && steps > 0) break;
        h1 = h0; h0 = h2;
        k1 = k0; k0 = k2;
        bigfloat frac = rest - fl;
        if (frac < tiny) break;
        rest = 1 / frac;
    }
    if (k0.is_zero()) return rational(0);
    return rational(h0) / rational(k0);
}

} // namespace detail

// Exact rational roots of p, with multiplicities. `unresolved` counts the
// remaining roots (with multiplicity) that are irrational or complex.
struct rational_root_report {
    std::vector<std::pair<rational, int>> roots;
    int unresolved = 0;
};

inline rational_root_report find_rational_roots(const polynomial<rational>& p) {
    if (p.is_zero())
        throw internal_error("root finding on the zero polynomial");
    rational_root_report report;
    polynomial<rational> work = p;

    // Peel off the root at the origin first so the float stage sees a nonzero
    // constant term.
    {
        int k = 0;
        while (work.degree() > 0 && field_traits<rational>::is_zero(work.coeff(0))) {
            auto [q, r] = work.divmod(polynomial<rational>::variable());
            (void)r;
            work = q;
            ++k;
        }
        if (k > 0) report.roots.emplace_back(rational(0), k);
    }
    if (work.degree() <= 0) return report;

    auto record = [&](const rational& root) {
        // Count the multiplicity by exact division.
        polynomial<rational> lin(std::vector<rational>{-root, rational(1)});
        int m = 0;
        for (;;) {
            auto [q, r] = work.divmod(lin);
            if (!r.is_zero()) break;
            work = q;
            ++m;
        }
        if (m == 0)
            throw internal_error("verified root fails to divide");
        report.roots.emplace_back(root, m);
    };

    if (work.degree() == 1) {
        record(-work.coeff(0) / work.coeff(1));
        report.unresolved = work.degree();
        return report;
    }

    // Distinct roots live in the square-free part. Clear denominators so the
    // rational-root bound (denominator divides the leading coefficient) gives
    // the continued-fraction cutoff.
    polynomial<rational> sf = work;
    {
        polynomial<rational> g = gcd(work, work.derivative());
        if (g.degree() > 0) sf = work.divmod(g).first;
    }
    bigint den_lcm = 1;
    for (int i = 0; i <= sf.degree(); ++i) {
        bigint d = boost::multiprecision::denominator(sf.coeff(i));
        den_lcm = den_lcm / boost::multiprecision::gcd(den_lcm, d) * d;
    }
    bigint lead_int =
        boost::multiprecision::abs(boost::multiprecision::numerator(sf.leading() * rational(den_lcm)));
    bigint content = 0;
    for (int i = 0; i <= sf.degree(); ++i)
        content = boost::multiprecision::gcd(
            content, boost::multiprecision::numerator(sf.coeff(i) * rational(den_lcm)));
    if (!content.is_zero()) lead_int /= content;
    const bigint den_bound = lead_int;

    // Precision ladder: generous to start with, doubled on a failed pass. The
    // exact verification step makes extra passes cheap insurance, not a
    // correctness requirement.
    unsigned bits = 320;
    {
        unsigned need = static_cast<unsigned>(boost::multiprecision::msb(den_bound + 1) + 1);
        if (4 * need + 96 > bits) bits = 4 * need + 96;
    }
    ensure_float_precision_initialized();
    for (int attempt = 0; attempt < 3 && work.degree() > 0; ++attempt, bits *= 2) {
        detail::precision_guard guard(bits);
        std::vector<bigfloat> fc(static_cast<std::size_t>(sf.degree()) + 1);
        for (int i = 0; i <= sf.degree(); ++i) fc[static_cast<std::size_t>(i)] = bigfloat(sf.coeff(i));
        std::vector<detail::cfloat> zs;
        try {
            zs = detail::aberth_roots(fc, bits);
        } catch (const cluster_error&) {
            if (attempt == 2) throw;
            continue;
        }
        const bigfloat real_cut =
            boost::multiprecision::ldexp(bigfloat(1), -static_cast<long>(bits) / 4);
        bool progress = false;
        for (const auto& zc : zs) {
            if (boost::multiprecision::abs(zc.im) > real_cut * (detail::cabs(zc) + 1)) continue;
            rational candidate = detail::reconstruct_rational(zc.re, den_bound);
            if (!work.eval(candidate).is_zero()) continue;
            // Already recorded on an earlier attempt?
            bool seen = false;
            for (const auto& [r, m] : report.roots) {
                (void)m;
                if (r == candidate) { seen = true; break; }
            }
            if (seen) continue;
            record(candidate);
            progress = true;
        }
        // A sweep that verified nothing new leaves only irrational or
        // complex roots behind; escalating cannot change that verdict.
        if (!progress) break;
    }
    report.unresolved = work.degree();
    return report;
}

// Real roots of a float polynomial, with multiplicities from root clusters.
// `complex_count` reports the non-real roots (with multiplicity).
struct real_root_report {
    std::vector<std::pair<bigfloat, int>> roots;
    int complex_count = 0;
};

inline real_root_report find_real_roots(const polynomial<bigfloat>& p) {
    if (p.is_zero())
        throw internal_error("root finding on the zero polynomial");
    real_root_report report;
    if (p.degree() == 0) return report;
    ensure_float_precision_initialized();
    const unsigned bits = float_precision_bits() + 96;
    detail::precision_guard guard(bits);

    std::vector<bigfloat> fc(static_cast<std::size_t>(p.degree()) + 1);
    bigfloat scale = 0;
    for (int i = 0; i <= p.degree(); ++i) {
        fc[static_cast<std::size_t>(i)] = p.coeff(i);
        bigfloat m = boost::multiprecision::abs(p.coeff(i));
        if (m > scale) scale = m;
    }
    auto zs = detail::aberth_roots(fc, bits);

    // Cluster at the caller's tolerance, not the elevated working precision:
    // a double root computed in floats splits into a conjugate pair or two
    // nearby reals, both within roughly the square root of the working
    // accuracy.
    const bigfloat cluster_radius = boost::multiprecision::ldexp(
        bigfloat(1), -static_cast<long>(float_precision_bits()) / 2 + 4);
    std::vector<bool> used(zs.size(), false);
    for (std::size_t i = 0; i < zs.size(); ++i) {
        if (used[i]) continue;
        std::vector<std::size_t> members{i};
        used[i] = true;
        for (std::size_t j = i + 1; j < zs.size(); ++j) {
            if (used[j]) continue;
            if (detail::cabs(zs[j] - zs[i]) <= cluster_radius * (detail::cabs(zs[i]) + 1)) {
                members.push_back(j);
                used[j] = true;
            }
        }
        bigfloat re_sum = 0, im_sum = 0;
        for (auto m : members) {
            re_sum += zs[m].re;
            im_sum += zs[m].im;
        }
        bigfloat re = re_sum / bigfloat(static_cast<unsigned>(members.size()));
        bigfloat im = im_sum / bigfloat(static_cast<unsigned>(members.size()));
        if (boost::multiprecision::abs(im) <= cluster_radius * (boost::multiprecision::abs(re) + 1))
            report.roots.emplace_back(re, static_cast<int>(members.size()));
        else
            report.complex_count += static_cast<int>(members.size());
    }
    std::sort(report.roots.begin(), report.roots.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return report;
}

} // namespace specrec
