// SPDX-License-Identifier: MIT
// Copyright (c) 2026 the specrec authors

#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "laurent_series.hpp"
#include "linalg.hpp"
#include "scalar.hpp"
#include "spectral_curve.hpp"

// Shared core of every branch-point residue computation: the local chart data
// around one branch point, the factor-to-series builders for the plain and
// conjugate slots, and the expansion of the recursion kernel in powers of
// u = 1/(z0 - a). Both the correlator recursion and the per-diagram evaluator
// run on these primitives, so the kernel's sign and differential conventions
// live in exactly one place.

namespace specrec::detail {

// Everything local to one branch point, built once per (computation, branch).
template <class F>
struct residue_frame {
    using series = laurent_series<F>;
    using traits = field_traits<F>;

    const spectral_curve<F>* curve;
    std::shared_ptr<const branch_chart<F>> chart;
    int L;
    series sigma, sigprime, dinv;
    std::map<std::pair<int, int>, series> eq_cache, esig_cache;
    std::map<std::string, series> bq_cache, bsig_cache;

    residue_frame(const spectral_curve<F>& c, std::size_t ai, int order) : curve(&c), L(order) {
        chart = c.chart(ai, L);
        sigma = chart->sigma;
        sigprime = sigma.derivative();
        series den = chart->y_delta * chart->dx_shift;
        if (den.valuation() != 2)
            throw internal_error("recursion kernel denominator does not vanish to second order");
        dinv = den.inverse();
    }

    static series pow(const series& s, int j) {
        series acc = s;
        for (int i = 1; i < j; ++i) acc *= s;
        return acc;
    }

    // (z - b)^{-j} with z set to the running point a + s, for branch point #b
    const series& eq(int b, int j) {
        auto it = eq_cache.find({b, j});
        if (it != eq_cache.end()) return it->second;
        const F& a = chart->a;
        const F& bp = curve->branch_points()[static_cast<std::size_t>(b)];
        series e;
        if (traits::is_zero(a - bp)) {
            e = series::monomial(traits::one(), -j, L);
        } else {
            series lin = series::from_polynomial(
                polynomial<F>(std::vector<F>{a - bp, traits::one()}), L);
            e = pow(lin, j).inverse();
        }
        return eq_cache.emplace(std::make_pair(b, j), std::move(e)).first->second;
    }

    // (z - b)^{-j} with z set to the conjugate point a + sigma(s), times
    // sigma'(s) for the slot's differential
    const series& esig(int b, int j) {
        auto it = esig_cache.find({b, j});
        if (it != esig_cache.end()) return it->second;
        const F& a = chart->a;
        const F& bp = curve->branch_points()[static_cast<std::size_t>(b)];
        series e;
        if (traits::is_zero(a - bp)) {
            e = pow(sigma, j).inverse() * sigprime;
        } else {
            series base = sigma + series::monomial(a - bp, 0, sigma.lim());
            e = pow(base, j).inverse() * sigprime;
        }
        return esig_cache.emplace(std::make_pair(b, j), std::move(e)).first->second;
    }

    // the two-point function against a fixed regular point p, per slot;
    // cached by the printed value of p, since reconstruction pools revisit
    // the same sample points across many residue computations
    const series& bq(const F& p) {
        const std::string key = traits::to_string(p);
        auto it = bq_cache.find(key);
        if (it != bq_cache.end()) return it->second;
        const F d = chart->a - p;
        series lin = series::from_polynomial(
            polynomial<F>(std::vector<F>{d, traits::one()}), L);
        return bq_cache.emplace(key, (lin * lin).inverse()).first->second;
    }
    const series& bsig(const F& p) {
        const std::string key = traits::to_string(p);
        auto it = bsig_cache.find(key);
        if (it != bsig_cache.end()) return it->second;
        const F d = chart->a - p;
        series base = sigma + series::monomial(d, 0, sigma.lim());
        return bsig_cache.emplace(key, (base * base).inverse() * sigprime).first->second;
    }

    // the two-point function joining the running point to its own conjugate:
    // sigma' / (s - sigma)^2
    const series& self_loop() {
        if (!self_ready) {
            series d = series::monomial(traits::one(), 1, sigma.lim()) - sigma;
            self_cache = sigprime * (d * d).inverse();
            self_ready = true;
        }
        return self_cache;
    }

    // sigma(s)^m, m >= 1, grown on demand
    const series& sigma_power(int m) {
        if (m < 1) throw internal_error("sigma power must be positive");
        if (sigpow.empty()) sigpow.push_back(sigma);
        while (static_cast<int>(sigpow.size()) < m) sigpow.push_back(sigpow.back() * sigma);
        return sigpow[static_cast<std::size_t>(m - 1)];
    }

private:
    series self_cache;
    bool self_ready = false;
    std::vector<series> sigpow;
};

// Residue of the kernel against a prepared local series. Given
// g(s) = bracket(s) / ((y - y o sigma) x') the returned map sends j to the
// coefficient of (z0 - a)^{-j} in
//   Res_s -1/2 (1/(z0 - a - s) - 1/(z0 - a - sigma(s))) g(s).
// All emitted orders have j >= 2, so the result never carries a residue of
// its own at the branch point.
template <class F>
std::map<int, F> residue_u_coefficients(residue_frame<F>& fr, const laurent_series<F>& g) {
    using traits = field_traits<F>;
    std::map<int, F> res;
    const int vg = g.valuation();
    if (vg > -2) return res;
    const int reach = -1 - vg;
    const F half = traits::one() / traits::from_int(2);
    for (int np = 1; np <= reach; ++np) {
        F gc = g.coeff(-1 - np);
        if (traits::is_zero(gc)) continue;
        res[np + 1] -= half * gc;
        for (int m = 1; m <= np; ++m) {
            F sc = fr.sigma_power(m).coeff(np);
            if (!traits::is_zero(sc)) res[m + 1] += half * gc * sc;
        }
    }
    return res;
}

// Deterministic generic sample values: small integers that are not branch
// points. Longer requests extend shorter ones, so reconstruction pools at
// different orders share their leading entries and memoized work is reused.
template <class F>
std::vector<F> generic_sample_points(const spectral_curve<F>& curve, int count) {
    using traits = field_traits<F>;
    std::vector<F> out;
    long k = 2;
    while (static_cast<int>(out.size()) < count) {
        F cand = traits::from_int(k);
        ++k;
        bool bad = false;
        for (const F& a : curve.branch_points())
            if (traits::approx_equal(cand, a) || !traits::is_invertible(cand - a)) {
                bad = true;
                break;
            }
        if (!bad) out.push_back(std::move(cand));
    }
    return out;
}

// Sample-to-coefficient system for reconstructing one variable in the basis
// (z - c)^{-j}, j = jmin..jmax over the given centers. Rows follow the sample
// list; columns are laid out center-major. The square head (one row per
// column) is inverted for solving; trailing rows are for verification.
template <class F>
struct sample_basis {
    std::vector<std::vector<F>> full;
    std::vector<std::vector<F>> inverse;
    int jmin = 2, jmax = 2;
    std::size_t columns = 0;
};

template <class F>
sample_basis<F> make_sample_basis(const std::vector<F>& centers, const std::vector<F>& samples,
                                  int jmin, int jmax) {
    using traits = field_traits<F>;
    const std::size_t cols = centers.size() * static_cast<std::size_t>(jmax - jmin + 1);
    if (samples.size() < cols) throw internal_error("not enough samples for the polar basis");
    sample_basis<F> sys;
    sys.jmin = jmin;
    sys.jmax = jmax;
    sys.columns = cols;
    sys.full.assign(samples.size(), {});
    for (std::size_t s = 0; s < samples.size(); ++s) {
        auto& row = sys.full[s];
        row.reserve(cols);
        for (const F& c : centers) {
            const F inv = traits::one() / (samples[s] - c);
            F p = traits::one();
            for (int j = 1; j <= jmax; ++j) {
                p = p * inv;
                if (j >= jmin) row.push_back(p);
            }
        }
    }
    std::vector<std::vector<F>> head(sys.full.begin(),
                                     sys.full.begin() + static_cast<std::ptrdiff_t>(cols));
    sys.inverse = matrix_inverse(head);
    return sys;
}

} // namespace specrec::detail
