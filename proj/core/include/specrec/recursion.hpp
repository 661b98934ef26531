// SPDX-License-Identifier: MIT
// Copyright (c) 2026 the specrec authors

#pragma once

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "laurent_series.hpp"
#include "linalg.hpp"
#include "residue_core.hpp"
#include "scalar.hpp"
#include "spectral_curve.hpp"

namespace specrec {

// Residue recursion for the non-mixed correlators W^{(h)}_n of the two-matrix
// model on a genus-zero spectral curve.
//
// Every stable W^{(h)}_n, read in one variable with the others held fixed, is
// a finite sum  sum_{b,j>=2} c_{b,j} (z - b)^{-j}  over the branch points b:
// no simple poles, no polynomial part. The recursion around a branch point a,
//
//   W^{(h)}_{n}(z0, p_K) = sum_a Res_{q->a} K(z0, q) [ W^{(h-1)}_{n+1}(q, qb, p_K)
//       + sum' W^{(h1)}(q, p_I) W^{(h2)}(qb, p_J) ],
//
//   K(z0, q) = -1/2 (1/(z0-q) - 1/(z0-qb)) / ((y(q) - y(qb)) x'(q) dq) dz0,
//
// with qb the deck conjugate of q, is evaluated in the local coordinate
// s = q - a. The z0 dependence enters only through the kernel, and expanding
// 1/(z0 - a - s) = sum_m u^{m+1} s^m in u = 1/(z0 - a) turns the residue into
// a polynomial in u whose coefficients are exactly the polar coefficients of
// the result at a. The primed sum omits the two terms that would carry the
// unstable one-point function.
//
// Fixed variables of lower-order correlators are handled by evaluation:
// W^{(h')}(q, ...) needs its first TWO slots as local series only in the
// first term, and that two-slot polar table is reconstructed by sampling the
// second slot at generic points and solving for the polar coefficients, with
// three held-out samples re-checked afterwards. If the check fails the
// assumed pole order escalates once or twice before the run is abandoned.
//
// The engine works on the curve exactly as stored, which is the kappa-rescaled
// normalization of the model; correlators of the original model are the
// stored ones times dressing(h, n) = kappa^{2-2h-n}.

// Polar decomposition of a correlator in one variable: the value at z is
// sum over centers b and orders j >= 2 of coeff[b][j-2] * (z - b)^{-j}.
template <class F>
struct polar_part {
    std::vector<F> centers;
    std::vector<std::vector<F>> coeff;

    F coefficient(std::size_t b, int j) const {
        if (b >= coeff.size() || j < 2) throw internal_error("polar coefficient index out of range");
        const auto& row = coeff[b];
        if (static_cast<std::size_t>(j - 2) >= row.size()) return field_traits<F>::zero();
        return row[static_cast<std::size_t>(j - 2)];
    }

    F eval(const F& z) const {
        F acc = field_traits<F>::zero();
        for (std::size_t b = 0; b < centers.size(); ++b) {
            if (coeff[b].empty()) continue;
            F d = z - centers[b];
            if (!field_traits<F>::is_invertible(d))
                throw branch_value_error("correlator evaluated at a branch point");
            F inv = field_traits<F>::one() / d;
            F p = inv * inv;
            for (const F& c : coeff[b]) {
                acc += c * p;
                p = p * inv;
            }
        }
        return acc;
    }
};

// Number of terms in the fully unrolled recursion tree for W^{(h)}_n. The
// diagram enumeration must reproduce these counts through its multiplicities.
inline long long unroll_term_count(int h, int n) {
    if (h < 0 || n < 1 || (h == 0 && n == 1))
        throw internal_error("unroll count requested for an unstable correlator");
    if (h == 0 && n == 2) return 1;
    static std::map<std::pair<int, int>, long long> memo;
    auto it = memo.find({h, n});
    if (it != memo.end()) return it->second;
    auto binom = [](int nn, int kk) {
        long long r = 1;
        for (int i = 1; i <= kk; ++i) r = r * (nn - kk + i) / i;
        return r;
    };
    long long total = (h >= 1) ? unroll_term_count(h - 1, n + 1) : 0;
    const int k = n - 1;
    for (int h1 = 0; h1 <= h; ++h1)
        for (int i = 0; i <= k; ++i) {
            const int h2 = h - h1, j = k - i;
            if (h1 == 0 && i == 0) continue;
            if (h2 == 0 && j == 0) continue;
            total += binom(k, i) * unroll_term_count(h1, i + 1) * unroll_term_count(h2, j + 1);
        }
    memo[{h, n}] = total;
    return total;
}

template <class F>
class recursion_engine {
public:
    explicit recursion_engine(std::shared_ptr<const spectral_curve<F>> curve, int order_padding = 0)
        : m_curve(std::move(curve)), m_padding(order_padding) {
        if (!m_curve) throw internal_error("recursion engine constructed without a curve");
    }

    const spectral_curve<F>& curve() const { return *m_curve; }

    // Largest pole order of W^{(h)}_n at a branch point, in either variable.
    static int pole_order_bound(int h, int n) { return 6 * h + 2 * n - 4; }

    // kappa^(2 - 2h - n): the factor relating the stored normalization to the
    // correlator of the model the curve was built from.
    F dressing(int h, int n) const { return int_power(m_curve->kappa(), 2 - 2 * h - n); }

    // W^{(h)}_{n}(z, fixed...) decomposed in z, n = fixed.size() + 1.
    // The unstable (0,1) and (0,2) have no such decomposition and are served
    // by w_value directly.
    polar_part<F> w_polar(int h, const std::vector<F>& fixed) {
        const int n = static_cast<int>(fixed.size()) + 1;
        validate_order(h, n);
        if (h == 0 && n <= 2)
            throw unsupported_order_error(
                "genus-zero one- and two-point functions have no branch-point polar form");
        for (const F& p : fixed)
            for (const F& a : m_curve->branch_points())
                if (field_traits<F>::approx_equal(p, a) || !field_traits<F>::is_invertible(p - a))
                    throw branch_value_error("fixed point coincides with a branch point");
        const polar_coeffs& pv = polar1(h, fixed);
        return polar_part<F>{m_curve->branch_points(), pv};
    }

    // Value of W^{(h)}_n at the given points, as the coefficient of the
    // product of coordinate differentials.
    F w_value(int h, const std::vector<F>& points) {
        const int n = static_cast<int>(points.size());
        validate_order(h, n);
        if (h == 0 && n == 1)
            return m_curve->y().eval(points[0]) * m_curve->x_prime().eval(points[0]);
        if (h == 0 && n == 2) {
            F d = points[0] - points[1];
            if (field_traits<F>::approx_equal(points[0], points[1]) ||
                !field_traits<F>::is_invertible(d))
                throw internal_error("two-point function evaluated at coinciding points");
            F inv = field_traits<F>::one() / d;
            return inv * inv;
        }
        std::vector<F> fixed(points.begin() + 1, points.end());
        return w_polar(h, fixed).eval(points[0]);
    }

private:
    using series = laurent_series<F>;
    using traits = field_traits<F>;
    // coeffs[b][j-2] is the coefficient of (z - branch_b)^{-j}; rows are tight
    using polar_coeffs = std::vector<std::vector<F>>;
    // two-slot table: mat[b0][j0-2] holds the second-slot decomposition
    struct mat_entry {
        std::vector<std::vector<polar_coeffs>> c;
    };

    static void validate_order(int h, int n) {
        if (h < 0) throw unsupported_order_error("negative genus");
        if (n < 1)
            throw unsupported_order_error("correlators need at least one point; "
                                          "free energies are computed by the loop operator");
    }

    static F int_power(F base, int e) {
        if (e < 0) {
            if (!traits::is_invertible(base)) throw internal_error("negative power of a non-invertible scalar");
            base = traits::one() / base;
            e = -e;
        }
        F acc = traits::one();
        for (int i = 0; i < e; ++i) acc = acc * base;
        return acc;
    }

    static F row_coeff(const polar_coeffs& pc, std::size_t b, int j) {
        const auto& row = pc[b];
        const std::size_t at = static_cast<std::size_t>(j - 2);
        return at < row.size() ? row[at] : traits::zero();
    }

    // Correlators are symmetric in the fixed points, so the memo key uses the
    // multiset of printed values; permuted argument lists share one entry.
    std::string memo_key(int h, const std::vector<F>& pts) const {
        std::vector<std::string> printed;
        printed.reserve(pts.size());
        for (const F& p : pts) printed.push_back(traits::to_string(p));
        std::sort(printed.begin(), printed.end());
        std::string key = std::to_string(h);
        key += ':';
        key += std::to_string(pts.size());
        for (const std::string& s : printed) {
            key += '|';
            key += s;
        }
        return key;
    }

    // Deterministic generic sample values shared with every reconstruction.
    std::vector<F> sample_points(int count) const {
        return detail::generic_sample_points(*m_curve, count);
    }

    // ---- the residue computation ------------------------------------------

    using frame = detail::residue_frame<F>;

    // Pole depth of one factor of the quadratic term: W^{(hf)} in m fixed
    // points plus the running slot. The genus-zero two-point factor against a
    // fixed regular point is regular at the branch point.
    static int factor_depth(int hf, int m) {
        return (hf == 0 && m == 1) ? 0 : pole_order_bound(hf, m + 1);
    }

    // Largest pole order of the bracket of the recursion for W^{(h)}_{k+1} at
    // a branch point, maximized over the handle term and every split. The
    // local window only has to clear this depth: the kernel adds two orders
    // and the emitted coefficients live strictly below the pole.
    static int bracket_depth(int h, int k) {
        int d = 0;
        if (h >= 1) d = (h == 1 && k == 0) ? 2 : 2 * pole_order_bound(h - 1, k + 2);
        for (int h1 = 0; h1 <= h; ++h1)
            for (int i = 0; i <= k; ++i) {
                const int h2 = h - h1, j = k - i;
                if (h1 == 0 && i == 0) continue;
                if (h2 == 0 && j == 0) continue;
                d = std::max(d, factor_depth(h1, i) + factor_depth(h2, j));
            }
        return d;
    }

    // Shared per-branch frames, keyed by (branch index, window). Reusing a
    // frame across calls keeps its chart, kernel inverse, and slot caches;
    // the node-based map keeps references valid across nested insertions.
    frame& frame_for(std::size_t ai, int L) {
        auto it = m_frames.find({ai, L});
        if (it != m_frames.end()) return it->second;
        return m_frames.try_emplace({ai, L}, *m_curve, ai, L).first->second;
    }

    // One factor of the quadratic term: W^{(hf)}(slot, pts[subset]) as a local
    // series in s, where the slot is q for eq-plugging or its conjugate.
    series factor_series(frame& fr, int hf, const std::vector<F>& pts, unsigned mask, bool conj) {
        std::vector<F> sub;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (mask & (1u << i)) sub.push_back(pts[i]);
        if (hf == 0 && sub.size() == 1)
            return conj ? fr.bsig(sub[0]) : fr.bq(sub[0]);
        const polar_coeffs& pv = polar1(hf, sub);
        series f = series::zero_to(fr.L);
        for (std::size_t b = 0; b < pv.size(); ++b)
            for (std::size_t t = 0; t < pv[b].size(); ++t) {
                const F& c = pv[b][t];
                if (traits::is_zero(c)) continue;
                const int j = static_cast<int>(t) + 2;
                f += c * (conj ? fr.esig(static_cast<int>(b), j) : fr.eq(static_cast<int>(b), j));
            }
        return f;
    }

    // Residue at branch point #ai of the recursion for W^{(h)}_{k+1}(z0, pts):
    // returns the map j -> polar coefficient of (z0 - a)^{-j}.
    std::map<int, F> residue_at(std::size_t ai, int h, const std::vector<F>& pts, int bound_out) {
        const int k = static_cast<int>(pts.size());
        const int L = bracket_depth(h, k) + 8 + m_padding;
        frame& fr = frame_for(ai, L);

        series bracket = series::zero_to(L);
        if (h >= 1) {
            if (h == 1 && k == 0) {
                bracket += fr.self_loop();
            } else {
                const mat_entry& tab = polar2(h - 1, pts);
                for (std::size_t b0 = 0; b0 < tab.c.size(); ++b0)
                    for (std::size_t t0 = 0; t0 < tab.c[b0].size(); ++t0) {
                        const polar_coeffs& second = tab.c[b0][t0];
                        series inner = series::zero_to(L);
                        bool any = false;
                        for (std::size_t b1 = 0; b1 < second.size(); ++b1)
                            for (std::size_t t1 = 0; t1 < second[b1].size(); ++t1) {
                                const F& c = second[b1][t1];
                                if (traits::is_zero(c)) continue;
                                inner += c * fr.esig(static_cast<int>(b1), static_cast<int>(t1) + 2);
                                any = true;
                            }
                        if (any)
                            bracket += fr.eq(static_cast<int>(b0), static_cast<int>(t0) + 2) * inner;
                    }
            }
        }
        const unsigned full = 1u << k;
        std::map<std::pair<int, unsigned>, series> fq_cache, fs_cache;
        auto cached_factor = [&](int hf, unsigned mask, bool conj) -> const series& {
            auto& cache = conj ? fs_cache : fq_cache;
            auto it = cache.find({hf, mask});
            if (it != cache.end()) return it->second;
            return cache.emplace(std::make_pair(hf, mask), factor_series(fr, hf, pts, mask, conj))
                .first->second;
        };
        for (unsigned mask = 0; mask < full; ++mask) {
            const unsigned rest = (full - 1) & ~mask;
            const int i = std::popcount(mask);
            for (int h1 = 0; h1 <= h; ++h1) {
                const int h2 = h - h1;
                if (h1 == 0 && i == 0) continue;
                if (h2 == 0 && rest == 0) continue;
                bracket += cached_factor(h1, mask, false) * cached_factor(h2, rest, true);
            }
        }

        series g = bracket * fr.dinv;
        std::map<int, F> res = detail::residue_u_coefficients(fr, g);
        // Orders past the theoretical bound must cancel. In exact arithmetic a
        // survivor is a bug; in floating point the cancellation leaves noise
        // that is dropped here so pole orders stay structural.
        for (auto it = res.begin(); it != res.end();) {
            if (it->first > bound_out) {
                if constexpr (traits::is_exact) {
                    if (!traits::is_zero(it->second))
                        throw internal_error("correlator pole order exceeds its bound");
                }
                it = res.erase(it);
            } else {
                ++it;
            }
        }
        return res;
    }

    // W^{(h)}_{k+1}(z0, pts) decomposed in z0. Reference stays valid: the memo
    // is node-based and entries are never erased.
    const polar_coeffs& polar1(int h, const std::vector<F>& pts) {
        const int n = static_cast<int>(pts.size()) + 1;
        if (h < 0 || (h == 0 && n <= 2))
            throw internal_error("polar decomposition requested for an unstable correlator");
        const std::string key = memo_key(h, pts);
        auto hit = m_polar1.find(key);
        if (hit != m_polar1.end()) return hit->second;

        const int bound_out = pole_order_bound(h, n);
        const std::size_t nbp = m_curve->branch_points().size();
        polar_coeffs out(nbp);
        for (std::size_t ai = 0; ai < nbp; ++ai) {
            std::map<int, F> res = residue_at(ai, h, pts, bound_out);
            int jmax = 1;
            for (const auto& [j, c] : res)
                if (!traits::is_zero(c)) jmax = std::max(jmax, j);
            std::vector<F> row(static_cast<std::size_t>(std::max(jmax - 1, 0)), traits::zero());
            for (const auto& [j, c] : res)
                if (j <= jmax) row[static_cast<std::size_t>(j - 2)] = c;
            out[ai] = std::move(row);
        }
        return m_polar1.emplace(key, std::move(out)).first->second;
    }

    // W^{(h)}_{k+2}(slotA, slotB, pts) with both leading slots decomposed:
    // slotA comes from polar1 directly, slotB is reconstructed from samples.
    const mat_entry& polar2(int h, const std::vector<F>& pts) {
        const int n = static_cast<int>(pts.size()) + 2;
        const std::string key = memo_key(h, pts);
        auto hit = m_polar2.find(key);
        if (hit != m_polar2.end()) return hit->second;

        const std::size_t nbp = m_curve->branch_points().size();
        const int bound1 = pole_order_bound(h, n);
        int bound2 = bound1;
        for (int attempt = 0;; ++attempt) {
            const int nb2 = static_cast<int>(nbp) * (bound2 - 1);
            const int want = nb2 + 3;
            const std::vector<F> samples = sample_points(want);
            std::vector<const polar_coeffs*> rows;
            rows.reserve(static_cast<std::size_t>(want));
            for (const F& s : samples) {
                std::vector<F> args;
                args.reserve(pts.size() + 1);
                args.push_back(s);
                args.insert(args.end(), pts.begin(), pts.end());
                rows.push_back(&polar1(h, args));
            }
            const basis_system& sys = basis_for(bound2);

            mat_entry out;
            out.c.assign(nbp, {});
            bool ok = true;
            for (std::size_t b0 = 0; ok && b0 < nbp; ++b0) {
                out.c[b0].assign(static_cast<std::size_t>(bound1 - 1), polar_coeffs(nbp));
                for (int j0 = 2; ok && j0 <= bound1; ++j0) {
                    std::vector<F> vals;
                    vals.reserve(static_cast<std::size_t>(want));
                    bool all_zero = true;
                    for (const auto* r : rows) {
                        F v = row_coeff(*r, b0, j0);
                        if (!traits::is_zero(v)) all_zero = false;
                        vals.push_back(std::move(v));
                    }
                    if (all_zero) continue;
                    std::vector<F> head(vals.begin(), vals.begin() + nb2);
                    std::vector<F> sol = detail::matrix_apply(sys.inverse, head);
                    for (int check = 0; check < 3; ++check) {
                        const std::size_t row = static_cast<std::size_t>(nb2 + check);
                        F predicted = traits::zero();
                        for (int col = 0; col < nb2; ++col)
                            predicted += sys.full[row][static_cast<std::size_t>(col)] *
                                         sol[static_cast<std::size_t>(col)];
                        if (!traits::approx_equal(predicted, vals[row])) { ok = false; break; }
                    }
                    if (!ok) break;
                    polar_coeffs second(nbp);
                    for (std::size_t b1 = 0; b1 < nbp; ++b1) {
                        std::vector<F> r2(static_cast<std::size_t>(bound2 - 1), traits::zero());
                        for (int j1 = 2; j1 <= bound2; ++j1)
                            r2[static_cast<std::size_t>(j1 - 2)] =
                                sol[static_cast<std::size_t>(b1) * static_cast<std::size_t>(bound2 - 1) +
                                    static_cast<std::size_t>(j1 - 2)];
                        second[b1] = std::move(r2);
                    }
                    out.c[b0][static_cast<std::size_t>(j0 - 2)] = std::move(second);
                }
            }
            if (ok) return m_polar2.emplace(key, std::move(out)).first->second;
            if (attempt >= 2)
                throw truncation_insufficient_error(
                    "two-variable reconstruction failed after escalating the pole order twice");
            bound2 += 2;
        }
    }

    // Sample-to-coefficient system for one reconstructed variable.
    using basis_system = detail::sample_basis<F>;

    const basis_system& basis_for(int bound2) {
        auto hit = m_basis.find(bound2);
        if (hit != m_basis.end()) return hit->second;
        const std::size_t nbp = m_curve->branch_points().size();
        const int want = static_cast<int>(nbp) * (bound2 - 1) + 3;
        basis_system sys = detail::make_sample_basis(m_curve->branch_points(),
                                                     sample_points(want), 2, bound2);
        return m_basis.emplace(bound2, std::move(sys)).first->second;
    }

    std::shared_ptr<const spectral_curve<F>> m_curve;
    int m_padding;
    std::map<std::string, polar_coeffs> m_polar1;
    std::map<std::string, mat_entry> m_polar2;
    std::map<int, basis_system> m_basis;
    std::map<std::pair<std::size_t, int>, frame> m_frames;
};

} // namespace specrec
