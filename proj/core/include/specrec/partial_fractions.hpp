// SPDX-License-Identifier: MIT
// Copyright (c) 2026 the specrec authors

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "laurent_series.hpp"
#include "polynomial.hpp"
#include "rational_function.hpp"
#include "roots.hpp"
#include "scalar.hpp"

namespace specrec {

// Partial-fraction decomposition of a rational function whose denominator
// splits into linear factors over the scalar field. The decomposition is the
// canonical output format for correlators: a polynomial part plus, per pole,
// the coefficients of (z - pole)^(-1) ... (z - pole)^(-m).

template <class F>
struct pf_block {
    F pole;
    // coeffs[j] multiplies (z - pole)^(-(j+1)); the block's order is
    // coeffs.size() and the last entry may be zero only transiently (resum
    // and printing trim it).
    std::vector<F> coeffs;
};

template <class F>
struct partial_fractions {
    polynomial<F> poly_part;
    std::vector<pf_block<F>> blocks;

    rational_function<F> resum() const {
        rational_function<F> total(poly_part);
        for (const auto& block : blocks) {
            polynomial<F> lin(std::vector<F>{-block.pole, field_traits<F>::one()});
            rational_function<F> inv_lin(polynomial<F>(field_traits<F>::one()), lin);
            rational_function<F> power(polynomial<F>(field_traits<F>::one()));
            for (std::size_t j = 0; j < block.coeffs.size(); ++j) {
                power = power * inv_lin;
                total = total + rational_function<F>(polynomial<F>(block.coeffs[j])) * power;
            }
        }
        return total;
    }

    std::string str(const std::string& var = "z") const {
        std::string out;
        if (!poly_part.is_zero()) out += poly_part.str(var);
        for (const auto& block : blocks) {
            for (std::size_t j = 0; j < block.coeffs.size(); ++j) {
                if (field_traits<F>::is_zero(block.coeffs[j])) continue;
                if (!out.empty()) out += " + ";
                out += "(" + field_traits<F>::to_string(block.coeffs[j]) + ")*(" + var +
                       " - (" + field_traits<F>::to_string(block.pole) + "))^-" +
                       std::to_string(j + 1);
            }
        }
        if (out.empty()) out = "0";
        return out;
    }
};

namespace detail {

// Synthetic division of p by (z - a). The remainder p(a) is returned; exact
// callers assert it is zero, float callers check it is negligibly small.
template <class F>
std::pair<polynomial<F>, F> deflate(const polynomial<F>& p, const F& a) {
    if (p.degree() < 1) return {polynomial<F>(), p.coeff(0)};
    std::vector<F> q(static_cast<std::size_t>(p.degree()));
    F carry = p.leading();
    for (int k = p.degree() - 1; k >= 0; --k) {
        q[static_cast<std::size_t>(k)] = carry;
        carry = p.coeff(k) + a * carry;
    }
    return {polynomial<F>(std::move(q)), carry};
}

} // namespace detail

// Core decomposition with caller-supplied poles and multiplicities, which
// must account for the full denominator degree. Works over any scalar field,
// including floats: the known pole orders are divided out synthetically, so
// no series inversion ever meets an approximately-zero leading coefficient.
template <class F>
partial_fractions<F> decompose_at(const rational_function<F>& f,
                                  const std::vector<std::pair<F, int>>& poles) {
    partial_fractions<F> result;
    auto [quot, rem] = f.num().divmod(f.den());
    result.poly_part = quot;
    if (rem.is_zero()) return result;

    int total = 0;
    for (const auto& [pole, mult] : poles) {
        (void)pole;
        total += mult;
    }
    if (total != f.den().degree())
        throw internal_error("pole multiplicities cover degree " + std::to_string(total) +
                             " of a degree-" + std::to_string(f.den().degree()) +
                             " denominator");

    for (const auto& [pole, mult] : poles) {
        // den = (z - pole)^mult * g with g(pole) != 0; expand rem/g at the
        // pole to read off the block coefficients.
        polynomial<F> g = f.den();
        for (int j = 0; j < mult; ++j) {
            auto [q, r] = detail::deflate(g, pole);
            if constexpr (field_traits<F>::is_exact) {
                if (!field_traits<F>::is_zero(r))
                    throw internal_error("declared pole does not divide the denominator");
            } else {
                if (!field_traits<F>::approx_equal(r + field_traits<F>::one(),
                                                   field_traits<F>::one()))
                    throw precision_loss_error("declared pole leaves a large remainder");
            }
            g = q;
        }
        laurent_series<F> top = shifted_polynomial_series<F>(rem, pole, mult);
        laurent_series<F> bottom = shifted_polynomial_series<F>(g, pole, mult);
        laurent_series<F> local = top * bottom.inverse();
        pf_block<F> block;
        block.pole = pole;
        block.coeffs.assign(static_cast<std::size_t>(mult), field_traits<F>::zero());
        for (int j = 0; j < mult; ++j)
            block.coeffs[static_cast<std::size_t>(mult - 1 - j)] = local.coeff(j);
        while (!block.coeffs.empty() &&
               field_traits<F>::is_zero(block.coeffs.back()))
            block.coeffs.pop_back();
        if (!block.coeffs.empty()) result.blocks.push_back(std::move(block));
    }
    return result;
}

// Full decomposition over the exact field. Requires every pole to be
// rational; otherwise the decomposition does not exist over the field and
// the float backend is the right tool.
inline partial_fractions<rational> decompose(const rational_function<rational>& f) {
    std::vector<std::pair<rational, int>> poles;
    if (f.den().degree() > 0) {
        auto report = find_rational_roots(f.den());
        if (report.unresolved != 0)
            throw unsplittable_denominator_error(
                "denominator has " + std::to_string(report.unresolved) +
                " roots outside the rational field");
        poles = std::move(report.roots);
    }
    auto result = decompose_at(f, poles);
    if (!(result.resum() == f))
        throw internal_error("partial fractions fail to resum");
    return result;
}

// Full decomposition over the float field; real poles only.
inline partial_fractions<bigfloat> decompose(const rational_function<bigfloat>& f) {
    std::vector<std::pair<bigfloat, int>> poles;
    if (f.den().degree() > 0) {
        auto report = find_real_roots(f.den());
        if (report.complex_count != 0)
            throw unsplittable_denominator_error(
                "denominator has " + std::to_string(report.complex_count) +
                " non-real roots");
        poles = std::move(report.roots);
    }
    return decompose_at(f, poles);
}

} // namespace specrec
