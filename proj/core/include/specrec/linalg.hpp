// SPDX-License-Identifier: MIT
// Copyright (c) 2026 the specrec authors

#pragma once

#include <utility>
#include <vector>

#include "errors.hpp"
#include "scalar.hpp"

namespace specrec::detail {

// Dense linear solve by Gaussian elimination; the pivot strategy is the
// field's own (magnitude for floats, first invertible for exact scalars).
template <class F>
std::vector<F> linear_solve(std::vector<std::vector<F>> m, std::vector<F> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = n;
        for (std::size_t row = col; row < n; ++row) {
            if (!field_traits<F>::is_invertible(m[row][col])) continue;
            if (pivot == n || field_traits<F>::prefer_pivot(m[row][col], m[pivot][col]))
                pivot = row;
        }
        if (pivot == n) throw internal_error("singular linear system");
        std::swap(m[pivot], m[col]);
        std::swap(rhs[pivot], rhs[col]);
        const F inv = field_traits<F>::one() / m[col][col];
        for (std::size_t row = col + 1; row < n; ++row) {
            if (field_traits<F>::is_zero(m[row][col])) continue;
            const F factor = m[row][col] * inv;
            for (std::size_t k = col; k < n; ++k) m[row][k] -= factor * m[col][k];
            rhs[row] -= factor * rhs[col];
        }
    }
    std::vector<F> sol(n, field_traits<F>::zero());
    for (std::size_t row = n; row-- > 0;) {
        F acc = rhs[row];
        for (std::size_t k = row + 1; k < n; ++k) acc -= m[row][k] * sol[k];
        sol[row] = acc / m[row][row];
    }
    return sol;
}

// Explicit inverse, column by column. Worth it when the same matrix is
// applied to many right-hand sides.
template <class F>
std::vector<std::vector<F>> matrix_inverse(const std::vector<std::vector<F>>& m) {
    const std::size_t n = m.size();
    std::vector<std::vector<F>> inv(n, std::vector<F>(n, field_traits<F>::zero()));
    for (std::size_t col = 0; col < n; ++col) {
        std::vector<F> e(n, field_traits<F>::zero());
        e[col] = field_traits<F>::one();
        auto x = linear_solve(m, std::move(e));
        for (std::size_t row = 0; row < n; ++row) inv[row][col] = x[row];
    }
    return inv;
}

template <class F>
std::vector<F> matrix_apply(const std::vector<std::vector<F>>& m, const std::vector<F>& v) {
    std::vector<F> out(m.size(), field_traits<F>::zero());
    for (std::size_t r = 0; r < m.size(); ++r)
        for (std::size_t c = 0; c < v.size(); ++c) out[r] += m[r][c] * v[c];
    return out;
}

} // namespace specrec::detail
