// SPDX-License-Identifier: MIT
// Copyright (c) 2026 the specrec authors

#pragma once

#include <map>
#include <numeric>
#include <vector>

#include "errors.hpp"
#include "scalar.hpp"

namespace specrec {

// Exact pairing oracle for the Gaussian two-matrix ensemble. Expectations of
// products of traces are computed by brute-force Wick enumeration, completely
// independently of the spectral-curve machinery, so they can adjudicate its
// results. The measure is exp(-(N/T)(t2 tr M1^2/2 + tt2 tr M2^2/2
// - kappa tr M1 M2)); the propagator of the pair (a, b) is hbar (Q^-1)_ab
// with Q = [[t2, -kappa], [-kappa, tt2]] and hbar = T/N.

struct gaussian_couplings {
    rational t2, tt2, kappa;
    rational det() const { return t2 * tt2 - kappa * kappa; }
};

// A correlator of trace words, organized two ways. With E pairs and V traces:
//   full moment       = T^E * sum_j full_by_n_power[j] * N^j,
//   connected moment  = T^E * sum_g connected_by_genus[g] * N^(2 - 2g - V).
// For a Gaussian measure the connected part is exactly the sum over pairings
// whose gluing joins all traces, and the genus of each such pairing follows
// from the Euler characteristic V - E + F of its ribbon graph.
struct pairing_expectation {
    int half_edges = 0;
    int pairs = 0;
    int traces = 0;
    std::map<int, rational> full_by_n_power;
    std::map<int, rational> connected_by_genus;

    rational full_eval(const rational& t, const rational& n) const {
        rational acc(0);
        for (const auto& [j, c] : full_by_n_power) acc += c * detail_pow(n, j);
        return acc * detail_pow(t, pairs);
    }
    rational connected_eval(const rational& t, const rational& n) const {
        rational acc(0);
        for (const auto& [g, c] : connected_by_genus)
            acc += c * detail_pow(n, 2 - 2 * g - traces);
        return acc * detail_pow(t, pairs);
    }

private:
    static rational detail_pow(const rational& x, int k) {
        rational acc(1);
        for (int i = 0; i < (k < 0 ? -k : k); ++i) acc *= x;
        if (k < 0) acc = rational(1) / acc;
        return acc;
    }
};

namespace detail {

struct union_find {
    std::vector<int> parent;
    explicit union_find(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    }
    void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
    int components() {
        int count = 0;
        for (int i = 0; i < static_cast<int>(parent.size()); ++i)
            if (find(i) == i) ++count;
        return count;
    }
};

} // namespace detail

// Expectation of a product of trace words. Each word lists matrix labels
// (0 for the first matrix, 1 for the second) in cyclic order inside one
// trace. Enumeration is exponential in the number of matrices; words beyond
// 16 half-edges in total are rejected rather than silently taking hours.
inline pairing_expectation pair_correlator(const std::vector<std::vector<int>>& words,
                                           const gaussian_couplings& c) {
    const rational d = c.det();
    if (d.is_zero())
        throw no_genus_zero_solution_error("the quadratic part of the model is degenerate");
    int n = 0;
    for (const auto& w : words) n += static_cast<int>(w.size());
    if (n > 16)
        throw unsupported_order_error("the pairing oracle supports at most 16 half-edges");

    pairing_expectation out;
    out.half_edges = n;
    out.pairs = n / 2;
    out.traces = static_cast<int>(words.size());
    if (n % 2 != 0) return out; // odd moments vanish

    // Flatten: position -> (label, trace index, cyclic successor).
    std::vector<int> label, word_of, gamma;
    label.reserve(static_cast<std::size_t>(n));
    for (int w = 0; w < static_cast<int>(words.size()); ++w) {
        const int first = static_cast<int>(label.size());
        const int m = static_cast<int>(words[static_cast<std::size_t>(w)].size());
        for (int j = 0; j < m; ++j) {
            label.push_back(words[static_cast<std::size_t>(w)][static_cast<std::size_t>(j)]);
            word_of.push_back(w);
            gamma.push_back(j + 1 < m ? first + j + 1 : first);
        }
    }

    const rational prop[2][2] = {{c.tt2 / d, c.kappa / d}, {c.kappa / d, c.t2 / d}};
    std::vector<int> match(static_cast<std::size_t>(n), -1);

    auto settle = [&](const rational& weight) {
        // Index loops: each Wick pair (p, q) glues the index slot before p to
        // the slot after q and vice versa; loops are the resulting classes.
        detail::union_find slots(n), comps(out.traces);
        for (int p = 0; p < n; ++p) {
            const int q = match[static_cast<std::size_t>(p)];
            if (q < p) continue;
            slots.unite(p, gamma[static_cast<std::size_t>(q)]);
            slots.unite(gamma[static_cast<std::size_t>(p)], q);
            comps.unite(word_of[static_cast<std::size_t>(p)],
                        word_of[static_cast<std::size_t>(q)]);
        }
        const int faces = slots.components();
        out.full_by_n_power[faces - out.pairs] += weight;
        if (comps.components() == 1) {
            const int twice_genus = 2 - out.traces + out.pairs - faces;
            if (twice_genus < 0 || twice_genus % 2 != 0)
                throw internal_error("pairing produced an impossible Euler characteristic");
            out.connected_by_genus[twice_genus / 2] += weight;
        }
    };

    auto recurse = [&](auto&& self, int from, const rational& weight) -> void {
        int p = from;
        while (p < n && match[static_cast<std::size_t>(p)] >= 0) ++p;
        if (p == n) {
            settle(weight);
            return;
        }
        for (int q = p + 1; q < n; ++q) {
            if (match[static_cast<std::size_t>(q)] >= 0) continue;
            match[static_cast<std::size_t>(p)] = q;
            match[static_cast<std::size_t>(q)] = p;
            self(self, p + 1,
                 weight * prop[static_cast<std::size_t>(label[static_cast<std::size_t>(p)])]
                              [static_cast<std::size_t>(label[static_cast<std::size_t>(q)])]);
            match[static_cast<std::size_t>(p)] = -1;
            match[static_cast<std::size_t>(q)] = -1;
        }
    };
    recurse(recurse, 0, rational(1));
    return out;
}

// Exact Bernoulli numbers from the defining recurrence
// sum_{j=0}^{m} binom(m+1, j) B_j = 0, B_0 = 1.
inline rational bernoulli_number(unsigned m) {
    std::vector<rational> b(m + 1);
    for (unsigned k = 0; k <= m; ++k) {
        if (k == 0) {
            b[0] = rational(1);
            continue;
        }
        rational acc(0);
        bigint binom(1); // binom(k+1, j), starting at j = 0
        for (unsigned j = 0; j < k; ++j) {
            acc += rational(binom) * b[j];
            binom = binom * static_cast<long>(k + 1 - j) / static_cast<long>(j + 1);
        }
        b[k] = -acc / rational(binom); // binom(k+1, k) = k+1
    }
    return b[m];
}

// Genus h >= 2 free energy of any Gaussian model, derived by Euler-Maclaurin
// summation. log prod_{k<=N} k! contains sum_{k<N} (N-k) log k, whose only
// N^(2-2h) content is the endpoint term
//   B_{2h}/(2h)! * d^{2h-1}/dx^{2h-1} [(N-x) log x] at x = N
//   = B_{2h} (2h-1) (2h-3)! / (2h)! * N^(2-2h);
// everything else in log Z is analytic in N. With hbar = T/N this gives
// F_h = gaussian_free_energy_coefficient(h) * T^(2-2h).
inline rational gaussian_free_energy_coefficient(int h) {
    if (h < 2) throw unsupported_order_error("the Euler-Maclaurin tail starts at genus 2");
    auto factorial = [](int m) {
        bigint acc(1);
        for (int i = 2; i <= m; ++i) acc *= i;
        return rational(acc);
    };
    return bernoulli_number(static_cast<unsigned>(2 * h)) * rational(2 * h - 1) *
           factorial(2 * h - 3) / factorial(2 * h);
}

} // namespace specrec
