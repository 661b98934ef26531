// SPDX-License-Identifier: MIT
// Copyright (c) 2026 the specrec authors

#include <doctest.h>

#include <specrec/wick.hpp>

using namespace specrec;

namespace {

using genus_map = std::map<int, rational>;

const gaussian_couplings gue{rational(1), rational(1), rational(0)};
const gaussian_couplings mixed{rational(2), rational(1), rational(1)}; // det = 1

std::vector<int> word(int label, int count) { return std::vector<int>(static_cast<std::size_t>(count), label); }

} // namespace

TEST_CASE("single-trace moments of one Gaussian matrix") {
    auto m4 = pair_correlator({word(0, 4)}, gue);
    CHECK(m4.pairs == 2);
    CHECK(m4.full_by_n_power == genus_map{{1, 2}, {-1, 1}});
    CHECK(m4.connected_by_genus == genus_map{{0, 2}, {1, 1}});
    // hbar^2 (2N^3 + N) at T = 3, N = 7.
    CHECK(m4.full_eval(rational(3), rational(7)) == rational(891) / 7);

    auto m6 = pair_correlator({word(0, 6)}, gue);
    CHECK(m6.connected_by_genus == genus_map{{0, 5}, {1, 10}});
    auto m8 = pair_correlator({word(0, 8)}, gue);
    CHECK(m8.connected_by_genus == genus_map{{0, 14}, {1, 70}, {2, 21}});
    auto m10 = pair_correlator({word(0, 10)}, gue);
    CHECK(m10.connected_by_genus == genus_map{{0, 42}, {1, 420}, {2, 483}});

    CHECK(pair_correlator({word(0, 3)}, gue).full_by_n_power.empty());
    CHECK(pair_correlator({word(0, 3)}, gue).connected_by_genus.empty());
}

TEST_CASE("mixed-trace moments see the propagator matrix") {
    auto tr12 = pair_correlator({{0, 1}}, mixed);
    CHECK(tr12.full_by_n_power == genus_map{{1, 1}}); // T N kappa/det

    gaussian_couplings c{rational(3), rational(5), rational(2)}; // det = 11
    CHECK(pair_correlator({{0, 1}}, c).full_by_n_power == genus_map{{1, rational(2) / 11}});
    CHECK(pair_correlator({{0, 0}}, c).full_by_n_power == genus_map{{1, rational(5) / 11}});
    CHECK(pair_correlator({{1, 1}}, c).full_by_n_power == genus_map{{1, rational(3) / 11}});

    auto alternating = pair_correlator({{0, 1, 0, 1}}, mixed);
    CHECK(alternating.full_by_n_power == genus_map{{1, 2}, {-1, 2}});
    auto blocks = pair_correlator({{0, 0, 1, 1}}, mixed);
    CHECK(blocks.full_by_n_power == genus_map{{1, 3}, {-1, 1}});
}

TEST_CASE("two-trace correlators split into connected and factorized parts") {
    gaussian_couplings c{rational(3), rational(5), rational(2)};
    auto cross = pair_correlator({{0}, {1}}, c);
    CHECK(cross.traces == 2);
    CHECK(cross.connected_by_genus == genus_map{{0, rational(2) / 11}}); // T kappa/det

    auto var = pair_correlator({word(0, 2), word(0, 2)}, gue);
    CHECK(var.full_by_n_power == genus_map{{2, 1}, {0, 2}});
    CHECK(var.connected_by_genus == genus_map{{0, 2}}); // var(tr M^2) = 2 T^2

    // d/dt <tr M^4> = -(N/2T) <tr M^4 tr M^2>_c gives 8 + 4/N^2 at t = 1.
    auto ins = pair_correlator({word(0, 4), word(0, 2)}, gue);
    CHECK(ins.connected_by_genus == genus_map{{0, 8}, {1, 4}});
}

TEST_CASE("oracle guardrails") {
    CHECK_THROWS_AS(pair_correlator({word(0, 18)}, gue), unsupported_order_error);
    gaussian_couplings degenerate{rational(1), rational(1), rational(1)};
    CHECK_THROWS_AS(pair_correlator({{0, 1}}, degenerate), no_genus_zero_solution_error);
}

TEST_CASE("bernoulli numbers") {
    CHECK(bernoulli_number(0) == rational(1));
    CHECK(bernoulli_number(1) == -rational(1) / 2);
    CHECK(bernoulli_number(2) == rational(1) / 6);
    CHECK(bernoulli_number(3) == rational(0));
    CHECK(bernoulli_number(4) == -rational(1) / 30);
    CHECK(bernoulli_number(12) == -rational(691) / 2730);
}

TEST_CASE("gaussian free energies from the euler-maclaurin tail") {
    CHECK(gaussian_free_energy_coefficient(2) == -rational(1) / 240);
    CHECK(gaussian_free_energy_coefficient(3) == rational(1) / 1008);
    CHECK(gaussian_free_energy_coefficient(4) == -rational(1) / 1440);
    CHECK_THROWS_AS(gaussian_free_energy_coefficient(1), unsupported_order_error);
}
