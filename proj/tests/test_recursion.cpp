// SPDX-License-Identifier: MIT
// Copyright (c) 2026 the specrec authors

#include <doctest.h>

#include <memory>
#include <vector>

#include <specrec/curve_builder.hpp>
#include <specrec/recursion.hpp>

using namespace specrec;

namespace {

using rf = rational_function<rational>;
using poly = polynomial<rational>;

rf make_rf(std::vector<rational> num, std::vector<rational> den) {
    return rf(poly(std::move(num)), poly(std::move(den)));
}

// x = z + 1/z, y = 2z + 1/z: couplings t2 = 2, tt2 = 1, kappa = 1, T = 1.
// Integrating out the second matrix leaves the one-matrix Gaussian ensemble
// with unit quadratic coupling, so its correlators are classical.
std::shared_ptr<spectral_curve<rational>> gue_reduction() {
    return std::make_shared<spectral_curve<rational>>(
        make_rf({1, 0, 1}, {0, 1}), make_rf({1, 0, 2}, {0, 1}), rational(1));
}

// x = z + 1/z, y = z^2/2 - 7z - 36/z: a cubic-quadratic model.
std::shared_ptr<spectral_curve<rational>> cubic_quadratic() {
    return std::make_shared<spectral_curve<rational>>(
        make_rf({1, 0, 1}, {0, 1}), make_rf({-36, 0, -7, rational(1) / 2}, {0, 1}),
        rational(1));
}

// W^{(0)}_3 for the quadratic model above, from the residue formula worked
// out in closed form: one half times the difference of the two products of
// double poles at the branch points +1 and -1.
rational w30_closed(const rational& p1, const rational& p2, const rational& p3) {
    auto sq_inv = [](const rational& v) { return rational(1) / (v * v); };
    rational plus = sq_inv(p1 - 1) * sq_inv(p2 - 1) * sq_inv(p3 - 1);
    rational minus = sq_inv(p1 + 1) * sq_inv(p2 + 1) * sq_inv(p3 + 1);
    return (plus - minus) / 2;
}

rational ipow(const rational& b, int e) {
    rational acc(1);
    for (int i = 0; i < e; ++i) acc = acc * b;
    return acc;
}

rational binom(int n, int k) {
    if (k < 0 || k > n) return rational(0);
    rational acc(1);
    for (int i = 1; i <= k; ++i) acc = acc * rational(n - k + i) / rational(i);
    return acc;
}

// Coefficient of z^{-m} in the expansion of a polar part at infinity:
// (z - b)^{-j} contributes binom(m-1, j-1) b^{m-j}.
rational coeff_at_infinity(const polar_part<rational>& pp, int m) {
    rational acc(0);
    for (std::size_t b = 0; b < pp.centers.size(); ++b)
        for (std::size_t t = 0; t < pp.coeff[b].size(); ++t) {
            const int j = static_cast<int>(t) + 2;
            if (m < j) continue;
            acc += pp.coeff[b][t] * binom(m - 1, j - 1) * ipow(pp.centers[b], m - j);
        }
    return acc;
}

} // namespace

TEST_CASE("genus-zero three-point function matches its closed form") {
    recursion_engine<rational> eng(gue_reduction());

    const rational p1(2), p2(3), p3(5);
    CHECK(eng.w_value(0, {p1, p2, p3}) == w30_closed(p1, p2, p3));
    CHECK(eng.w_value(0, {rational(7), rational(-3), rational(1) / 2}) ==
          w30_closed(rational(7), rational(-3), rational(1) / 2));

    // the full decomposition in the first variable: a single double pole at
    // each branch point
    auto pp = eng.w_polar(0, {p2, p3});
    REQUIRE(pp.centers == std::vector<rational>{rational(-1), rational(1)});
    CHECK(pp.coeff[0].size() == 1);
    CHECK(pp.coeff[1].size() == 1);
    CHECK(pp.coefficient(1, 2) == rational(1) / 128);
    CHECK(pp.coefficient(0, 2) == -rational(1) / 1152);
}

TEST_CASE("correlators are symmetric in their points") {
    recursion_engine<rational> eng(gue_reduction());

    const rational a(2), b(3), c(5), d(7);
    const rational w3 = eng.w_value(0, {a, b, c});
    CHECK(eng.w_value(0, {b, a, c}) == w3);
    CHECK(eng.w_value(0, {c, b, a}) == w3);

    const rational w4 = eng.w_value(0, {a, b, c, d});
    CHECK(eng.w_value(0, {d, c, b, a}) == w4);
    CHECK(eng.w_value(0, {b, d, a, c}) == w4);
    CHECK(w4 != rational(0));

    CHECK(eng.w_value(1, {a, d}) == eng.w_value(1, {d, a}));
}

TEST_CASE("genus-one one-point function matches its closed form") {
    recursion_engine<rational> eng(gue_reduction());

    // z^3 / (z^2 - 1)^4 expanded about each branch point
    auto pp = eng.w_polar(1, {});
    REQUIRE(pp.centers.size() == 2);
    CHECK(pp.coeff[1].size() == 3);
    CHECK(pp.coefficient(1, 2) == -rational(1) / 32);
    CHECK(pp.coefficient(1, 3) == rational(1) / 16);
    CHECK(pp.coefficient(1, 4) == rational(1) / 16);
    CHECK(pp.coeff[0].size() == 3);
    CHECK(pp.coefficient(0, 2) == rational(1) / 32);
    CHECK(pp.coefficient(0, 3) == rational(1) / 16);
    CHECK(pp.coefficient(0, 4) == -rational(1) / 16);

    CHECK(eng.w_value(1, {rational(3)}) == rational(27) / 4096);

    // expansion at infinity carries the genus-one moments of the ensemble
    CHECK(coeff_at_infinity(pp, 2) == rational(0));
    CHECK(coeff_at_infinity(pp, 3) == rational(0));
    CHECK(coeff_at_infinity(pp, 4) == rational(0));
    CHECK(coeff_at_infinity(pp, 5) == rational(1));
    CHECK(coeff_at_infinity(pp, 6) == rational(0));
    CHECK(coeff_at_infinity(pp, 7) == rational(4));
    CHECK(coeff_at_infinity(pp, 9) == rational(10));
}

TEST_CASE("genus-two one-point function carries the genus-two moments") {
    recursion_engine<rational> eng(gue_reduction());
    auto pp = eng.w_polar(2, {});
    for (int m = 2; m <= 8; ++m) CHECK(coeff_at_infinity(pp, m) == rational(0));
    CHECK(coeff_at_infinity(pp, 9) == rational(21));
    CHECK(coeff_at_infinity(pp, 10) == rational(0));
    CHECK(coeff_at_infinity(pp, 11) == rational(273));
}

TEST_CASE("window padding changes no output bit") {
    recursion_engine<rational> tight(gue_reduction());
    recursion_engine<rational> wide(gue_reduction(), 40);

    CHECK(tight.w_value(0, {rational(2), rational(3), rational(5)}) ==
          wide.w_value(0, {rational(2), rational(3), rational(5)}));
    CHECK(tight.w_value(1, {rational(3)}) == wide.w_value(1, {rational(3)}));
    CHECK(tight.w_value(1, {rational(2), rational(7)}) ==
          wide.w_value(1, {rational(2), rational(7)}));
}

TEST_CASE("cubic-quadratic model runs and stays symmetric") {
    recursion_engine<rational> eng(cubic_quadratic());
    const rational a(3), b(5), c(7);
    const rational w3 = eng.w_value(0, {a, b, c});
    CHECK(w3 != rational(0));
    CHECK(eng.w_value(0, {c, a, b}) == w3);
    CHECK(eng.w_value(1, {a, b}) == eng.w_value(1, {b, a}));

    recursion_engine<rational> wide(cubic_quadratic(), 40);
    CHECK(wide.w_value(1, {a}) == eng.w_value(1, {a}));
}

TEST_CASE("built curve with shifted branch points") {
    // T = 4 puts the branch points at -2 and 2, which also forces the sample
    // generator to step over a branch point.
    auto curve = std::make_shared<spectral_curve<rational>>(
        build_curve_from_potentials(poly(std::vector<rational>{0, 2}),
                                    poly(std::vector<rational>{0, 1}), rational(1),
                                    rational(4)));
    REQUIRE(curve->branch_points() == std::vector<rational>{rational(-2), rational(2)});
    recursion_engine<rational> eng(curve);
    const rational w3 = eng.w_value(0, {rational(3), rational(5), rational(7)});
    CHECK(w3 != rational(0));
    CHECK(eng.w_value(0, {rational(5), rational(7), rational(3)}) == w3);
    CHECK(eng.w_value(1, {rational(3), rational(5)}) ==
          eng.w_value(1, {rational(5), rational(3)}));
}

TEST_CASE("unstable and invalid orders are rejected") {
    recursion_engine<rational> eng(gue_reduction());

    // the two unstable cases have explicit values instead of polar data
    CHECK(eng.w_value(0, {rational(2)}) == rational(27) / 8);
    CHECK(eng.w_value(0, {rational(2), rational(5)}) == rational(1) / 9);

    CHECK_THROWS_AS(eng.w_value(0, {}), unsupported_order_error);
    CHECK_THROWS_AS(eng.w_value(-1, {rational(2)}), unsupported_order_error);
    CHECK_THROWS_AS(eng.w_polar(0, {}), unsupported_order_error);
    CHECK_THROWS_AS(eng.w_polar(0, {rational(2)}), unsupported_order_error);
    CHECK_THROWS_AS(eng.w_value(0, {rational(2), rational(2)}), internal_error);
    CHECK_THROWS_AS(eng.w_value(1, {rational(1)}), branch_value_error);
    CHECK_THROWS_AS(eng.w_polar(1, {rational(-1), rational(3)}), branch_value_error);
}

TEST_CASE("unroll counts follow the recursion") {
    CHECK(unroll_term_count(0, 2) == 1);
    CHECK(unroll_term_count(0, 3) == 2);
    CHECK(unroll_term_count(1, 1) == 1);
    CHECK(unroll_term_count(1, 2) == 4);
    CHECK(unroll_term_count(2, 1) == 5);
    CHECK_THROWS_AS(unroll_term_count(0, 1), internal_error);
}

TEST_CASE("symbolic marked point reproduces the closed form as a function") {
    using RF = rational_function<rational>;
    auto c = [](long v) { return RF(rational(v)); };
    RF q(poly(std::vector<rational>{0, 1}), poly(std::vector<rational>{1}));

    auto curve = std::make_shared<spectral_curve<RF>>(
        rational_function<RF>(polynomial<RF>({c(1), c(0), c(1)}), polynomial<RF>({c(0), c(1)})),
        rational_function<RF>(polynomial<RF>({c(1), c(0), c(2)}), polynomial<RF>({c(0), c(1)})),
        c(1), std::vector<RF>{c(-1), c(1)});
    recursion_engine<RF> eng(curve);

    RF got = eng.w_value(0, {q, c(3), c(5)});
    RF one = c(1);
    RF plus = one / ((q - c(1)) * (q - c(1))) / c(64);
    RF minus = one / ((q + c(1)) * (q + c(1))) / c(576);
    CHECK(got == (plus - minus) / c(2));
}

TEST_CASE("float backend tracks the exact values") {
    using bf = bigfloat;
    set_float_precision_bits(256);
    auto curve = std::make_shared<spectral_curve<bf>>(
        rational_function<bf>(polynomial<bf>(std::vector<bf>{bf(1), bf(0), bf(1)}),
                              polynomial<bf>(std::vector<bf>{bf(0), bf(1)})),
        rational_function<bf>(polynomial<bf>(std::vector<bf>{bf(1), bf(0), bf(2)}),
                              polynomial<bf>(std::vector<bf>{bf(0), bf(1)})),
        bf(1));
    recursion_engine<bf> eng(curve);

    bf w3 = eng.w_value(0, {bf(2), bf(3), bf(5)});
    bf expect = field_traits<bf>::from_rational(w30_closed(rational(2), rational(3), rational(5)));
    CHECK(field_traits<bf>::approx_equal(w3, expect));

    bf w11 = eng.w_value(1, {bf(3)});
    CHECK(field_traits<bf>::approx_equal(w11, bf(27) / bf(4096)));
}

TEST_CASE("dual coefficients ride through the whole recursion") {
    using D = dual<rational>;
    auto d = [](long v) { return D(rational(v)); };
    // quartic direction: V1' = 2X + eps X^3 around the quadratic model
    polynomial<D> v1({d(0), d(2), d(0), D(rational(0), rational(1))});
    polynomial<D> v2({d(0), d(1)});
    auto curve = std::make_shared<spectral_curve<D>>(
        build_curve_from_potentials(v1, v2, d(1), d(1)));
    recursion_engine<D> eng(curve);

    D w3 = eng.w_value(0, {d(2), d(3), d(5)});
    recursion_engine<rational> base_eng(gue_reduction());
    CHECK(w3.base() == base_eng.w_value(0, {rational(2), rational(3), rational(5)}));
    CHECK(w3.eps() != rational(0));

    D w11 = eng.w_value(1, {d(3)});
    CHECK(w11.base() == rational(27) / 4096);
}
