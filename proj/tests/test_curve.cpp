// SPDX-License-Identifier: MIT
// Copyright (c) 2026 the specrec authors

#include <doctest.h>

#include <specrec/spectral_curve.hpp>

using namespace specrec;

namespace {

using RF = rational_function<rational>;
using P = polynomial<rational>;

P poly(std::vector<rational> c) { return P(std::move(c)); }

// x = z + 1/z, y = 2z + 1/z: the spectral curve of the quadratic two-matrix
// model reduced to its first matrix, with coupling 1 and temperature 1.
spectral_curve<rational> gue_reduction() {
    RF x(poly({1, 0, 1}), poly({0, 1}));
    RF y(poly({1, 0, 2}), poly({0, 1}));
    return spectral_curve<rational>(x, y, rational(1));
}

// x = z + 1/z, y = z^2/2 - 7z - 36/z: a cubic-quadratic model whose swap is
// also rational (branch points of y(1/z) at 1/3, 1/6, -1/2).
spectral_curve<rational> cubic_quadratic() {
    RF x(poly({1, 0, 1}), poly({0, 1}));
    RF y(poly({-36, 0, -7, rational(1) / 2}), poly({0, 1}));
    return spectral_curve<rational>(x, y, rational(1));
}

} // namespace

TEST_CASE("branch points of the reduced quadratic curve") {
    auto curve = gue_reduction();
    REQUIRE(curve.branch_points().size() == 2);
    CHECK(curve.branch_points()[0] == rational(-1));
    CHECK(curve.branch_points()[1] == rational(1));
    CHECK(curve.x_degree() == 2);
}

TEST_CASE("local involution matches its closed form") {
    // On x = z + 1/z the deck transformation is global: z -> 1/z. At the
    // branch point a = 1 that reads sigma(s) = 1/(1+s) - 1 = -s + s^2 - ...
    auto curve = gue_reduction();
    auto chart = curve.chart(1, 12);
    REQUIRE(chart->a == rational(1));
    CHECK(chart->x_at_a == rational(2));
    for (int k = 1; k < 12; ++k) {
        rational expected = (k % 2 == 0) ? rational(1) : rational(-1);
        CHECK(chart->sigma.coeff(k) == expected);
    }
    // y(z) - y(1/z) = z - 1/z at z = 1+s gives (2s + s^2)/(1+s).
    CHECK(chart->y_delta.valuation() == 1);
    CHECK(chart->y_delta.coeff(1) == rational(2));
    CHECK(chart->y_delta.coeff(2) == rational(-1));
    CHECK(chart->y_delta.coeff(3) == rational(1));
    // dx = (1 - 1/z^2)dz has a simple zero: x_shift = s^2/(1+s).
    CHECK(chart->x_shift.valuation() == 2);
    CHECK(chart->x_shift.coeff(2) == rational(1));
    CHECK(chart->x_shift.coeff(3) == rational(-1));
    CHECK(chart->dx_shift.valuation() == 1);
    CHECK(chart->dx_shift.coeff(1) == rational(2));
}

TEST_CASE("involution is a series involution on an asymmetric curve") {
    // x = z + 7/z + 3/z^2 has branch points at the roots of z^3 - 7z - 6,
    // namely -2, -1, 3. sigma composed with itself must be the identity.
    RF x(poly({3, 7, 0, 1}), poly({0, 0, 1}));
    RF y(poly({0, 1}));
    spectral_curve<rational> curve(x, y, rational(1));
    REQUIRE(curve.branch_points().size() == 3);
    CHECK(curve.branch_points()[0] == rational(-2));
    CHECK(curve.branch_points()[1] == rational(-1));
    CHECK(curve.branch_points()[2] == rational(3));

    for (std::size_t i = 0; i < 3; ++i) {
        auto chart = curve.chart(i, 10);
        auto twice = chart->sigma.compose(chart->sigma);
        CHECK(twice.coeff(1) == rational(1));
        for (int k = 2; k < 8; ++k) CHECK(twice.coeff(k) == rational(0));
        // x(a + sigma(s)) = x(a + s): check through the stored expansion.
        auto xs_sigma = chart->x_shift.compose(chart->sigma);
        for (int k = 2; k < 8; ++k) CHECK(xs_sigma.coeff(k) == chart->x_shift.coeff(k));
    }
}

TEST_CASE("sheet enumeration away from and at critical values") {
    auto curve = gue_reduction();
    auto sheets = curve.sheets_over(rational(5) / 2);
    REQUIRE(sheets.size() == 2);
    CHECK(sheets[0] == rational(1) / 2);
    CHECK(sheets[1] == rational(2));
    // x = 2 is the critical value at the branch point z = 1.
    CHECK_THROWS_AS(curve.sheets_over(rational(2)), branch_value_error);
    // x = 3 pulls back to z^2 - 3z + 1, whose roots are irrational.
    CHECK_THROWS_AS(curve.sheets_over(rational(3)), unsplittable_denominator_error);
}

TEST_CASE("curve validation rejects degenerate inputs") {
    RF y_ok(poly({0, 0, 1})); // z^2

    // x' = (z-1)^2: a double zero of dx.
    RF x_dbl(poly({0, 1, -1, rational(1) / 3}));
    CHECK_THROWS_AS(spectral_curve<rational>(x_dbl, RF(poly({0, 1})), rational(1)),
                    degenerate_branch_point_error);

    // x = z^2 is fine but y = z^3 has dy = 0 at the branch point z = 0.
    RF x_sq(poly({0, 0, 1}));
    CHECK_THROWS_AS(spectral_curve<rational>(x_sq, RF(poly({0, 0, 0, 1})), rational(1)),
                    colliding_branch_points_error);

    // y with a pole at the branch point z = 0.
    RF y_pole(poly({1}), poly({0, 1}));
    CHECK_THROWS_AS(spectral_curve<rational>(x_sq, y_pole, rational(1)),
                    degenerate_curve_error);

    // x = z has no branch points at all.
    CHECK_THROWS_AS(spectral_curve<rational>(RF(poly({0, 1})), y_ok, rational(1)),
                    degenerate_curve_error);

    // x = z + 1/z + 1/z^2: dx vanishes at the roots of z^3 - z - 2, none of
    // which are rational.
    RF x_irr(poly({1, 1, 0, 1}), poly({0, 0, 1}));
    CHECK_THROWS_AS(spectral_curve<rational>(x_irr, y_ok, rational(1)),
                    unsplittable_denominator_error);
}

TEST_CASE("swapping the roles of the matrices keeps a valid curve") {
    auto curve = cubic_quadratic();
    REQUIRE(curve.branch_points().size() == 2);

    auto swapped = curve.swap_xy();
    REQUIRE(swapped.branch_points().size() == 3);
    CHECK(swapped.branch_points()[0] == rational(-1) / 2);
    CHECK(swapped.branch_points()[1] == rational(1) / 6);
    CHECK(swapped.branch_points()[2] == rational(1) / 3);
    CHECK(swapped.kappa() == curve.kappa());
    // Swap twice: back to the original functions.
    auto back = swapped.swap_xy();
    CHECK(back.x() == curve.x());
    CHECK(back.y() == curve.y());
}

TEST_CASE("float backend reproduces the exact charts") {
    set_float_precision_bits(256);
    using PF = polynomial<bigfloat>;
    using RFF = rational_function<bigfloat>;
    RFF x(PF(std::vector<bigfloat>{bigfloat(1), bigfloat(0), bigfloat(1)}),
          PF(std::vector<bigfloat>{bigfloat(0), bigfloat(1)}));
    RFF y(PF(std::vector<bigfloat>{bigfloat(1), bigfloat(0), bigfloat(2)}),
          PF(std::vector<bigfloat>{bigfloat(0), bigfloat(1)}));
    spectral_curve<bigfloat> curve(x, y, bigfloat(1));
    REQUIRE(curve.branch_points().size() == 2);
    CHECK(field_traits<bigfloat>::approx_equal(curve.branch_points()[0], bigfloat(-1)));
    CHECK(field_traits<bigfloat>::approx_equal(curve.branch_points()[1], bigfloat(1)));

    auto chart = curve.chart(1, 10);
    CHECK(chart->x_shift.valuation() == 2);
    CHECK(chart->y_delta.valuation() == 1);
    for (int k = 1; k < 8; ++k) {
        bigfloat expected = (k % 2 == 0) ? bigfloat(1) : bigfloat(-1);
        CHECK(field_traits<bigfloat>::approx_equal(chart->sigma.coeff(k), expected));
    }

    // A double pole of x contributes a spurious zero to the unreduced
    // numerator of x'; it must not be reported as a branch point.
    RFF x2(PF(std::vector<bigfloat>{bigfloat(3), bigfloat(7), bigfloat(0), bigfloat(1)}),
           PF(std::vector<bigfloat>{bigfloat(0), bigfloat(0), bigfloat(1)}));
    spectral_curve<bigfloat> curve2(x2, RFF(PF(std::vector<bigfloat>{bigfloat(0), bigfloat(1)})),
                                    bigfloat(1));
    CHECK(curve2.branch_points().size() == 3);
}

TEST_CASE("dual coefficients lift branch points exactly") {
    using D = dual<rational>;
    using PD = polynomial<D>;
    using RFD = rational_function<D>;
    // x = z + (1+eps)/z: branch points at +-sqrt(1+eps) = +-(1 + eps/2).
    RFD x(PD(std::vector<D>{D(rational(1), rational(1)), D(rational(0)), D(rational(1))}),
          PD(std::vector<D>{D(rational(0)), D(rational(1))}));
    RFD y(PD(std::vector<D>{D(rational(1)), D(rational(0)), D(rational(2))}),
          PD(std::vector<D>{D(rational(0)), D(rational(1))}));
    spectral_curve<D> curve(x, y, D(rational(1)));
    REQUIRE(curve.branch_points().size() == 2);
    CHECK(curve.branch_points()[1].base() == rational(1));
    CHECK(curve.branch_points()[1].eps() == rational(1) / 2);
    CHECK(curve.branch_points()[0].base() == rational(-1));
    CHECK(curve.branch_points()[0].eps() == rational(-1) / 2);
    // The chart must see an exact double zero of x - x(a) at the lifted point.
    auto chart = curve.chart(1, 6);
    CHECK(chart->x_shift.valuation() == 2);
}

TEST_CASE("injected branch points are validated and power the chart") {
    // Scalar field Q(q): the curve x = z + 1/z lifted, with its branch
    // points supplied as constants.
    using Q = rational_function<rational>;
    using PQ = polynomial<Q>;
    using RFQ = rational_function<Q>;
    auto c = [](long n) { return Q(rational(n)); };
    RFQ x(PQ(std::vector<Q>{c(1), c(0), c(1)}), PQ(std::vector<Q>{c(0), c(1)}));
    RFQ y(PQ(std::vector<Q>{c(1), c(0), c(2)}), PQ(std::vector<Q>{c(0), c(1)}));
    spectral_curve<Q> curve(x, y, c(1), {c(-1), c(1)});
    auto chart = curve.chart(1, 6);
    CHECK(chart->sigma.coeff(1) == c(-1));
    CHECK(chart->sigma.coeff(2) == c(1));
    CHECK(chart->y_delta.coeff(1) == c(2));

    // A point that is not a zero of dx is refused.
    CHECK_THROWS_AS(spectral_curve<Q>(x, y, c(1), {c(-1), c(2)}), internal_error);
}
