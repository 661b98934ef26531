// SPDX-License-Identifier: MIT
// Copyright (c) 2026 the specrec authors

#include <doctest.h>

#include <specrec/partial_fractions.hpp>
#include <specrec/roots.hpp>

using namespace specrec;

namespace {

polynomial<rational> poly(std::vector<rational> c) { return polynomial<rational>(std::move(c)); }

polynomial<rational> from_roots(const std::vector<std::pair<rational, int>>& roots) {
    polynomial<rational> p(rational(1));
    for (const auto& [r, m] : roots)
        for (int j = 0; j < m; ++j)
            p = p * poly({-r, 1});
    return p;
}

} // namespace

TEST_CASE("rational roots with multiplicities") {
    auto p = from_roots({{rational(1) / 2, 3}, {rational(-3), 2}, {rational(7), 1}});
    auto report = find_rational_roots(p);
    CHECK(report.unresolved == 0);
    REQUIRE(report.roots.size() == 3);
    int found = 0;
    for (const auto& [root, mult] : report.roots) {
        if (root == rational(1) / 2) { CHECK(mult == 3); ++found; }
        if (root == rational(-3)) { CHECK(mult == 2); ++found; }
        if (root == rational(7)) { CHECK(mult == 1); ++found; }
    }
    CHECK(found == 3);
}

TEST_CASE("partial preimage polynomial resolves only its rational root") {
    // z^3 - 3z - 970 = (z - 10)(z^2 + 10z + 97); the quadratic has complex
    // roots, which the exact backend reports as unresolved.
    auto p = poly({-970, -3, 0, 1});
    auto report = find_rational_roots(p);
    REQUIRE(report.roots.size() == 1);
    CHECK(report.roots[0].first == rational(10));
    CHECK(report.roots[0].second == 1);
    CHECK(report.unresolved == 2);
}

TEST_CASE("root at the origin and fractional roots") {
    // z^2 (7z - 3)(5z + 2)
    auto p = poly({0, 0, 1}) * poly({-3, 7}) * poly({2, 5});
    auto report = find_rational_roots(p);
    CHECK(report.unresolved == 0);
    REQUIRE(report.roots.size() == 3);
    CHECK(report.roots[0].first == rational(0));
    CHECK(report.roots[0].second == 2);
    bool saw37 = false, saw25 = false;
    for (const auto& [root, mult] : report.roots) {
        if (root == rational(3) / 7) { CHECK(mult == 1); saw37 = true; }
        if (root == rational(-2) / 5) { CHECK(mult == 1); saw25 = true; }
    }
    CHECK(saw37);
    CHECK(saw25);
}

TEST_CASE("linear and irrational cases") {
    auto lin = find_rational_roots(poly({-6, 4}));
    REQUIRE(lin.roots.size() == 1);
    CHECK(lin.roots[0].first == rational(3) / 2);
    CHECK(lin.unresolved == 0);

    auto irr = find_rational_roots(poly({-2, 0, 1}));
    CHECK(irr.roots.empty());
    CHECK(irr.unresolved == 2);

    auto constant = find_rational_roots(poly({5}));
    CHECK(constant.roots.empty());
    CHECK(constant.unresolved == 0);

    CHECK_THROWS_AS(find_rational_roots(polynomial<rational>()), internal_error);
}

TEST_CASE("well separated integer roots of larger degree") {
    std::vector<std::pair<rational, int>> roots;
    for (int k = 1; k <= 12; ++k) roots.emplace_back(rational(k), 1);
    auto report = find_rational_roots(from_roots(roots));
    CHECK(report.unresolved == 0);
    REQUIRE(report.roots.size() == 12);
    rational sum = 0;
    for (const auto& [root, mult] : report.roots) {
        CHECK(mult == 1);
        sum += root;
    }
    CHECK(sum == rational(78));
}

TEST_CASE("float real roots and cluster multiplicities") {
    set_float_precision_bits(256);
    using P = polynomial<bigfloat>;
    auto lin = [](double r) { return P(std::vector<bigfloat>{bigfloat(-r), bigfloat(1)}); };

    auto simple = find_real_roots(lin(1) * lin(2) * lin(-3));
    CHECK(simple.complex_count == 0);
    REQUIRE(simple.roots.size() == 3);
    CHECK(field_traits<bigfloat>::approx_equal(simple.roots[0].first, bigfloat(-3)));
    CHECK(field_traits<bigfloat>::approx_equal(simple.roots[1].first, bigfloat(1)));
    CHECK(field_traits<bigfloat>::approx_equal(simple.roots[2].first, bigfloat(2)));

    auto dbl = find_real_roots(lin(2) * lin(2) * lin(-1));
    REQUIRE(dbl.roots.size() == 2);
    CHECK(dbl.roots[0].second == 1);
    CHECK(dbl.roots[1].second == 2);
    CHECK(field_traits<bigfloat>::approx_equal(dbl.roots[1].first, bigfloat(2)));

    auto complex_pair = find_real_roots(P(std::vector<bigfloat>{bigfloat(1), bigfloat(0), bigfloat(1)}));
    CHECK(complex_pair.roots.empty());
    CHECK(complex_pair.complex_count == 2);
}

TEST_CASE("partial fractions of a proper rational function") {
    // (3z^2 + 1)/((z-1)^2 (z+2)) = (4/3)/(z-1)^2 + (14/9)/(z-1) + (13/9)/(z+2)
    rational_function<rational> f(poly({1, 0, 3}), poly({-1, 1}) * poly({-1, 1}) * poly({2, 1}));
    auto pf = decompose(f);
    CHECK(pf.poly_part.is_zero());
    REQUIRE(pf.blocks.size() == 2);
    for (const auto& block : pf.blocks) {
        if (block.pole == rational(1)) {
            REQUIRE(block.coeffs.size() == 2);
            CHECK(block.coeffs[0] == rational(14) / 9);
            CHECK(block.coeffs[1] == rational(4) / 3);
        } else {
            CHECK(block.pole == rational(-2));
            REQUIRE(block.coeffs.size() == 1);
            CHECK(block.coeffs[0] == rational(13) / 9);
        }
    }
    CHECK(pf.resum() == f);
}

TEST_CASE("partial fractions keep the polynomial part") {
    rational_function<rational> f(poly({1, 0, 0, 1}), poly({-1, 1}));
    auto pf = decompose(f);
    CHECK(pf.poly_part == poly({1, 1, 1}));
    REQUIRE(pf.blocks.size() == 1);
    CHECK(pf.blocks[0].pole == rational(1));
    REQUIRE(pf.blocks[0].coeffs.size() == 1);
    CHECK(pf.blocks[0].coeffs[0] == rational(2));
}

TEST_CASE("unsplittable denominators are refused exactly but not in floats") {
    rational_function<rational> f(poly({1}), poly({-2, 0, 1}));
    CHECK_THROWS_AS(decompose(f), unsplittable_denominator_error);

    set_float_precision_bits(256);
    using P = polynomial<bigfloat>;
    rational_function<bigfloat> g(P(bigfloat(1)),
                                  P(std::vector<bigfloat>{bigfloat(-2), bigfloat(0), bigfloat(1)}));
    auto pf = decompose(g);
    REQUIRE(pf.blocks.size() == 2);
    bigfloat r2 = boost::multiprecision::sqrt(bigfloat(2));
    CHECK(field_traits<bigfloat>::approx_equal(pf.blocks[0].pole, -r2));
    CHECK(field_traits<bigfloat>::approx_equal(pf.blocks[1].pole, r2));
    // 1/(z^2-2) = (1/(2 sqrt 2))/(z - sqrt 2) - (1/(2 sqrt 2))/(z + sqrt 2)
    CHECK(field_traits<bigfloat>::approx_equal(pf.blocks[1].coeffs[0], 1 / (2 * r2)));
    CHECK(field_traits<bigfloat>::approx_equal(pf.blocks[0].coeffs[0], -1 / (2 * r2)));
}

TEST_CASE("declared poles must cover the denominator") {
    rational_function<rational> f(poly({1}), poly({-1, 1}) * poly({1, 1}));
    std::vector<std::pair<rational, int>> wrong{{rational(1), 1}};
    CHECK_THROWS_AS(decompose_at(f, wrong), internal_error);
}
