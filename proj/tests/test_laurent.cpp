// SPDX-License-Identifier: MIT
// Copyright (c) 2026 the specrec authors

#include <doctest.h>

#include <specrec/laurent_series.hpp>

using namespace specrec;

namespace {
using ls = laurent_series<rational>;

polynomial<rational> poly(std::initializer_list<long> cs) {
    std::vector<rational> v;
    for (long c : cs) v.emplace_back(c);
    return polynomial<rational>(std::move(v));
}

rational binom(const rational& top, int k) {
    rational r = 1;
    for (int i = 0; i < k; ++i) r *= (top - i) / rational(i + 1);
    return r;
}
} // namespace

TEST_CASE("local expansion of rational functions") {
    // 1/(z - 2) around z = 2: exactly s^(-1).
    rational_function<rational> f(poly({1}), poly({-2, 1}));
    auto s = expand_at(f, rational(2), 5);
    CHECK(s.valuation() == -1);
    CHECK(s.residue() == rational(1));
    CHECK(s.coeff(0) == rational(0));
    CHECK(s.coeff(3) == rational(0));

    // 3z/(z - 2)^2 around z = 2: 6/s^2 + 3/s.
    rational_function<rational> g(poly({0, 3}), poly({4, -4, 1}));
    auto t = expand_at(g, rational(2), 4);
    CHECK(t.coeff(-2) == rational(6));
    CHECK(t.residue() == rational(3));
    CHECK(t.coeff(0) == rational(0));

    // Geometric series: 1/(1 - z) at 0.
    rational_function<rational> h(poly({1}), poly({1, -1}));
    auto u = expand_at(h, rational(0), 6);
    for (int n = 0; n < 6; ++n) CHECK(u.coeff(n) == rational(1));
}

TEST_CASE("expansion at infinity") {
    // (z^2 + 1)/(z - 2) = z + 2 + 5/z + 10/z^2 + ... in w = 1/z.
    rational_function<rational> f(poly({1, 0, 1}), poly({-2, 1}));
    auto s = expand_at_infinity(f, 4);
    CHECK(s.coeff(-1) == rational(1));
    CHECK(s.coeff(0) == rational(2));
    CHECK(s.coeff(1) == rational(5));
    CHECK(s.coeff(2) == rational(10));
}

TEST_CASE("reliable order tracking") {
    rational_function<rational> f(poly({1}), poly({1, -1})); // 1/(1-z)
    auto a = expand_at(f, rational(0), 5);
    auto b = expand_at(f, rational(0), 9);
    auto p = a * b;
    CHECK(p.lim() == 5);
    CHECK(p.coeff(4) == rational(5)); // (1-z)^{-2} coefficients are n+1
    CHECK_THROWS_AS(p.coeff(5), internal_error);

    auto inv = a.inverse();
    CHECK(inv.coeff(0) == rational(1));
    CHECK(inv.coeff(1) == rational(-1));
    CHECK(inv.coeff(2) == rational(0));

    // Inverting about a pole costs window on both sides.
    auto q = expand_at(rational_function<rational>(poly({0, 0, 1})), rational(0), 6); // z^2
    CHECK(q.inverse().valuation() == -2);
    CHECK(q.inverse().lim() == 2);
}

TEST_CASE("derivative, antiderivative, residue guard") {
    auto s = ls::monomial(rational(3), -2, 5) + ls::monomial(rational(7), 1, 5);
    auto d = s.derivative();
    CHECK(d.coeff(-3) == rational(-6));
    CHECK(d.coeff(0) == rational(7));
    auto back = d.antiderivative();
    CHECK(back.coeff(-2) == rational(3));
    CHECK(back.coeff(1) == rational(7));

    auto bad = ls::monomial(rational(1), -1, 3);
    CHECK_THROWS_AS(bad.antiderivative(), internal_error);
}

TEST_CASE("composition") {
    // f(s) = 1/s, g(s) = s + s^2: f(g) = 1/s - 1 + s - s^2 + ...
    auto f = ls::monomial(rational(1), -1, 6);
    auto g = ls::monomial(rational(1), 1, 8) + ls::monomial(rational(1), 2, 8);
    auto c = f.compose(g);
    CHECK(c.coeff(-1) == rational(1));
    CHECK(c.coeff(0) == rational(-1));
    CHECK(c.coeff(1) == rational(1));
    CHECK(c.coeff(2) == rational(-1));
}

TEST_CASE("reversion matches the Lagrange inversion oracle to 30 terms") {
    // g(z) = z + z^3. Lagrange: [z^n] g^{-1} = (1/n) [w^{n-1}] (w/g(w))^n,
    // and (w/g)^n = (1+w^2)^{-n}, so for n = 2m+1 the coefficient is
    // binom(-n, m)/n and even coefficients vanish.
    const int L = 31;
    auto g = ls::monomial(rational(1), 1, L) + ls::monomial(rational(1), 3, L);
    auto t = g.reverse();

    for (int n = 1; n < L; ++n) {
        rational expected = 0;
        if (n % 2 == 1) {
            int m = (n - 1) / 2;
            expected = binom(rational(-n), m) / n;
        }
        CAPTURE(n);
        CHECK(t.coeff(n) == expected);
    }

    // Composition round-trips.
    auto round = g.compose(t);
    CHECK(round.coeff(1) == rational(1));
    for (int n = 2; n < round.lim(); ++n) CHECK(round.coeff(n) == rational(0));
}

TEST_CASE("unit square root") {
    // (1+s)^2 = 1 + 2s + s^2.
    auto f = ls::monomial(rational(1), 0, 8) + ls::monomial(rational(2), 1, 8) +
             ls::monomial(rational(1), 2, 8);
    auto r = f.sqrt_unit();
    CHECK(r.coeff(0) == rational(1));
    CHECK(r.coeff(1) == rational(1));
    for (int n = 2; n < 8; ++n) CHECK(r.coeff(n) == rational(0));

    auto h = expand_at(rational_function<rational>(poly({1, 1})), rational(0), 10); // 1+s
    auto rh = h.sqrt_unit();
    CHECK((rh * rh).coeff(1) == rational(1));
    CHECK((rh * rh).coeff(5) == rational(0));
    CHECK(rh.coeff(2) == rational(-1) / 8);
}

TEST_CASE("series with polynomial coefficients track an external parameter") {
    using pc = polynomial<rational>;
    using lsp = laurent_series<pc>;
    // (u + u^2 s) * (1 - s) where u is the external parameter.
    auto a = lsp::monomial(pc::variable(), 0, 4) +
             lsp::monomial(pc::variable() * pc::variable(), 1, 4);
    auto b = lsp::monomial(pc(rational(1)), 0, 4) - lsp::monomial(pc(rational(1)), 1, 4);
    auto p = a * b;
    CHECK(p.coeff(0) == pc::variable());
    CHECK(p.coeff(1) == pc::variable() * pc::variable() - pc::variable());
}

TEST_CASE("float instantiation behaves") {
    set_float_precision_bits(128);
    using lf = laurent_series<bigfloat>;
    polynomial<bigfloat> den({std::vector<bigfloat>{bigfloat(1), bigfloat(1)}});
    rational_function<bigfloat> f(polynomial<bigfloat>(bigfloat(1)), den); // 1/(1+z)
    auto s = expand_at(f, bigfloat(0), 5);
    CHECK(field_traits<bigfloat>::approx_equal(s.coeff(3), bigfloat(-1)));
    auto one = s * s.inverse();
    CHECK(field_traits<bigfloat>::approx_equal(one.coeff(0), bigfloat(1)));
    CHECK(boost::multiprecision::abs(one.coeff(1)) < field_traits<bigfloat>::tolerance());
    (void)lf::zero_to(3);
}
