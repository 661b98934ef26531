// SPDX-License-Identifier: MIT
// Copyright (c) 2026 the specrec authors

#pragma once

#include <algorithm>
#include <memory>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "laurent_series.hpp"
#include "polynomial.hpp"
#include "rational_function.hpp"
#include "roots.hpp"
#include "scalar.hpp"

namespace specrec {

// A genus-zero spectral curve: two rational functions x(z), y(z) on the
// Riemann sphere plus the coupling kappa of the underlying two-matrix model.
// All engine quantities live on this object: branch points are the finite
// simple zeros of dx, and every residue the recursion takes is computed in a
// local chart s = z - a around one of them.
//
// The temperature T and the potentials are not stored: for a curve of
// two-matrix shape they are derivable from the asymptotics (see
// curve_builder.hpp), and storing them independently would only create an
// inconsistency to police.

// Root finding for branch points, per scalar backend. `missing` counts roots
// (with multiplicity) that exist over the algebraic closure but not over F.
template <class F>
struct curve_root_result {
    std::vector<std::pair<F, int>> roots;
    int missing = 0;
};

template <class F>
struct curve_root_finder {
    static curve_root_result<F> find(const polynomial<F>&) {
        throw internal_error("no root finder for this scalar field; supply branch points");
    }
};

template <>
struct curve_root_finder<rational> {
    static curve_root_result<rational> find(const polynomial<rational>& p) {
        auto report = find_rational_roots(p);
        curve_root_result<rational> out;
        out.roots = std::move(report.roots);
        out.missing = report.unresolved;
        std::sort(out.roots.begin(), out.roots.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        return out;
    }
};

template <>
struct curve_root_finder<bigfloat> {
    static curve_root_result<bigfloat> find(const polynomial<bigfloat>& p) {
        auto report = find_real_roots(p);
        curve_root_result<bigfloat> out;
        out.roots = std::move(report.roots);
        out.missing = report.complex_count;
        return out; // already sorted
    }
};

// Dual-number coefficients: find the base roots, then lift each simple root
// by one Newton step in dual arithmetic, which is exact because eps^2 = 0.
template <class B>
struct curve_root_finder<dual<B>> {
    static curve_root_result<dual<B>> find(const polynomial<dual<B>>& p) {
        std::vector<B> base_coeffs;
        base_coeffs.reserve(static_cast<std::size_t>(p.degree()) + 1);
        for (int k = 0; k <= p.degree(); ++k) base_coeffs.push_back(p.coeff(k).base());
        auto base = curve_root_finder<B>::find(polynomial<B>(std::move(base_coeffs)));
        curve_root_result<dual<B>> out;
        out.missing = base.missing;
        polynomial<dual<B>> dp = p.derivative();
        for (const auto& [r, m] : base.roots) {
            dual<B> a(r);
            if (m == 1) a = a - p.eval(a) / dp.eval(a);
            out.roots.emplace_back(a, m);
        }
        return out;
    }
};

// Everything the recursion needs locally at one branch point, as series in
// the local coordinate s = z - a, reliable at least to order `order`:
//   sigma     the deck involution, sigma(s) = -s + O(s^2), x(a+sigma(s)) = x(a+s)
//   x_shift   x(a+s) - x(a), valuation exactly 2
//   y_shift   y(a+s)
//   y_delta   y(a+s) - y(a+sigma(s)), valuation exactly 1
//   dx_shift  x'(a+s), valuation exactly 1
// The leading structural zeros of x_shift and sigma are enforced by
// construction, never by floating-point cancellation, so the float backend
// sees the same pole orders the exact one does.
template <class F>
struct branch_chart {
    F a;
    F x_at_a;
    laurent_series<F> sigma;
    laurent_series<F> x_shift;
    laurent_series<F> y_shift;
    laurent_series<F> y_delta;
    laurent_series<F> dx_shift;
    int order = 0;
};

template <class F>
class spectral_curve {
public:
    spectral_curve(rational_function<F> x, rational_function<F> y, F kappa)
        : m_x(std::move(x)), m_y(std::move(y)), m_kappa(std::move(kappa)),
          m_xp(m_x.derivative()), m_yp(m_y.derivative()) {
        find_and_validate_branch_points();
        m_charts.assign(m_branch_points.size(), nullptr);
    }

    // Constructor for scalar fields without a root finder (for instance the
    // rational-function field used to keep a marked point symbolic): the
    // caller supplies the branch points and they are validated, not trusted.
    spectral_curve(rational_function<F> x, rational_function<F> y, F kappa,
                   std::vector<F> branch_points)
        : m_x(std::move(x)), m_y(std::move(y)), m_kappa(std::move(kappa)),
          m_xp(m_x.derivative()), m_yp(m_y.derivative()),
          m_branch_points(std::move(branch_points)) {
        if (m_branch_points.empty())
            throw degenerate_curve_error("curve has no branch points");
        if (static_cast<int>(m_branch_points.size()) != m_xp.num().degree())
            throw internal_error("supplied branch points do not cover all zeros of dx");
        for (const F& a : m_branch_points) {
            if (!field_traits<F>::is_zero(m_xp.num().eval(a)))
                throw internal_error("supplied branch point is not a zero of dx");
            validate_branch_point(a);
        }
        m_charts.assign(m_branch_points.size(), nullptr);
    }

    const rational_function<F>& x() const { return m_x; }
    const rational_function<F>& y() const { return m_y; }
    const rational_function<F>& x_prime() const { return m_xp; }
    const rational_function<F>& y_prime() const { return m_yp; }
    const F& kappa() const { return m_kappa; }
    const std::vector<F>& branch_points() const { return m_branch_points; }

    // Degree of x as a map to the sphere: the number of sheets.
    int x_degree() const { return std::max(m_x.num().degree(), m_x.den().degree()); }
    int y_degree() const { return std::max(m_y.num().degree(), m_y.den().degree()); }

    // Local chart at branch point #i with all series reliable to at least
    // `order`. Charts are cached and shared between copies of the curve.
    std::shared_ptr<const branch_chart<F>> chart(std::size_t i, int order) const {
        if (i >= m_branch_points.size())
            throw internal_error("branch point index out of range");
        auto current = m_charts[i];
        if (current && current->order >= order) return current;
        auto fresh = std::make_shared<branch_chart<F>>(build_chart(m_branch_points[i], order));
        m_charts[i] = fresh;
        return fresh;
    }

    // All finite preimages of the regular value x0, each on its own sheet.
    std::vector<F> sheets_over(const F& x0) const {
        polynomial<F> p = m_x.num() - x0 * m_x.den();
        if (p.degree() < 1)
            throw degenerate_curve_error("preimage polynomial is constant");
        auto found = curve_root_finder<F>::find(p);
        if (found.missing != 0)
            throw unsplittable_denominator_error(
                "only " + std::to_string(found.roots.size()) + " of " +
                std::to_string(p.degree()) + " preimages exist over the scalar field");
        std::vector<F> sheets;
        for (const auto& [r, m] : found.roots) {
            if (m != 1)
                throw branch_value_error("base point is a critical value of x");
            // A preimage killed by the denominator is a point over infinity.
            if (field_traits<F>::approx_equal(m_x.den().eval(r), field_traits<F>::zero()))
                throw branch_value_error("base point meets a pole of x");
            sheets.push_back(r);
        }
        return sheets;
    }

    // The same model read with the roles of the two matrices exchanged:
    // z -> 1/z maps the x-infinity to the y-infinity, so the swapped curve is
    // (y(1/z), x(1/z)) with the same coupling. Branch points are recomputed.
    spectral_curve swap_xy() const {
        return spectral_curve(m_y.compose_reciprocal(), m_x.compose_reciprocal(), m_kappa);
    }

private:
    void find_and_validate_branch_points() {
        if (m_xp.num().is_zero())
            throw degenerate_curve_error("x(z) is constant");
        auto found = curve_root_finder<F>::find(m_xp.num());
        if (found.missing != 0)
            throw unsplittable_denominator_error(
                std::to_string(found.missing) +
                " zeros of dx are not expressible over the scalar field");
        for (const auto& [a, mult] : found.roots) {
            // Over floats the numerator of x' is not reduced, so a multiple
            // pole of x shows up among its zeros; there x is infinite and the
            // point is not a branch point.
            if (field_traits<F>::approx_equal(m_x.den().eval(a), field_traits<F>::zero()))
                continue;
            if (mult != 1)
                throw degenerate_branch_point_error("dx has a zero of order " +
                                                    std::to_string(mult));
            m_branch_points.push_back(a);
        }
        if (m_branch_points.empty())
            throw degenerate_curve_error("curve has no branch points");
        for (std::size_t i = 0; i + 1 < m_branch_points.size(); ++i)
            if (field_traits<F>::approx_equal(m_branch_points[i], m_branch_points[i + 1]))
                throw colliding_branch_points_error("two branch points coincide numerically");
        for (const F& a : m_branch_points) validate_branch_point(a);
    }

    void validate_branch_point(const F& a) {
        if (field_traits<F>::approx_equal(m_y.den().eval(a), field_traits<F>::zero()))
            throw degenerate_curve_error("y has a pole at a branch point");
        const F zero = field_traits<F>::zero();
        F yp = m_yp.num().eval(a);
        if (field_traits<F>::approx_equal(yp, zero))
            throw colliding_branch_points_error("dy vanishes at a branch point");
        // Simplicity: x''(a) != 0. The exact backend already knows the zero
        // of x' is simple; this re-checks it through the derivative so the
        // float backend and injected points get the same guarantee.
        F xpp = m_xp.derivative().num().eval(a);
        if (field_traits<F>::approx_equal(xpp, zero))
            throw degenerate_branch_point_error("dx has a degenerate zero");
    }

    branch_chart<F> build_chart(const F& a, int order) const {
        const int L = std::max(order, 4);
        branch_chart<F> chart;
        chart.a = a;
        chart.order = L;

        laurent_series<F> ex = expand_at(m_x, a, L + 3);
        chart.x_at_a = ex.coeff(0);
        // x(a+s) - x(a) with its double zero built in structurally: the
        // constant term cancels identically and the linear term is zero
        // because a is a branch point; neither is trusted to rounding.
        {
            std::vector<F> v;
            for (int k = 2; k < ex.lim(); ++k) v.push_back(ex.coeff(k));
            chart.x_shift = laurent_series<F>(2, ex.lim(), std::move(v));
        }
        const F c2 = chart.x_shift.coeff(2);
        if (!field_traits<F>::is_invertible(c2))
            throw degenerate_branch_point_error("x - x(a) has a zero of order > 2");

        // phi(s) = s sqrt((x(a+s) - x(a))/c2 / s^2) is the local square-root
        // coordinate: phi(sigma(s)) = -phi(s). The unit series gets an exact
        // leading 1.
        laurent_series<F> unit;
        {
            std::vector<F> v;
            v.push_back(field_traits<F>::one());
            const F inv_c2 = field_traits<F>::one() / c2;
            for (int k = 3; k < chart.x_shift.lim(); ++k)
                v.push_back(chart.x_shift.coeff(k) * inv_c2);
            unit = laurent_series<F>(0, chart.x_shift.lim() - 2, std::move(v));
        }
        laurent_series<F> phi = unit.sqrt_unit().shift(1);
        chart.sigma = phi.reverse().compose(-phi);

        chart.y_shift = expand_at(m_y, a, L + 1);
        chart.y_delta = chart.y_shift - chart.y_shift.compose(chart.sigma);
        if (chart.y_delta.valuation() != 1)
            throw colliding_branch_points_error(
                "y(q) - y(conjugate) does not vanish to first order");
        chart.dx_shift = chart.x_shift.derivative();
        return chart;
    }

    rational_function<F> m_x, m_y;
    F m_kappa;
    rational_function<F> m_xp, m_yp;
    std::vector<F> m_branch_points;
    mutable std::vector<std::shared_ptr<const branch_chart<F>>> m_charts;
};

} // namespace specrec
