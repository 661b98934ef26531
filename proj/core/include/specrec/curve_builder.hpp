// SPDX-License-Identifier: MIT
// Copyright (c) 2026 the specrec authors

#pragma once

#include <type_traits>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "laurent_series.hpp"
#include "linalg.hpp"
#include "polynomial.hpp"
#include "rational_function.hpp"
#include "roots.hpp"
#include "scalar.hpp"
#include "spectral_curve.hpp"

namespace specrec {

// Translation between spectral curves and the potentials of the two-matrix
// model. A curve of the right shape (x with one simple pole at z = infinity
// and one pole at z = 0, y the other way around) determines polynomial
// potentials and a temperature through its asymptotics on the two physical
// sheets:
//   y(z) = V1'(x)/kappa - (T/kappa)/x + O(1/x^2)   as z -> infinity,
//   x(z) = V2'(y)/kappa - (T/kappa)/y + O(1/y^2)   as z -> 0.
// The rescaled model with coupling 1 (potentials divided by kappa) is the
// one the engine computes in; observables are dressed back with powers of
// kappa afterwards. Both sets are reported.

template <class F>
struct potential_data {
    polynomial<F> v1_prime_hat, v2_prime_hat; // rescaled model, coupling 1
    F t_hat;
    polynomial<F> v1_prime, v2_prime;         // original model
    F t;
};

namespace detail {

// The curve shape expected by the asymptotic dictionary: x = (poly of degree
// d2+1)/z^d2 with d2 >= 1, y = (poly of degree d1+1)/z.
template <class F>
void validate_two_matrix_shape(const rational_function<F>& x, const rational_function<F>& y) {
    auto is_z_power = [](const polynomial<F>& p, int expected_deg) {
        if (p.degree() != expected_deg) return false;
        for (int j = 0; j < p.degree(); ++j)
            if (!field_traits<F>::is_zero(p.coeff(j))) return false;
        return field_traits<F>::is_zero(p.leading() - field_traits<F>::one());
    };
    const int d2 = x.den().degree();
    if (d2 < 1 || !is_z_power(x.den(), d2) || x.num().degree() != d2 + 1 ||
        !field_traits<F>::is_invertible(x.num().coeff(0)))
        throw degenerate_curve_error("x(z) is not of two-matrix form");
    if (!is_z_power(y.den(), 1) || y.num().degree() < 2 ||
        !field_traits<F>::is_invertible(y.num().coeff(0)))
        throw degenerate_curve_error("y(z) is not of two-matrix form");
}

// Evaluates a polynomial on a Laurent series by accumulated powers.
template <class F>
laurent_series<F> poly_at_series(const polynomial<F>& p, const laurent_series<F>& X) {
    laurent_series<F> acc = laurent_series<F>::zero_to(X.lim());
    if (p.is_zero()) return acc;
    laurent_series<F> xpow = laurent_series<F>::monomial(field_traits<F>::one(), 0, X.lim() + 1);
    for (int j = 0; j <= p.degree(); ++j) {
        if (j > 0) xpow = xpow * X;
        const F c = p.coeff(j);
        if (!field_traits<F>::is_zero(c)) acc += c * xpow;
    }
    return acc;
}

// One asymptotic side: finds the polynomial P and scalar t with
//   yf = P(xf) - t/xf + O(1/xf^2)  at z -> infinity.
// xf must have a simple pole there and yf a pole of order deg(P) >= 1.
template <class F>
std::pair<polynomial<F>, F> extract_side(const rational_function<F>& xf,
                                         const rational_function<F>& yf) {
    const int d = yf.num().degree() - yf.den().degree();
    if (xf.num().degree() - xf.den().degree() != 1 || d < 1)
        throw degenerate_curve_error("asymptotics do not define a polynomial potential");
    const int L = d + 6;
    laurent_series<F> X = expand_at_infinity(xf, L);
    laurent_series<F> Y = expand_at_infinity(yf, L);
    const F gamma = X.coeff(-1);
    if (!field_traits<F>::is_invertible(gamma))
        throw degenerate_curve_error("x(z) loses its pole at infinity");

    std::vector<F> p(static_cast<std::size_t>(d) + 1, field_traits<F>::zero());
    laurent_series<F> R = Y;
    // Powers of X, highest first: X^j has leading coefficient gamma^j at
    // w^(-j), so the elimination is triangular from the top.
    std::vector<laurent_series<F>> xpows;
    xpows.push_back(laurent_series<F>::monomial(field_traits<F>::one(), 0, L + 1));
    for (int j = 1; j <= d; ++j) xpows.push_back(xpows.back() * X);
    F gpow = field_traits<F>::one();
    std::vector<F> gamma_pows{gpow};
    for (int j = 1; j <= d; ++j) {
        gpow = gpow * gamma;
        gamma_pows.push_back(gpow);
    }
    for (int j = d; j >= 0; --j) {
        const F c = R.coeff(-j) / gamma_pows[static_cast<std::size_t>(j)];
        p[static_cast<std::size_t>(j)] = c;
        if (!field_traits<F>::is_zero(c)) R -= c * xpows[static_cast<std::size_t>(j)];
    }
    const F t = -(gamma * R.coeff(1));
    return {polynomial<F>(std::move(p)), t};
}

} // namespace detail

template <class F>
potential_data<F> derive_potentials(const rational_function<F>& x,
                                    const rational_function<F>& y, const F& kappa) {
    detail::validate_two_matrix_shape(x, y);
    auto [v1h, t_x] = detail::extract_side(x, y);
    auto [v2h, t_y] = detail::extract_side(y.compose_reciprocal(), x.compose_reciprocal());
    // For a curve whose only poles sit at z = 0 and z = infinity, the two
    // temperatures agree by the residue theorem applied to y dx; a mismatch
    // means the inputs slipped past the shape check.
    if (!field_traits<F>::approx_equal(t_x, t_y))
        throw internal_error("the two asymptotic temperatures disagree");
    potential_data<F> out;
    out.v1_prime_hat = v1h;
    out.v2_prime_hat = v2h;
    out.t_hat = t_x;
    out.v1_prime = kappa * v1h;
    out.v2_prime = kappa * v2h;
    out.t = kappa * t_x;
    return out;
}

template <class F>
potential_data<F> derive_potentials(const spectral_curve<F>& curve) {
    return derive_potentials(curve.x(), curve.y(), curve.kappa());
}

namespace detail {

// ---- potential -> curve: shared machinery over a generic scalar field ----
//
// Unknowns, with the gauge gamma = 1:
//   u = [alpha_0 .. alpha_d2, beta_0 .. beta_d1, gammatilde],
//   x = z + alpha_0 + alpha_1/z + ... + alpha_d2/z^d2,
//   y = beta_d1 z^d1 + ... + beta_0 + gammatilde/z.
// Equations: the two asymptotic relations above, through order 1/x on the x
// side and 1/y^0 on the y side (the y-side 1/y coefficient is dependent by
// the residue theorem and is dropped to make the system square).

template <class F>
struct builder_system {
    polynomial<F> v1h, v2h; // rescaled potentials' derivatives
    F t_hat;
    int d1, d2;

    int size() const { return d1 + d2 + 3; }

    rational_function<F> make_x(const std::vector<F>& u) const {
        std::vector<F> num(static_cast<std::size_t>(d2) + 2);
        for (int k = 0; k <= d2; ++k) num[static_cast<std::size_t>(k)] = u[static_cast<std::size_t>(d2 - k)];
        num[static_cast<std::size_t>(d2) + 1] = field_traits<F>::one();
        return rational_function<F>(polynomial<F>(std::move(num)),
                                    polynomial<F>::monomial(field_traits<F>::one(),
                                                            static_cast<unsigned>(d2)));
    }
    rational_function<F> make_y(const std::vector<F>& u) const {
        std::vector<F> num(static_cast<std::size_t>(d1) + 2);
        num[0] = u[static_cast<std::size_t>(size() - 1)];
        for (int j = 0; j <= d1; ++j)
            num[static_cast<std::size_t>(j) + 1] = u[static_cast<std::size_t>(d2 + 1 + j)];
        return rational_function<F>(polynomial<F>(std::move(num)),
                                    polynomial<F>::monomial(field_traits<F>::one(), 1));
    }

    // Residual vector; `full` additionally appends the dependent equation,
    // for verification of a finished solution.
    std::vector<F> residual(const std::vector<F>& u, bool full = false) const {
        rational_function<F> x = make_x(u);
        rational_function<F> y = make_y(u);
        std::vector<F> out;
        out.reserve(static_cast<std::size_t>(size()) + 1);
        {
            const int L = d1 + 6;
            laurent_series<F> X = expand_at_infinity(x, L);
            laurent_series<F> Y = expand_at_infinity(y, L);
            laurent_series<F> R = Y - poly_at_series(v1h, X) + t_hat * X.inverse();
            for (int n = -d1; n <= 1; ++n) out.push_back(R.coeff(n));
        }
        {
            const int L = d2 + 6;
            laurent_series<F> X = expand_at_infinity(y.compose_reciprocal(), L);
            laurent_series<F> Y = expand_at_infinity(x.compose_reciprocal(), L);
            laurent_series<F> R = Y - poly_at_series(v2h, X) + t_hat * X.inverse();
            for (int n = -d2; n <= 0; ++n) out.push_back(R.coeff(n));
            if (full) out.push_back(R.coeff(1));
        }
        return out;
    }

    // Exact solution of the quadratic sub-model (all couplings beyond the
    // linear coefficient of the potential derivatives switched off).
    std::vector<F> gaussian_seed() const {
        const F one = field_traits<F>::one();
        const F t2 = v1h.coeff(1), tt2 = v2h.coeff(1);
        const F t1 = v1h.coeff(0), tt1 = v2h.coeff(0);
        const F denom = t2 * tt2 - one;
        if (!field_traits<F>::is_invertible(denom))
            throw no_genus_zero_solution_error(
                "the quadratic part of the model is degenerate");
        std::vector<F> u(static_cast<std::size_t>(size()), field_traits<F>::zero());
        const F gt = t_hat / denom;
        const F a0 = -(tt1 + t1 * tt2) / denom;
        u[0] = a0;                                        // alpha_0
        u[1] = tt2 * gt;                                  // alpha_1
        u[static_cast<std::size_t>(d2) + 1] = t1 + t2 * a0; // beta_0
        u[static_cast<std::size_t>(d2) + 2] = t2;           // beta_1
        u[static_cast<std::size_t>(size() - 1)] = gt;       // gammatilde
        return u;
    }
};

template <class F, class G, class Fn>
polynomial<G> map_poly(const polynomial<F>& p, Fn&& fn) {
    std::vector<G> c;
    c.reserve(static_cast<std::size_t>(p.degree()) + 1);
    for (int k = 0; k <= p.degree(); ++k) c.push_back(fn(p.coeff(k)));
    return polynomial<G>(std::move(c));
}

// Jacobian of the residual at u, column by column through dual numbers.
template <class F>
std::vector<std::vector<F>> builder_jacobian(const builder_system<F>& sys,
                                             const std::vector<F>& u) {
    const std::size_t n = static_cast<std::size_t>(sys.size());
    builder_system<dual<F>> dsys{
        map_poly<F, dual<F>>(sys.v1h, [](const F& c) { return dual<F>(c); }),
        map_poly<F, dual<F>>(sys.v2h, [](const F& c) { return dual<F>(c); }),
        dual<F>(sys.t_hat), sys.d1, sys.d2};
    std::vector<std::vector<F>> jac(n, std::vector<F>(n, field_traits<F>::zero()));
    for (std::size_t col = 0; col < n; ++col) {
        std::vector<dual<F>> du;
        du.reserve(n);
        for (std::size_t j = 0; j < n; ++j)
            du.emplace_back(u[j], j == col ? field_traits<F>::one() : field_traits<F>::zero());
        auto r = dsys.residual(du);
        for (std::size_t row = 0; row < n; ++row) jac[row][col] = r[row].eps();
    }
    return jac;
}

inline bigfloat residual_norm(const std::vector<bigfloat>& r) {
    bigfloat worst = 0;
    for (const auto& v : r) {
        bigfloat a = boost::multiprecision::abs(v);
        if (a > worst) worst = a;
    }
    return worst;
}

// Newton iteration at fixed couplings; returns whether it converged.
inline bool builder_newton(const builder_system<bigfloat>& sys, std::vector<bigfloat>& u,
                           const bigfloat& goal) {
    bigfloat best = residual_norm(sys.residual(u));
    for (int iter = 0; iter < 40; ++iter) {
        if (best <= goal) return true;
        std::vector<std::vector<bigfloat>> jac;
        std::vector<bigfloat> step;
        try {
            jac = builder_jacobian(sys, u);
            step = linear_solve(std::move(jac), sys.residual(u));
        } catch (const internal_error&) {
            return false; // singular Jacobian: caller shortens the path step
        }
        for (std::size_t j = 0; j < u.size(); ++j) u[j] -= step[j];
        bigfloat now = residual_norm(sys.residual(u));
        if (!(now < best * 4)) return false; // diverging
        best = now;
    }
    return best <= goal;
}

// Continuation from the quadratic model to the full couplings, in floats at
// the current working precision.
inline std::vector<bigfloat> builder_homotopy(const builder_system<bigfloat>& target,
                                              unsigned work_bits) {
    auto scaled = [&](const bigfloat& theta) {
        builder_system<bigfloat> sys = target;
        std::vector<bigfloat> c1, c2;
        for (int k = 0; k <= sys.v1h.degree(); ++k)
            c1.push_back(k <= 1 ? sys.v1h.coeff(k) : theta * sys.v1h.coeff(k));
        for (int k = 0; k <= sys.v2h.degree(); ++k)
            c2.push_back(k <= 1 ? sys.v2h.coeff(k) : theta * sys.v2h.coeff(k));
        sys.v1h = polynomial<bigfloat>(std::move(c1));
        sys.v2h = polynomial<bigfloat>(std::move(c2));
        return sys;
    };
    const bigfloat goal =
        boost::multiprecision::ldexp(bigfloat(1), -static_cast<long>(work_bits) + 48);
    std::vector<bigfloat> u = scaled(bigfloat(0)).gaussian_seed();
    if (!builder_newton(scaled(bigfloat(0)), u, goal))
        throw no_genus_zero_solution_error("the quadratic sub-model does not converge");
    bigfloat theta = 0, step = 1;
    const bigfloat min_step = bigfloat(1) / 16384;
    while (theta < 1) {
        bigfloat next = theta + step;
        if (next > 1) next = 1;
        std::vector<bigfloat> candidate = u;
        if (builder_newton(scaled(next), candidate, goal)) {
            theta = next;
            u = std::move(candidate);
            step = step * 2;
        } else {
            step = step / 2;
            if (step < min_step)
                throw no_genus_zero_solution_error(
                    "continuation from the quadratic model breaks down");
        }
    }
    return u;
}

} // namespace detail

// Builds the genus-zero spectral curve of the model with the given potential
// derivatives, coupling and temperature: the solution branch continuously
// connected to the quadratic (Gaussian) sub-model. Exact backends solve in
// floats, reconstruct rational coefficients, and verify them exactly; the
// dual backend differentiates the exact solution through one linear solve.
template <class F>
spectral_curve<F> build_curve_from_potentials(const polynomial<F>& v1_prime,
                                              const polynomial<F>& v2_prime, const F& kappa,
                                              const F& t) {
    if (!field_traits<F>::is_invertible(kappa))
        throw no_genus_zero_solution_error("the mixing coupling must be invertible");
    if (!field_traits<F>::is_invertible(t))
        throw no_genus_zero_solution_error("the temperature must be invertible");
    const int d1 = v1_prime.degree(), d2 = v2_prime.degree();
    if (d1 < 1 || d2 < 1)
        throw no_genus_zero_solution_error("potentials must be at least quadratic");
    const F inv_kappa = field_traits<F>::one() / kappa;

    if constexpr (std::is_same_v<F, rational>) {
        detail::builder_system<rational> sys{inv_kappa * v1_prime, inv_kappa * v2_prime,
                                             t * inv_kappa, d1, d2};
        ensure_float_precision_initialized();
        for (unsigned bits : {384u, 768u, 1536u}) {
            std::vector<bigfloat> uf;
            {
                detail::precision_guard guard(bits);
                detail::builder_system<bigfloat> fsys{
                    detail::map_poly<rational, bigfloat>(
                        sys.v1h, [](const rational& c) { return bigfloat(c); }),
                    detail::map_poly<rational, bigfloat>(
                        sys.v2h, [](const rational& c) { return bigfloat(c); }),
                    bigfloat(sys.t_hat), d1, d2};
                uf = detail::builder_homotopy(fsys, bits);
            }
            const bigint den_bound = bigint(1) << (bits / 3);
            std::vector<rational> u;
            u.reserve(uf.size());
            for (const auto& v : uf) u.push_back(detail::reconstruct_rational(v, den_bound));
            bool ok = true;
            for (const auto& r : sys.residual(u, true))
                if (!r.is_zero()) { ok = false; break; }
            if (ok) return spectral_curve<rational>(sys.make_x(u), sys.make_y(u), kappa);
        }
        throw no_genus_zero_solution_error(
            "no rational genus-zero solution found at the supported precisions");
    } else if constexpr (std::is_same_v<F, bigfloat>) {
        ensure_float_precision_initialized();
        detail::builder_system<bigfloat> sys{inv_kappa * v1_prime, inv_kappa * v2_prime,
                                             t * inv_kappa, d1, d2};
        auto u = detail::builder_homotopy(sys, float_precision_bits());
        return spectral_curve<bigfloat>(sys.make_x(u), sys.make_y(u), kappa);
    } else if constexpr (std::is_same_v<F, dual<rational>>) {
        using D = dual<rational>;
        detail::builder_system<D> sys{inv_kappa * v1_prime, inv_kappa * v2_prime,
                                      t * inv_kappa, d1, d2};
        // Base solution: same system with the eps parts stripped. The system
        // dimensions are fixed by the dual-level degrees, so a coupling that
        // is switched on only at order eps still shapes the ansatz.
        detail::builder_system<rational> base{
            detail::map_poly<D, rational>(sys.v1h, [](const D& c) { return c.base(); }),
            detail::map_poly<D, rational>(sys.v2h, [](const D& c) { return c.base(); }),
            sys.t_hat.base(), d1, d2};
        ensure_float_precision_initialized();
        std::vector<rational> ub;
        {
            bool solved = false;
            for (unsigned bits : {384u, 768u, 1536u}) {
                std::vector<bigfloat> uf;
                {
                    detail::precision_guard guard(bits);
                    detail::builder_system<bigfloat> fsys{
                        detail::map_poly<rational, bigfloat>(
                            base.v1h, [](const rational& c) { return bigfloat(c); }),
                        detail::map_poly<rational, bigfloat>(
                            base.v2h, [](const rational& c) { return bigfloat(c); }),
                        bigfloat(base.t_hat), d1, d2};
                    uf = detail::builder_homotopy(fsys, bits);
                }
                const bigint den_bound = bigint(1) << (bits / 3);
                std::vector<rational> u;
                u.reserve(uf.size());
                for (const auto& v : uf) u.push_back(detail::reconstruct_rational(v, den_bound));
                bool ok = true;
                for (const auto& r : base.residual(u, true))
                    if (!r.is_zero()) { ok = false; break; }
                if (ok) { ub = std::move(u); solved = true; break; }
            }
            if (!solved)
                throw no_genus_zero_solution_error(
                    "no rational genus-zero solution found at the supported precisions");
        }
        // First-order correction: J(u) du = -S_eps(u), both exact.
        auto jac = detail::builder_jacobian(base, ub);
        std::vector<D> u_dual;
        u_dual.reserve(ub.size());
        for (const auto& v : ub) u_dual.push_back(D(v));
        auto r_dual = sys.residual(u_dual);
        std::vector<rational> rhs;
        rhs.reserve(r_dual.size());
        for (const auto& r : r_dual) rhs.push_back(-r.eps());
        auto du = detail::linear_solve(std::move(jac), std::move(rhs));
        for (std::size_t j = 0; j < u_dual.size(); ++j)
            u_dual[j] = D(ub[j], du[j]);
        for (const auto& r : sys.residual(u_dual, true))
            if (!field_traits<D>::is_zero(r))
                throw internal_error("dual curve solution fails to verify");
        return spectral_curve<D>(sys.make_x(u_dual), sys.make_y(u_dual), kappa);
    } else {
        static_assert(std::is_same_v<F, rational> || std::is_same_v<F, bigfloat> ||
                          std::is_same_v<F, dual<rational>>,
                      "curve building is supported over rational, bigfloat and dual scalars");
    }
}

} // namespace specrec
