#pragma once

// Characteristic foliation of the perturbed open umbrella psi∘phi(Σ), pulled back to the
// (t, s) parameter plane, and its jet-level version.

#include "matrix.hpp"
#include "multipoly.hpp"
#include "symplectic.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace umbrella {

inline const std::vector<std::string>& plane_names() {
    static const std::vector<std::string> names{"t", "s"};
    return names;
}

/// Planar polynomial vector field alpha d/dt + beta d/ds vanishing at the origin.
struct VectorField2 {
    Poly alpha = Poly(2, plane_names());
    Poly beta = Poly(2, plane_names());

    VectorField2() = default;
    VectorField2(Poly a, Poly b) : alpha(std::move(a)), beta(std::move(b)) {
        if (alpha.num_vars() != 2 || beta.num_vars() != 2) {
            throw std::invalid_argument("vector field components must be polynomials in (t, s)");
        }
        if (!is_zero(alpha.constant_term()) || !is_zero(beta.constant_term())) {
            throw std::invalid_argument("vector field must vanish at the origin");
        }
        alpha = alpha.with_names(plane_names());
        beta = beta.with_names(plane_names());
    }

    friend bool operator==(const VectorField2& a, const VectorField2& b) {
        return a.alpha == b.alpha && a.beta == b.beta;
    }
};

/// pi(t, s) = (ts, 2t^3/3, t^2, s) in (x, u, y, v) order.
inline PolyMap umbrella_param() {
    const Poly t = Poly::variable(2, 0, plane_names());
    const Poly s = Poly::variable(2, 1, plane_names());
    return PolyMap(2, {t * s, t.pow(3).scaled(Rational(2, 3)), t * t, s});
}

/// rho = x^2 - y v^2 + (9/4) u^2 - y^3, whose zero set contains the umbrella.
inline Poly umbrella_rho() {
    const auto& n = canonical_names();
    const Poly x = Poly::variable(4, 0, n), u = Poly::variable(4, 1, n);
    const Poly y = Poly::variable(4, 2, n), v = Poly::variable(4, 3, n);
    return x * x - y * v * v + (u * u).scaled(Rational(9, 4)) - y.pow(3);
}

inline PolyMap rho_gradient() {
    const Poly rho = umbrella_rho();
    std::vector<Poly> comps;
    for (std::size_t i = 0; i < 4; ++i) comps.push_back(rho.diff(i));
    return PolyMap(4, std::move(comps));
}

/// J v = (-v_y, -v_v, v_x, v_u): multiplication by i in (x, u, y, v) coordinates.
template <class T>
std::array<T, 4> apply_j(const std::array<T, 4>& v) {
    return {T(-v[2]), T(-v[3]), v[0], v[1]};
}

namespace detail {

inline RatMatrix checked_normalizer(const PolyMap& phi) {
    if (phi.source_dim() != 4 || phi.target_dim() != 4) {
        throw std::invalid_argument("expected a polynomial map R^4 -> R^4");
    }
    if (!phi.fixes_origin()) throw std::domain_error("map must fix the origin");
    return build_normalizer(BlockDecomposition::from_matrix(phi.linear_part()));
}

inline VectorField2 pair_with_j(const std::array<Poly, 4>& xt, const std::array<Poly, 4>& xs,
                                const std::array<Poly, 4>& grad, std::optional<unsigned> trunc) {
    const auto jxs = apply_j(xs);
    const auto jxt = apply_j(xt);
    Poly alpha(2, plane_names()), beta(2, plane_names());
    for (std::size_t i = 0; i < 4; ++i) {
        alpha += Poly::multiply(jxs[i], grad[i], trunc);
        beta -= Poly::multiply(jxt[i], grad[i], trunc);
    }
    return {alpha, beta};
}

}  // namespace detail

/// The field (alpha, beta) of the characteristic foliation of psi∘phi(Σ), exact.
inline VectorField2 characteristic_field(const PolyMap& phi, std::size_t cap = kDefaultTermCap) {
    const RatMatrix psi = detail::checked_normalizer(phi);
    const Poly jac = jacobian_determinant(phi);
    if (jac != Poly::constant(4, 1)) {
        throw std::domain_error("map is not symplectic: Jacobian determinant is " + to_string(jac));
    }
    const Rational det_psi = det(psi);
    const PolyMap g = apply_linear(psi, phi);
    const PolyMap pi = umbrella_param();
    const PolyMap f = map_compose(g, pi, std::nullopt, cap);

    // grad rho' ∘ f = cof(Dg ∘ pi) · (grad rho ∘ pi) / det psi
    const Matrix<Poly> dg = g.jacobian();
    Matrix<Poly> dg_pi(4, 4, Poly(2, plane_names()));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) dg_pi(i, j) = poly_compose(dg(i, j), pi.components(), std::nullopt, cap);
    const Matrix<Poly> cof = cofactor_matrix(dg_pi);
    const PolyMap grad_pi = map_compose(rho_gradient(), pi);

    std::array<Poly, 4> grad, xt, xs;
    const Rational inv = Rational(1) / det_psi;
    for (std::size_t i = 0; i < 4; ++i) {
        Poly acc(2, plane_names());
        for (std::size_t j = 0; j < 4; ++j) acc += Poly::multiply(cof(i, j), grad_pi[j], std::nullopt, cap);
        grad[i] = acc.scaled(inv);
        xt[i] = f[i].diff(0);
        xs[i] = f[i].diff(1);
    }
    return detail::pair_with_j(xt, xs, grad, std::nullopt);
}

/// Xi^(k): the k-jet of the field from the (k+1)-jet of phi, computed entirely in the
/// truncated ring. The inverse Jacobian is the cofactor matrix times the jet reciprocal
/// of the determinant.
inline std::pair<Jet, Jet> jet_foliation(const PolyMap& phi, unsigned k) {
    const RatMatrix psi = detail::checked_normalizer(phi);
    const PolyMap phi_k = phi.truncated(k + 1);
    if (!defect_vanishes(symplectic_defect(phi_k, k))) {
        throw std::domain_error("map is not symplectic to order " + std::to_string(k));
    }
    const PolyMap g = apply_linear(psi, phi_k);
    const PolyMap pi = umbrella_param();
    const PolyMap f = map_compose(g, pi, k + 1);

    const Matrix<Poly> dg = g.jacobian();
    Matrix<Poly> dg_pi(4, 4, Poly(2, plane_names()));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) dg_pi(i, j) = poly_compose(dg(i, j).truncated(k), pi.components(), k);
    const Jet det_inv = jet_reciprocal(jet_truncate(det_cofactor(dg_pi), k));
    const Matrix<Poly> cof = cofactor_matrix(dg_pi);
    const PolyMap grad_pi = map_compose(rho_gradient(), pi, k);

    std::array<Poly, 4> grad, xt, xs;
    for (std::size_t i = 0; i < 4; ++i) {
        Poly acc(2, plane_names());
        for (std::size_t j = 0; j < 4; ++j) acc += Poly::multiply(cof(i, j), grad_pi[j], k);
        grad[i] = Poly::multiply(acc, det_inv.poly, k);
        xt[i] = f[i].diff(0).truncated(k);
        xs[i] = f[i].diff(1).truncated(k);
    }
    const VectorField2 x = detail::pair_with_j(xt, xs, grad, k);
    return {jet_truncate(x.alpha, k), jet_truncate(x.beta, k)};
}

// ---------------------------------------------------------------------------
// Coefficients of the perturbed system
//
//   alpha = -2 g12 ts + a02 s^2 - 3 g22 t^3 + ...
//   beta  = 4 g11 t^2 s + b12 t s^2 + b03 s^3 + 6 g12 t^4 + ...

struct SystemCoefficients {
    Rational g11, g12, g22, a02, b12, b03;
    bool generic = false;
    Rational g12_from_beta;  // second reading, from the t^4 coefficient of beta
    bool consistent = true;  // the two g12 readings agree
    bool matches_template = true;  // no low-order terms outside the template
    Poly alpha_rest = Poly(2, plane_names());  // terms of degree <= 3 off the template
    Poly beta_rest = Poly(2, plane_names());   // terms of degree <= 4 off the template
};

enum class CoefficientCheck { Strict, Lenient };

inline SystemCoefficients extract_system_coefficients(const VectorField2& x,
                                                      CoefficientCheck check = CoefficientCheck::Strict) {
    const Poly& a = x.alpha;
    const Poly& b = x.beta;
    SystemCoefficients c;
    c.g12 = -a.coefficient({1, 1}) / 2;
    c.a02 = a.coefficient({0, 2});
    c.g22 = -a.coefficient({3, 0}) / 3;
    c.g11 = b.coefficient({2, 1}) / 4;
    c.b12 = b.coefficient({1, 2});
    c.b03 = b.coefficient({0, 3});
    c.g12_from_beta = b.coefficient({4, 0}) / 6;
    c.generic = !is_zero(c.a02) && !is_zero(c.b12) && !is_zero(c.b03);
    c.consistent = c.g12 == c.g12_from_beta;

    const std::vector<Exponent> alpha_template{{1, 1}, {0, 2}, {3, 0}};
    const std::vector<Exponent> beta_template{{2, 1}, {1, 2}, {0, 3}, {4, 0}};
    auto in = [](const std::vector<Exponent>& v, const Exponent& e) {
        return std::find(v.begin(), v.end(), e) != v.end();
    };
    const Poly a3 = a.truncated(3), b4 = b.truncated(4);
    for (const auto& [e, coef] : a3.terms())
        if (!in(alpha_template, e)) c.alpha_rest.add_term(e, coef);
    for (const auto& [e, coef] : b4.terms())
        if (!in(beta_template, e)) c.beta_rest.add_term(e, coef);

    // Terms that the remainders o(|t|^3 + |s|^2 + |ts|) and
    // o(|t^2 s| + |t s^2| + |s|^3 + |t|^4) cannot absorb.
    const std::vector<Exponent> alpha_forbidden{{1, 0}, {0, 1}, {2, 0}};
    const std::vector<Exponent> beta_forbidden{{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}};
    for (const auto& e : alpha_forbidden)
        if (!is_zero(a.coefficient(e))) c.matches_template = false;
    for (const auto& e : beta_forbidden)
        if (!is_zero(b.coefficient(e))) c.matches_template = false;

    if (check == CoefficientCheck::Strict && !c.consistent) {
        throw std::domain_error("field is not of the perturbed-umbrella shape: g12 = " + to_string(c.g12) +
                                " from the ts term of alpha but " + to_string(c.g12_from_beta) +
                                " from the t^4 term of beta");
    }
    return c;
}

}  // namespace umbrella
