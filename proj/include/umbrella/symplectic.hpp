#pragma once

// Polynomial maps of R^4, symplectic-defect jets, the linear normalizer psi and the
// Hénon-like family H_{N,V,eta}.
//
// Canonical coordinates on R^4 are (x, u, y, v) with z = x + iy, w = u + iv, so the
// complex structure is J = [[0, -I2], [I2, 0]] and omega = dx^dy + du^dv.

#include "matrix.hpp"
#include "multipoly.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace umbrella {

inline const std::vector<std::string>& canonical_names() {
    static const std::vector<std::string> names{"x", "u", "y", "v"};
    return names;
}

/// A polynomial map R^source_dim -> R^target_dim.
class PolyMap {
public:
    PolyMap() = default;

    PolyMap(std::size_t source_dim, std::vector<Poly> components)
        : source_dim_(source_dim), components_(std::move(components)) {
        if (source_dim_ == 0) throw std::invalid_argument("PolyMap: source_dim must be positive");
        for (const auto& c : components_) {
            if (c.num_vars() != source_dim_) {
                throw std::invalid_argument("PolyMap: component has " + std::to_string(c.num_vars()) +
                                            " variables, expected " + std::to_string(source_dim_));
            }
        }
    }

    static PolyMap identity(std::size_t n, const std::vector<std::string>& names = {}) {
        std::vector<Poly> comps;
        for (std::size_t i = 0; i < n; ++i) comps.push_back(Poly::variable(n, i, names));
        return {n, std::move(comps)};
    }

    /// x -> M x.
    static PolyMap linear(const RatMatrix& m, const std::vector<std::string>& names = {}) {
        std::vector<Poly> comps;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            Poly p(m.cols(), names);
            for (std::size_t j = 0; j < m.cols(); ++j) p += Poly::variable(m.cols(), j, names).scaled(m(i, j));
            comps.push_back(std::move(p));
        }
        return {m.cols(), std::move(comps)};
    }

    std::size_t source_dim() const { return source_dim_; }
    std::size_t target_dim() const { return components_.size(); }
    const std::vector<Poly>& components() const { return components_; }
    const Poly& operator[](std::size_t i) const { return components_.at(i); }

    int degree() const {
        int d = -1;
        for (const auto& c : components_) d = std::max(d, c.degree());
        return d;
    }

    PolyMap truncated(unsigned k) const {
        std::vector<Poly> comps;
        for (const auto& c : components_) comps.push_back(c.truncated(k));
        return {source_dim_, std::move(comps)};
    }

    /// Jacobian matrix of polynomials, rows = components.
    Matrix<Poly> jacobian() const {
        Matrix<Poly> jac(target_dim(), source_dim_, Poly(source_dim_));
        for (std::size_t i = 0; i < target_dim(); ++i)
            for (std::size_t j = 0; j < source_dim_; ++j) jac(i, j) = components_[i].diff(j);
        return jac;
    }

    /// Jacobian at the origin.
    RatMatrix linear_part() const {
        RatMatrix m(target_dim(), source_dim_);
        for (std::size_t i = 0; i < target_dim(); ++i) {
            for (std::size_t j = 0; j < source_dim_; ++j) {
                Exponent e(source_dim_, 0);
                e[j] = 1;
                m(i, j) = components_[i].coefficient(e);
            }
        }
        return m;
    }

    std::vector<Rational> value_at_origin() const {
        std::vector<Rational> v;
        for (const auto& c : components_) v.push_back(c.constant_term());
        return v;
    }

    bool fixes_origin() const {
        for (const auto& c : components_)
            if (!is_zero(c.constant_term())) return false;
        return true;
    }

    friend bool operator==(const PolyMap& a, const PolyMap& b) {
        return a.source_dim_ == b.source_dim_ && a.components_ == b.components_;
    }

private:
    std::size_t source_dim_ = 0;
    std::vector<Poly> components_;
};

/// f ∘ g, exact (or truncated at `trunc` when every component of g vanishes at 0).
inline PolyMap map_compose(const PolyMap& f, const PolyMap& g, std::optional<unsigned> trunc = std::nullopt,
                           std::size_t cap = kDefaultTermCap) {
    if (g.target_dim() != f.source_dim()) {
        throw std::invalid_argument("map_compose: dimension mismatch (inner target " +
                                    std::to_string(g.target_dim()) + ", outer source " +
                                    std::to_string(f.source_dim()) + ")");
    }
    std::vector<Poly> comps;
    for (const auto& c : f.components()) comps.push_back(poly_compose(c, g.components(), trunc, cap));
    return {g.source_dim(), std::move(comps)};
}

/// M ∘ g for a constant matrix M, without going through substitution.
inline PolyMap apply_linear(const RatMatrix& m, const PolyMap& g) {
    if (m.cols() != g.target_dim()) throw std::invalid_argument("apply_linear: dimension mismatch");
    std::vector<Poly> comps;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Poly p(g.source_dim(), g.components().front().var_names());
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!is_zero(m(i, j))) p += g[j].scaled(m(i, j));
        comps.push_back(std::move(p));
    }
    return {g.source_dim(), std::move(comps)};
}

/// Re-expresses a map R^n -> R^n in permuted coordinates: new coordinate i is old
/// coordinate perm[i], on both the source and the target side.
inline PolyMap permute_coordinates(const PolyMap& f, const std::vector<std::size_t>& perm) {
    const std::size_t n = f.source_dim();
    if (perm.size() != n || f.target_dim() != n) throw std::invalid_argument("permute_coordinates: bad size");
    // old variable perm[i] becomes new variable i
    std::vector<Poly> subst(n);
    for (std::size_t i = 0; i < n; ++i) subst[perm[i]] = Poly::variable(n, i);
    std::vector<Poly> comps;
    for (std::size_t i = 0; i < n; ++i) comps.push_back(poly_compose(f[perm[i]], subst));
    return {n, std::move(comps)};
}

inline Poly jacobian_determinant(const PolyMap& f) {
    if (f.source_dim() != f.target_dim()) throw std::invalid_argument("jacobian determinant of a non-square map");
    return det_cofactor(f.jacobian());
}

// ---------------------------------------------------------------------------
// Coordinate orderings

/// Hénon coordinates (x1, x2, y1, y2) with z_j = x_j + i y_j, as canonical indices.
/// Since z = x + iy and w = u + iv this is x1 = x, x2 = u, y1 = y, y2 = v.
inline const std::vector<std::size_t>& henon_to_canonical() {
    static const std::vector<std::size_t> perm{0, 1, 2, 3};
    return perm;
}

/// Interleaved ordering (x, y, u, v) in which omega = dx1^dx2 + dx3^dx4.
inline const std::array<std::size_t, 4>& interleaved_to_canonical() {
    static const std::array<std::size_t, 4> perm{0, 2, 1, 3};
    return perm;
}

inline std::vector<std::size_t> inverse_permutation(const std::vector<std::size_t>& perm) {
    std::vector<std::size_t> inv(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
    return inv;
}

// ---------------------------------------------------------------------------
// Symplectic defect

struct DefectEntry {
    std::size_t j = 0;  // 1-based, interleaved ordering
    std::size_t k = 0;
    Jet residual;
};

/// Jets of Jac(1,2,j,k) + Jac(3,4,j,k) - d_jk truncated at order k, for the six pairs
/// j < k in the interleaved ordering. All zero iff phi^*omega = omega to that order.
inline std::vector<DefectEntry> symplectic_defect(const PolyMap& phi, unsigned order) {
    if (phi.source_dim() != 4 || phi.target_dim() != 4) {
        throw std::invalid_argument("symplectic_defect: expected a map R^4 -> R^4");
    }
    const auto& sigma = interleaved_to_canonical();
    std::array<std::array<Poly, 4>, 4> d;
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) d[a][b] = phi[a].diff(b).truncated(order);

    auto partial = [&](std::size_t comp, std::size_t var) -> const Poly& { return d[sigma[comp]][sigma[var]]; };
    auto jac = [&](std::size_t l, std::size_t m, std::size_t j, std::size_t k) {
        return Poly::multiply(partial(l, j), partial(m, k), order) - Poly::multiply(partial(m, j), partial(l, k), order);
    };

    std::vector<DefectEntry> out;
    for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t k = j + 1; k < 4; ++k) {
            Poly r = jac(0, 1, j, k) + jac(2, 3, j, k);
            const bool unit = (j == 0 && k == 1) || (j == 2 && k == 3);
            if (unit) r.add_term(Exponent(4, 0), Rational(-1));
            out.push_back({j + 1, k + 1, jet_truncate(r, order)});
        }
    }
    return out;
}

inline bool defect_vanishes(const std::vector<DefectEntry>& defect) {
    for (const auto& e : defect)
        if (!e.residual.poly.is_zero()) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Linear normalizer

/// Blocks of a 4x4 symplectic matrix [[A, B], [C, D]] in (x, u | y, v) blocks.
class BlockDecomposition {
public:
    BlockDecomposition(RatMatrix a, RatMatrix b, RatMatrix c, RatMatrix d)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
        for (const auto* m : {&a_, &b_, &c_, &d_}) {
            if (m->rows() != 2 || m->cols() != 2) throw std::invalid_argument("BlockDecomposition: blocks must be 2x2");
        }
        const RatMatrix i2 = RatMatrix::identity(2);
        const bool ok = (a_.transpose() * d_ - c_.transpose() * b_ == i2) &&
                        (a_.transpose() * c_ == c_.transpose() * a_) &&
                        (d_.transpose() * b_ == b_.transpose() * d_);
        if (!ok) {
            throw std::domain_error(
                "linear part is not symplectic: A^tD - C^tB = I, A^tC = C^tA, D^tB = B^tD must hold");
        }
    }

    static BlockDecomposition from_matrix(const RatMatrix& m) {
        if (m.rows() != 4 || m.cols() != 4) throw std::invalid_argument("BlockDecomposition: expected 4x4");
        return {m.block(0, 0, 2, 2), m.block(0, 2, 2, 2), m.block(2, 0, 2, 2), m.block(2, 2, 2, 2)};
    }

    const RatMatrix& a() const { return a_; }
    const RatMatrix& b() const { return b_; }
    const RatMatrix& c() const { return c_; }
    const RatMatrix& d() const { return d_; }

private:
    RatMatrix a_, b_, c_, d_;
};

/// psi = [[D^t, -B^t], [B^t, D^t]], a complex-linear map of C^2 making D(psi∘phi)(0)
/// block lower triangular with identity upper-left block.
inline RatMatrix build_normalizer(const BlockDecomposition& blocks) {
    const RatMatrix dt = blocks.d().transpose();
    const RatMatrix bt = blocks.b().transpose();
    RatMatrix psi(4, 4);
    psi.set_block(0, 0, dt);
    psi.set_block(0, 2, bt.scaled(-1));
    psi.set_block(2, 0, bt);
    psi.set_block(2, 2, dt);
    if (sgn(det(psi)) == 0) throw std::logic_error("build_normalizer: singular normalizer");
    return psi;
}

// ---------------------------------------------------------------------------
// Hénon-like maps

/// Generating data of H_{N,V,eta}: V in (y1, y2), shift eta, iteration count N.
struct HenonSpec {
    Poly V = Poly(2, {"y1", "y2"});
    std::array<Rational, 2> eta{Rational(0), Rational(0)};
    unsigned N = 1;

    void validate() const {
        if (V.num_vars() != 2) throw std::invalid_argument("HenonSpec: V must have 2 variables");
        if (N < 1) throw std::invalid_argument("HenonSpec: N must be >= 1");
    }

    /// Degree bound (l-1)^N with l = deg V; Hénon maps are at least affine, so the
    /// bound is never below 1.
    long degree_bound() const {
        const long l = std::max(V.degree(), 0);
        long b = 1;
        for (unsigned i = 0; i < N; ++i) b *= std::max(l - 1, 1L);
        return std::max(b, 1L);
    }
};

namespace detail {

inline std::vector<Poly> grad_v_in4(const HenonSpec& spec, std::size_t first, std::size_t second) {
    // dV/dy_i with (y1, y2) replaced by variables `first`, `second` of R^4
    std::vector<Poly> sub{Poly::variable(4, first), Poly::variable(4, second)};
    return {poly_compose(spec.V.diff(0), sub), poly_compose(spec.V.diff(1), sub)};
}

inline PolyMap to_canonical(const PolyMap& henon_coords) {
    return permute_coordinates(henon_coords, inverse_permutation(henon_to_canonical()));
}

}  // namespace detail

/// H^eta : (x, y) -> (y + eta, -x + grad V(y)) in canonical coordinates.
inline PolyMap henon_step(const HenonSpec& spec) {
    spec.validate();
    const auto g = detail::grad_v_in4(spec, 2, 3);
    Poly c0 = Poly::variable(4, 2);
    c0.add_term({0, 0, 0, 0}, spec.eta[0]);
    Poly c1 = Poly::variable(4, 3);
    c1.add_term({0, 0, 0, 0}, spec.eta[1]);
    std::vector<Poly> comps{c0, c1, g[0] - Poly::variable(4, 0), g[1] - Poly::variable(4, 1)};
    return detail::to_canonical(PolyMap(4, std::move(comps)));
}

/// (H^eta)^{-1} : (x', y') -> (-y' + grad V(x' - eta), x' - eta).
inline PolyMap henon_inverse_step(const HenonSpec& spec) {
    spec.validate();
    Poly a = Poly::variable(4, 0);
    a.add_term({0, 0, 0, 0}, -spec.eta[0]);
    Poly b = Poly::variable(4, 1);
    b.add_term({0, 0, 0, 0}, -spec.eta[1]);
    std::vector<Poly> shifted{a, b};
    std::vector<Poly> comps{poly_compose(spec.V.diff(0), shifted) - Poly::variable(4, 2),
                            poly_compose(spec.V.diff(1), shifted) - Poly::variable(4, 3), a, b};
    return detail::to_canonical(PolyMap(4, std::move(comps)));
}

/// H_N ∘ g, applied one step at a time from the inside out.
inline PolyMap apply_henon(const HenonSpec& spec, PolyMap g, std::size_t cap = kDefaultTermCap) {
    const PolyMap step = henon_step(spec);
    for (unsigned i = 0; i < spec.N; ++i) g = map_compose(step, g, std::nullopt, cap);
    return g;
}

/// H_N^{-1} ∘ g.
inline PolyMap apply_henon_inverse(const HenonSpec& spec, PolyMap g, std::size_t cap = kDefaultTermCap) {
    const PolyMap step = henon_inverse_step(spec);
    for (unsigned i = 0; i < spec.N; ++i) g = map_compose(step, g, std::nullopt, cap);
    return g;
}

/// H_N = H^eta ∘ ... ∘ H^eta (N copies).
inline PolyMap henon_map(const HenonSpec& spec, std::size_t cap = kDefaultTermCap) {
    return apply_henon(spec, PolyMap::identity(4, canonical_names()), cap);
}

inline PolyMap henon_inverse(const HenonSpec& spec, std::size_t cap = kDefaultTermCap) {
    return apply_henon_inverse(spec, PolyMap::identity(4, canonical_names()), cap);
}

}  // namespace umbrella
