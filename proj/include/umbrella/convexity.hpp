#pragma once

// Local polynomial convexity of E1 ∪ E2 with E1 = R^n_x and E2 = {(A + iI) y}:
// Weinstock's eigenvalue test, Kallin separating polynomials for A in real Jordan form,
// sampled separation checks on curved graphs, and the symplectic area of holomorphic
// curves with its Stokes boundary form.

#include "matrix.hpp"
#include "multipoly.hpp"
#include "symplectic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace umbrella {

// ---------------------------------------------------------------------------
// Weinstock

enum class VerdictKind { Convex, NotConvex, BoundaryCase };

inline const char* to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::Convex: return "Convex";
        case VerdictKind::NotConvex: return "NotConvex";
        case VerdictKind::BoundaryCase: return "BoundaryCase";
    }
    return "?";
}

struct Verdict {
    VerdictKind kind = VerdictKind::Convex;
    std::optional<std::complex<double>> witness;
    std::vector<std::complex<double>> eigenvalues;
};

inline constexpr double kDefaultWeinstockTol = 1e-9;

inline Eigen::MatrixXd to_eigen(const RatMatrix& a) {
    Eigen::MatrixXd m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = to_double(a(i, j));
    return m;
}

/// Purely imaginary means |Re| <= tol·||A||_F; the union fails to be locally
/// polynomially convex when such an eigenvalue has modulus > 1 + tol.
inline Verdict weinstock_decide(const Eigen::MatrixXd& a, double tol = kDefaultWeinstockTol) {
    if (a.rows() != a.cols()) throw std::invalid_argument("weinstock_decide: matrix must be square");
    Verdict v;
    if (a.rows() == 0) return v;
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue computation did not converge");
    const double scale = a.norm();
    double worst = -1, boundary = -1;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const std::complex<double> ev = es.eigenvalues()[i];
        v.eigenvalues.push_back(ev);
        if (std::abs(ev.real()) > tol * scale) continue;
        const double mod = std::abs(ev.imag());
        if (mod > 1 + tol && mod > worst) worst = mod;
        else if (std::abs(mod - 1) <= tol && mod > boundary) boundary = mod;
    }
    std::sort(v.eigenvalues.begin(), v.eigenvalues.end(), [](auto x, auto y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    if (worst > 0) {
        v.kind = VerdictKind::NotConvex;
        v.witness = std::complex<double>(0, worst);
    } else if (boundary > 0) {
        v.kind = VerdictKind::BoundaryCase;
        v.witness = std::complex<double>(0, boundary);
    }
    return v;
}

inline Verdict weinstock_decide(const RatMatrix& a, double tol = kDefaultWeinstockTol) {
    return weinstock_decide(to_eigen(a), tol);
}

/// "2i", "-0.5i", "1.5 + 2i": about twelve significant digits.
inline std::string format_complex(std::complex<double> z) {
    auto num = [](double x) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", x);
        return std::string(buf);
    };
    const bool has_re = std::abs(z.real()) > 0;
    std::string im;
    if (z.imag() != 0) {
        const double mag = std::abs(z.imag());
        im = (mag == 1 ? std::string() : num(mag)) + "i";
    }
    if (!has_re) return im.empty() ? "0" : (z.imag() < 0 ? "-" : "") + im;
    if (im.empty()) return num(z.real());
    return num(z.real()) + (z.imag() < 0 ? " - " : " + ") + im;
}

/// E2 = {(A + iI) y} is Lagrangian iff A is symmetric.
inline bool is_lagrangian_graph(const RatMatrix& a) {
    if (!a.square()) throw std::invalid_argument("is_lagrangian_graph: matrix must be square");
    return a.is_symmetric();
}

// ---------------------------------------------------------------------------
// Real Jordan data

struct RealBlock {
    Rational lambda;
    std::size_t size = 1;
};

/// pair_count copies of C = [[s, -t], [t, s]] with I2 on the block superdiagonal.
struct ComplexBlock {
    Rational s, t;
    std::size_t pair_count = 1;
};

using JordanBlock = std::variant<RealBlock, ComplexBlock>;

struct RealJordanSpec {
    std::vector<JordanBlock> blocks;

    static std::size_t block_dim(const JordanBlock& b) {
        if (const auto* r = std::get_if<RealBlock>(&b)) return r->size;
        return 2 * std::get<ComplexBlock>(b).pair_count;
    }

    std::size_t dim() const {
        std::size_t n = 0;
        for (const auto& b : blocks) n += block_dim(b);
        return n;
    }

    void validate() const {
        if (blocks.empty()) throw std::invalid_argument("Jordan spec has no blocks");
        for (const auto& b : blocks) {
            if (const auto* r = std::get_if<RealBlock>(&b)) {
                if (r->size == 0) throw std::invalid_argument("real Jordan block of size 0");
            } else {
                const auto& c = std::get<ComplexBlock>(b);
                if (c.pair_count == 0) throw std::invalid_argument("complex Jordan block with no pairs");
                if (is_zero(c.t)) throw std::invalid_argument("complex Jordan block needs t != 0");
            }
        }
    }

    RatMatrix to_matrix() const {
        validate();
        const std::size_t n = dim();
        RatMatrix a(n, n);
        std::size_t o = 0;
        for (const auto& b : blocks) {
            if (const auto* r = std::get_if<RealBlock>(&b)) {
                for (std::size_t l = 0; l < r->size; ++l) {
                    a(o + l, o + l) = r->lambda;
                    if (l + 1 < r->size) a(o + l, o + l + 1) = 1;
                }
            } else {
                const auto& c = std::get<ComplexBlock>(b);
                for (std::size_t j = 0; j < c.pair_count; ++j) {
                    const std::size_t p = o + 2 * j;
                    a(p, p) = c.s;
                    a(p, p + 1) = -c.t;
                    a(p + 1, p) = c.t;
                    a(p + 1, p + 1) = c.s;
                    if (j + 1 < c.pair_count) {
                        a(p, p + 2) = 1;
                        a(p + 1, p + 3) = 1;
                    }
                }
            }
            o += block_dim(b);
        }
        return a;
    }
};

/// Reads the block structure off a matrix that is already in real Jordan form.
inline std::optional<RealJordanSpec> detect_real_jordan(const RatMatrix& a) {
    if (!a.square() || a.rows() == 0) return std::nullopt;
    const std::size_t n = a.rows();
    RealJordanSpec spec;
    std::size_t i = 0;
    while (i < n) {
        if (i + 1 < n && !is_zero(a(i + 1, i))) {
            ComplexBlock c{a(i, i), a(i + 1, i), 1};
            auto pair_matches = [&](std::size_t p) {
                return p + 1 < n && a(p, p) == c.s && a(p + 1, p + 1) == c.s && a(p + 1, p) == c.t &&
                       a(p, p + 1) == -c.t;
            };
            if (!pair_matches(i)) return std::nullopt;
            std::size_t p = i;
            while (p + 3 < n && a(p, p + 2) == 1 && a(p + 1, p + 3) == 1 && pair_matches(p + 2)) {
                ++c.pair_count;
                p += 2;
            }
            spec.blocks.emplace_back(c);
            i = p + 2;
        } else {
            RealBlock r{a(i, i), 1};
            std::size_t l = i;
            while (l + 1 < n && a(l, l + 1) == 1 && a(l + 1, l + 1) == r.lambda && is_zero(a(l + 1, l))) {
                ++r.size;
                ++l;
            }
            spec.blocks.emplace_back(r);
            i = l + 1;
        }
    }
    if (!(spec.to_matrix() == a)) return std::nullopt;
    return spec;
}

/// Real Jordan structure of a diagonalizable matrix with simple, well-separated
/// eigenvalues, with eigenvalues rounded to nearby rationals.
inline RealJordanSpec jordan_from_diagonalizable(const RatMatrix& a, double min_gap = 1e-6) {
    if (!a.square()) throw std::invalid_argument("matrix must be square");
    const Eigen::MatrixXd m = to_eigen(a);
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue computation did not converge");
    const auto ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        for (Eigen::Index j = i + 1; j < ev.size(); ++j)
            if (std::abs(ev[i] - ev[j]) <= min_gap) {
                throw std::domain_error("eigenvalues are not separated by more than " + std::to_string(min_gap) +
                                        "; supply the Jordan structure explicitly");
            }
    const double imag_tol = 1e-9 * std::max(1.0, m.norm());
    RealJordanSpec spec;
    std::vector<std::complex<double>> sorted(ev.data(), ev.data() + ev.size());
    std::sort(sorted.begin(), sorted.end(), [](auto x, auto y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    for (const auto& z : sorted) {
        if (std::abs(z.imag()) <= imag_tol) spec.blocks.emplace_back(RealBlock{rationalize(z.real()), 1});
        else if (z.imag() > 0) spec.blocks.emplace_back(ComplexBlock{rationalize(z.real()), rationalize(z.imag()), 1});
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Quadratic forms of Im p

inline std::vector<std::string> z_names(std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back("z" + std::to_string(i + 1));
    return v;
}

inline std::vector<std::string> y_names(std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back("y" + std::to_string(i + 1));
    return v;
}

/// Symmetric matrix of a homogeneous quadratic polynomial.
inline RatMatrix quadratic_form_matrix(const Poly& q) {
    const std::size_t n = q.num_vars();
    RatMatrix m(n, n);
    for (const auto& [e, c] : q.terms()) {
        if (total_degree(e) != 2) throw std::invalid_argument("not a quadratic form: " + to_string(q));
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
            for (std::uint32_t k = 0; k < e[i]; ++k) idx.push_back(i);
        if (idx[0] == idx[1]) {
            m(idx[0], idx[0]) += c;
        } else {
            m(idx[0], idx[1]) += c / 2;
            m(idx[1], idx[0]) += c / 2;
        }
    }
    return m;
}

/// For p = z^t M z with M = Mr + i Mi: Im p on E1 is x^t Mi x and on E2 = {(A + iI)y} it
/// is y^t (A^t Mi A - Mi + A^t Mr + Mr A) y.
inline std::pair<RatMatrix, RatMatrix> imaginary_forms(const RatMatrix& mr, const RatMatrix& mi, const RatMatrix& a) {
    const RatMatrix at = a.transpose();
    return {mi, at * mi * a - mi + at * mr + mr * a};
}

/// Largest m found with Q - m I positive semidefinite (checked exactly); 0 when Q is
/// not positive definite. Scaling Q by c > 0 scales the result by c.
inline Rational definiteness_margin(const RatMatrix& q) {
    if (!q.is_symmetric()) throw std::invalid_argument("definiteness_margin: matrix must be symmetric");
    if (!is_positive_definite(q)) return 0;
    const std::size_t n = q.rows();
    Rational scale = 0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, Rational(abs(q(i, i))));
    const RatMatrix qn = q.scaled(Rational(1) / scale);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(qn), Eigen::EigenvaluesOnly);
    const double lam = es.eigenvalues().minCoeff();
    auto ok = [&](const Rational& m) { return is_positive_semidefinite(qn - RatMatrix::identity(n).scaled(m)); };
    Rational m = lam > 0 ? rationalize(lam, 1e-12, 1'000'000L) : Rational(0);
    if (sgn(m) > 0 && !ok(m)) {
        bool found = false;
        for (double shrink : {1e-12, 1e-9, 1e-6, 1e-3}) {
            const Rational cand = m * (Rational(1) - rationalize(shrink, 1e-15, 1'000'000'000'000L));
            if (ok(cand)) {
                m = cand;
                found = true;
                break;
            }
        }
        for (int h = 0; !found && h < 64; ++h) {
            m /= 2;
            found = ok(m);
        }
        if (!found) m = 0;
    }
    if (sgn(m) <= 0) {
        // fall back to a crude exact bound that always certifies for PD input
        m = 1;
        for (int h = 0; h < 200 && !ok(m); ++h) m /= 2;
    }
    return m * scale;
}

// ---------------------------------------------------------------------------
// Kallin certificates

struct KallinCertificate {
    CPoly p = CPoly(1);
    std::vector<std::vector<Rational>> alphas;  // per block, per coordinate
    std::vector<Rational> block_deltas;
    Rational delta;  // smallest block delta
    RatMatrix qform_L1, qform_L2;
    Rational margin_L1, margin_L2;
};

struct KallinReport {
    bool valid = false;
    RatMatrix qform_L1, qform_L2;
    Rational margin_L1, margin_L2;
    std::vector<std::string> problems;
};

inline constexpr int kMaxDeltaHalvings = 64;

namespace detail {

struct BlockPiece {
    std::vector<Complex> coeffs;  // coefficient of z_l^2, local coordinates
    std::vector<Rational> alphas;
    Rational delta;
};

inline std::pair<RatMatrix, RatMatrix> diag_parts(const std::vector<Complex>& c) {
    RatMatrix mr(c.size(), c.size()), mi(c.size(), c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        mr(i, i) = c[i].re;
        mi(i, i) = c[i].im;
    }
    return {mr, mi};
}

inline bool piece_definite(const std::vector<Complex>& c, const RatMatrix& a) {
    const auto [mr, mi] = diag_parts(c);
    const auto [q1, q2] = imaginary_forms(mr, mi, a);
    return is_negative_definite(q1) && is_positive_definite(q2);
}

// Halve delta from 1 until both forms are definite; coefficients(delta) builds p_j.
template <class Coeffs>
Rational search_delta(Coeffs&& coefficients, const RatMatrix& a) {
    Rational delta = 1;
    for (int h = 0; h <= kMaxDeltaHalvings; ++h) {
        if (piece_definite(coefficients(delta), a)) return delta;
        delta /= 2;
    }
    throw std::logic_error("delta search failed after " + std::to_string(kMaxDeltaHalvings) + " halvings");
}

inline BlockPiece real_piece(const RealBlock& b, const RatMatrix& a) {
    BlockPiece out;
    if (b.size == 1) {
        out.alphas = {Rational(1)};
        out.delta = 1;
        out.coeffs = {Complex(b.lambda, Rational(-1))};
        return out;
    }
    if (is_zero(b.lambda)) {
        throw std::domain_error("inadmissible Jordan block: eigenvalue 0 with size " + std::to_string(b.size));
    }
    const Rational sign = sgn(b.lambda) > 0 ? 1 : -1;
    const Rational lam2 = b.lambda * b.lambda;
    out.alphas = {Rational(1)};
    for (std::size_t l = 1; l < b.size; ++l) out.alphas.push_back(2 * out.alphas.back() / lam2);
    auto coeffs = [&](const Rational& d) {
        std::vector<Complex> c;
        for (const auto& al : out.alphas) c.emplace_back(sign * al, -d);
        return c;
    };
    out.delta = search_delta(coeffs, a);
    out.coeffs = coeffs(out.delta);
    return out;
}

inline BlockPiece complex_piece(const ComplexBlock& b, const RatMatrix& a) {
    BlockPiece out;
    std::vector<Rational> beta{Rational(1)};
    if (!is_zero(b.s)) {
        const Rational s2 = b.s * b.s;
        for (std::size_t j = 1; j < b.pair_count; ++j) beta.push_back(2 * beta.back() / s2);
    } else {
        if (abs(b.t) >= 1) {
            throw std::domain_error("inadmissible Jordan block: purely imaginary eigenvalue with |t| = " +
                                    to_string(Rational(abs(b.t))) + " >= 1");
        }
        const Rational w = 1 - b.t * b.t;
        Rational d = w;  // d_j = beta_j (1 - t^2) - beta_{j-1}
        for (std::size_t j = 1; j < b.pair_count; ++j) {
            const Rational next = 8 * beta.back() * beta.back() * b.t * b.t / d;
            beta.push_back((beta.back() + next) / w);
            d = next;
        }
    }
    for (const auto& bj : beta) {
        out.alphas.push_back(bj);
        out.alphas.push_back(bj);
    }
    auto coeffs = [&](const Rational& d) {
        std::vector<Complex> c;
        for (const auto& al : out.alphas) c.push_back(Complex(b.s, -d) * Complex(al));
        return c;
    };
    if (is_zero(b.s)) {
        // Im p is delta times a fixed form here, so delta = 1; enlarge later weights if
        // the exact check disagrees with the estimate.
        out.delta = 1;
        for (int attempt = 0; attempt < 64 && !piece_definite(coeffs(out.delta), a); ++attempt) {
            for (std::size_t l = 2; l < out.alphas.size(); ++l) out.alphas[l] *= 2;
        }
        if (!piece_definite(coeffs(out.delta), a)) throw std::logic_error("no weights found for purely imaginary block");
    } else {
        out.delta = search_delta(coeffs, a);
    }
    out.coeffs = coeffs(out.delta);
    return out;
}

}  // namespace detail

/// Builds and exactly verifies a separating polynomial for E1 ∪ E2 with A in the real
/// Jordan form described by spec.
inline KallinReport kallin_verify(const KallinCertificate& cert, const RatMatrix& a);

inline KallinCertificate kallin_construct(const RealJordanSpec& spec) {
    spec.validate();
    const RatMatrix a = spec.to_matrix();
    const std::size_t n = a.rows();
    KallinCertificate cert;
    cert.p = CPoly(n, z_names(n));
    std::size_t o = 0;
    bool first = true;
    for (const auto& b : spec.blocks) {
        const std::size_t d = RealJordanSpec::block_dim(b);
        const RatMatrix ab = a.block(o, o, d, d);
        const detail::BlockPiece piece = std::holds_alternative<RealBlock>(b)
                                             ? detail::real_piece(std::get<RealBlock>(b), ab)
                                             : detail::complex_piece(std::get<ComplexBlock>(b), ab);
        for (std::size_t l = 0; l < d; ++l) {
            Exponent e(n, 0);
            e[o + l] = 2;
            cert.p.add_term(e, piece.coeffs[l]);
        }
        cert.alphas.push_back(piece.alphas);
        cert.block_deltas.push_back(piece.delta);
        if (first || piece.delta < cert.delta) cert.delta = piece.delta;
        first = false;
        o += d;
    }
    RatMatrix mr(n, n), mi(n, n);
    for (const auto& [e, c] : cert.p.terms()) {
        for (std::size_t i = 0; i < n; ++i)
            if (e[i] == 2) {
                mr(i, i) = c.re;
                mi(i, i) = c.im;
            }
    }
    std::tie(cert.qform_L1, cert.qform_L2) = imaginary_forms(mr, mi, a);
    cert.margin_L1 = definiteness_margin(cert.qform_L1.scaled(-1));
    cert.margin_L2 = definiteness_margin(cert.qform_L2);
    const KallinReport rep = kallin_verify(cert, a);
    if (!rep.valid) throw std::logic_error("constructed certificate failed verification");
    return cert;
}

/// Recomputes Im p on E1 and on E2 by substituting z = x and z = (A + iI) y into p.
inline KallinReport kallin_verify(const KallinCertificate& cert, const RatMatrix& a) {
    KallinReport rep;
    const std::size_t n = cert.p.num_vars();
    if (!a.square() || a.rows() != n) {
        rep.problems.push_back("matrix size does not match the polynomial");
        return rep;
    }
    for (const auto& [e, c] : cert.p.terms())
        if (total_degree(e) != 2) rep.problems.push_back("p has a term of degree " + std::to_string(total_degree(e)));
    for (std::size_t i = 0; i < n; ++i) {
        Exponent e(n, 0);
        e[i] = 2;
        if (is_zero(cert.p.coefficient(e))) rep.problems.push_back("p has no z" + std::to_string(i + 1) + "^2 term");
    }
    if (!rep.problems.empty()) return rep;

    std::vector<CPoly> on_e1, on_e2;
    const auto names = y_names(n);
    for (std::size_t l = 0; l < n; ++l) {
        on_e1.push_back(CPoly::variable(n, l, names));
        CPoly z(n, names);
        for (std::size_t j = 0; j < n; ++j) {
            Exponent e(n, 0);
            e[j] = 1;
            z.add_term(e, Complex(a(l, j), j == l ? Rational(1) : Rational(0)));
        }
        on_e2.push_back(z);
    }
    rep.qform_L1 = quadratic_form_matrix(imag_part(poly_compose(cert.p, on_e1)));
    rep.qform_L2 = quadratic_form_matrix(imag_part(poly_compose(cert.p, on_e2)));
    if (!is_negative_definite(rep.qform_L1)) rep.problems.push_back("Im p is not negative definite on E1");
    if (!is_positive_definite(rep.qform_L2)) rep.problems.push_back("Im p is not positive definite on E2");
    rep.margin_L1 = definiteness_margin(rep.qform_L1.scaled(-1));
    rep.margin_L2 = definiteness_margin(rep.qform_L2);
    rep.valid = rep.problems.empty() && sgn(rep.margin_L1) > 0 && sgn(rep.margin_L2) > 0;
    return rep;
}

// ---------------------------------------------------------------------------
// Curved surfaces

/// A real n-dimensional surface z = re(w) + i·im(w), w in R^n.
struct Surface {
    PolyMap re, im;

    /// z = x + i phi(x).
    static Surface over_real(const PolyMap& phi) {
        if (!vanishes_to_second_order(phi)) throw std::invalid_argument("phi must vanish to second order at 0");
        return {PolyMap::identity(phi.source_dim()), phi};
    }
    /// z = g(y) + i y, with g = A y + psi(y).
    static Surface over_imag(const PolyMap& g) { return {g, PolyMap::identity(g.source_dim())}; }
    static Surface over_imag(const RatMatrix& a, const PolyMap& psi) {
        if (!vanishes_to_second_order(psi)) throw std::invalid_argument("psi must vanish to second order at 0");
        const PolyMap lin = PolyMap::linear(a);
        std::vector<Poly> comps;
        for (std::size_t i = 0; i < psi.target_dim(); ++i) comps.push_back(lin[i] + psi[i]);
        return over_imag(PolyMap(psi.source_dim(), comps));
    }

    static bool vanishes_to_second_order(const PolyMap& f) {
        for (const auto& c : f.components())
            if (c.order() >= 0 && c.order() < 2) return false;
        return true;
    }

    std::size_t dim() const { return re.source_dim(); }
};

enum class SeparationMode { Strict, Tangential };

struct SeparationReport {
    SeparationMode mode = SeparationMode::Strict;
    double max_im_L1 = -std::numeric_limits<double>::infinity();
    double min_im_L2 = std::numeric_limits<double>::infinity();  // off the origin
    double min_re_L1 = std::numeric_limits<double>::infinity();
    double c_L1 = std::numeric_limits<double>::infinity();  // min of -Im p / |w|^2 on L1
    double c_L2 = std::numeric_limits<double>::infinity();  // min of Im p / |w|^2 on L2
    std::size_t samples = 0;
    bool pass = false;
};

/// Samples both surfaces on a lattice in the parameter ball of the given radius.
/// Strict: Im p <= -c|x|^2 on L1 and Im p >= c|y|^2 on L2 with c > 0.
/// Tangential: p(L1) in the closed right half of the real axis and Im p > 0 on L2 off 0.
inline SeparationReport surface_separation_check(const Surface& l1, const Surface& l2, const CPoly& p, double radius,
                                                 unsigned grid, SeparationMode mode = SeparationMode::Strict) {
    const std::size_t n = p.num_vars();
    if (l1.dim() != n || l2.dim() != n || l1.re.target_dim() != n || l2.re.target_dim() != n) {
        throw std::invalid_argument("surface dimensions must match the polynomial");
    }
    if (grid < 2 || !(radius > 0)) throw std::invalid_argument("grid must be >= 2 and radius positive");
    double total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= grid;
    if (total > 2e7) throw std::invalid_argument("sampling lattice too large");

    const CompiledPoly<std::complex<double>> pc(p);
    auto compile = [](const PolyMap& m) {
        std::vector<CompiledPoly<double>> v;
        for (const auto& c : m.components()) v.emplace_back(c);
        return v;
    };
    const auto r1 = compile(l1.re), i1 = compile(l1.im), r2 = compile(l2.re), i2 = compile(l2.im);

    SeparationReport rep;
    rep.mode = mode;
    double scale = 0;
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> w(n);
    std::vector<std::complex<double>> z(n);
    auto eval = [&](const std::vector<CompiledPoly<double>>& re, const std::vector<CompiledPoly<double>>& im) {
        for (std::size_t i = 0; i < n; ++i)
            z[i] = {re[i](std::span<const double>(w)), im[i](std::span<const double>(w))};
        return pc(std::span<const std::complex<double>>(z));
    };
    while (true) {
        double norm2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = -radius + 2 * radius * static_cast<double>(idx[i]) / (grid - 1);
            norm2 += w[i] * w[i];
        }
        if (norm2 <= radius * radius && norm2 > 0) {
            ++rep.samples;
            const auto v1 = eval(r1, i1);
            rep.max_im_L1 = std::max(rep.max_im_L1, v1.imag());
            rep.min_re_L1 = std::min(rep.min_re_L1, v1.real());
            rep.c_L1 = std::min(rep.c_L1, -v1.imag() / norm2);
            const auto v2 = eval(r2, i2);
            rep.min_im_L2 = std::min(rep.min_im_L2, v2.imag());
            rep.c_L2 = std::min(rep.c_L2, v2.imag() / norm2);
            scale = std::max({scale, std::abs(v1), std::abs(v2)});
        }
        std::size_t k = 0;
        while (k < n && ++idx[k] == grid) idx[k++] = 0;
        if (k == n) break;
    }
    if (rep.samples == 0) return rep;
    if (mode == SeparationMode::Strict) {
        rep.pass = rep.c_L1 > 0 && rep.c_L2 > 0;
    } else {
        const double eps = 64 * std::numeric_limits<double>::epsilon() * scale;
        rep.pass = rep.max_im_L1 <= eps && rep.min_re_L1 >= -eps && rep.min_im_L2 > 0;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Symplectic area

struct Disc {
    double r = 1;
};
struct Annulus {
    double r = 1, R = 2;
};
using AreaDomain = std::variant<Disc, Annulus>;

struct AreaResult {
    double area = 0;
    double boundary_integral = 0;
};

/// Gauss–Legendre nodes and weights on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(unsigned n) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
    std::vector<double> x(n), w(n);
    for (unsigned i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = 0;
            for (unsigned k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
    }
    return {x, w};
}

/// x_j + i y_j = f_j(ζ) with f_j(ζ) = Σ_k coeffs[j][k] ζ^k, as a map (ξ, η) -> (x_1..x_n, y_1..y_n).
inline PolyMap holomorphic_curve(const std::vector<std::vector<Complex>>& coeffs) {
    const std::vector<std::string> names{"xi", "eta"};
    const CPoly zeta = CPoly::variable(2, 0, names) + CPoly::variable(2, 1, names).scaled(Complex(0, 1));
    std::vector<Poly> re, im;
    for (const auto& cs : coeffs) {
        CPoly f(2, names), power = CPoly::constant(2, Complex(1)).with_names(names);
        for (const auto& c : cs) {
            f += power.scaled(c);
            power = power * zeta;
        }
        re.push_back(real_part(f));
        im.push_back(imag_part(f));
    }
    re.insert(re.end(), im.begin(), im.end());
    return PolyMap(2, re);
}

inline bool is_holomorphic_curve(const PolyMap& h) {
    if (h.source_dim() != 2 || h.target_dim() % 2 != 0 || h.target_dim() == 0) return false;
    const std::size_t n = h.target_dim() / 2;
    for (std::size_t j = 0; j < n; ++j) {
        const Poly& x = h[j];
        const Poly& y = h[n + j];
        if (x.diff(0) != y.diff(1) || x.diff(1) != -y.diff(0)) return false;
    }
    return true;
}

/// area = ∫ h^*ω over the domain; boundary_integral = ∮ h^*(Σ x_j dy_j) over its oriented
/// boundary (outer circle counterclockwise, inner circle clockwise).
inline AreaResult symplectic_area(const PolyMap& h, const AreaDomain& domain, unsigned quad_n = 32) {
    if (!is_holomorphic_curve(h)) {
        throw std::domain_error("curve is not holomorphic: components violate the Cauchy-Riemann equations");
    }
    const std::size_t n = h.target_dim() / 2;
    double r0 = 0, r1 = 0;
    if (const auto* d = std::get_if<Disc>(&domain)) {
        r1 = d->r;
    } else {
        const auto& an = std::get<Annulus>(domain);
        r0 = an.r;
        r1 = an.R;
    }
    if (!(r0 >= 0 && r1 > r0)) throw std::invalid_argument("invalid domain radii");

    Poly density(2);
    for (std::size_t j = 0; j < n; ++j) {
        const Poly& x = h[j];
        const Poly& y = h[n + j];
        density += x.diff(0) * y.diff(1) - x.diff(1) * y.diff(0);
    }
    const unsigned deg = static_cast<unsigned>(std::max(h.degree(), 0));
    const unsigned nr = std::max(quad_n, deg + 2);
    const unsigned nth = std::max(4 * quad_n, 4 * deg + 8);
    const auto [gx, gw] = gauss_legendre(nr);
    const CompiledPoly<double> dens(density);

    AreaResult res;
    for (unsigned i = 0; i < nr; ++i) {
        const double r = 0.5 * (r1 - r0) * gx[i] + 0.5 * (r1 + r0);
        double ring = 0;
        for (unsigned k = 0; k < nth; ++k) {
            const double th = 2 * std::numbers::pi * k / nth;
            const std::array<double, 2> p{r * std::cos(th), r * std::sin(th)};
            ring += dens(std::span<const double>(p));
        }
        res.area += 0.5 * (r1 - r0) * gw[i] * r * ring * (2 * std::numbers::pi / nth);
    }

    std::vector<CompiledPoly<double>> xs, ys_xi, ys_eta;
    for (std::size_t j = 0; j < n; ++j) {
        xs.emplace_back(h[j]);
        ys_xi.emplace_back(h[n + j].diff(0));
        ys_eta.emplace_back(h[n + j].diff(1));
    }
    auto circle = [&](double r) {
        double acc = 0;
        for (unsigned k = 0; k < nth; ++k) {
            const double th = 2 * std::numbers::pi * k / nth;
            const std::array<double, 2> p{r * std::cos(th), r * std::sin(th)};
            const std::span<const double> sp(p);
            for (std::size_t j = 0; j < n; ++j) {
                const double dy = ys_xi[j](sp) * (-r * std::sin(th)) + ys_eta[j](sp) * (r * std::cos(th));
                acc += xs[j](sp) * dy;
            }
        }
        return acc * (2 * std::numbers::pi / nth);
    };
    res.boundary_integral = circle(r1) - (r0 > 0 ? circle(r0) : 0.0);
    return res;
}

}  // namespace umbrella
