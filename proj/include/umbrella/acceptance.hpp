#pragma once

// The acceptance suite: ten end-to-end checks, each against an oracle that does not
// share code with the computation it checks. Used by the test binary and by
// `umbrella selftest`.

#include "convexity.hpp"
#include "foliation.hpp"
#include "local_algebra.hpp"
#include "portrait.hpp"
#include "symplectic.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace umbrella::acceptance {

struct Result {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

inline constexpr std::uint64_t kDefaultSeed = 20240611;

namespace detail {

inline Rational rnd(std::mt19937_64& rng, int span, int max_den) {
    std::uniform_int_distribution<int> num(-span, span), den(1, max_den);
    Rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

inline Poly plane(std::initializer_list<std::pair<Exponent, Rational>> terms) {
    Poly p(2, plane_names());
    for (const auto& [e, c] : terms) p.add_term(e, c);
    return p;
}

inline VectorField2 golden_field() {
    return {plane({{{3, 0}, -3}, {{1, 2}, -1}, {{5, 0}, -3}}), plane({{{0, 3}, 1}, {{2, 1}, 4}, {{4, 1}, 7}})};
}

inline HenonSpec random_henon(std::mt19937_64& rng, int max_l, unsigned max_n, bool fix_origin) {
    HenonSpec spec;
    const int l = std::uniform_int_distribution<int>(2, max_l)(rng);
    Poly v(2, {"y1", "y2"});
    for (const auto& e : monomial_basis(2, static_cast<unsigned>(l))) {
        const unsigned d = total_degree(e);
        if (d == 0 || (fix_origin && d < 2)) continue;
        if (rng() % 2 == 0 && d != static_cast<unsigned>(l)) continue;
        v.add_term(e, rnd(rng, 3, 3));
    }
    v.add_term({static_cast<std::uint32_t>(l), 0}, 1);
    if (fix_origin) v.add_term({0, 2}, Rational(1, 2));
    spec.V = v;
    if (!fix_origin) spec.eta = {rnd(rng, 2, 2), rnd(rng, 2, 2)};
    spec.N = std::uniform_int_distribution<unsigned>(1, max_n)(rng);
    return spec;
}

inline RealJordanSpec random_admissible(std::mt19937_64& rng) {
    RealJordanSpec spec;
    const std::size_t target = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    std::size_t n = 0;
    while (n < target) {
        const int kind = std::uniform_int_distribution<int>(0, 3)(rng);
        const std::size_t want = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
        if (kind <= 1 || target - n < 2) {
            const std::size_t size = std::min(want, target - n);
            Rational lam = rnd(rng, 6, 3);
            if (size > 1 && is_zero(lam)) lam = 1;
            spec.blocks.emplace_back(RealBlock{lam, size});
            n += size;
        } else {
            const std::size_t pairs = std::min(want, (target - n) / 2);
            const Rational s = kind == 2 ? Rational(0) : rnd(rng, 6, 3);
            Rational t = rnd(rng, 6, 7);
            if (is_zero(t)) t = Rational(1, 3);
            if (is_zero(s) && abs(t) >= 1) t = Rational(1) / (abs(t) + 1);
            spec.blocks.emplace_back(ComplexBlock{s, t, pairs});
            n += 2 * pairs;
        }
    }
    return spec;
}

// Sylvester resultant of univariate polynomials given low-to-high.
inline Rational resultant(const std::vector<Rational>& f, const std::vector<Rational>& g) {
    const std::size_t m = f.size() - 1, n = g.size() - 1;
    RatMatrix syl(m + n, m + n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i <= m; ++i) syl(r, r + i) = f[m - i];
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t i = 0; i <= n; ++i) syl(n + r, r + i) = g[n - i];
    return det(syl);
}

inline double im_p(const CPoly& p, const std::vector<std::complex<double>>& z) {
    return CompiledPoly<std::complex<double>>(p)(std::span<const std::complex<double>>(z)).imag();
}

class Checker {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok && failures_.size() < 4) failures_.push_back(what);
        all_ &= ok;
    }
    bool ok() const { return all_; }
    std::string failures() const {
        std::string s;
        for (const auto& f : failures_) s += (s.empty() ? "" : "; ") + f;
        return s;
    }

private:
    bool all_ = true;
    std::vector<std::string> failures_;
};

}  // namespace detail

inline Result golden_foliation() {
    detail::Checker c;
    const auto start = std::chrono::steady_clock::now();
    const VectorField2 x = characteristic_field(PolyMap::identity(4));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const VectorField2 expected = detail::golden_field();
    c.expect(x.alpha == expected.alpha, "alpha = " + to_string(x.alpha));
    c.expect(x.beta == expected.beta, "beta = " + to_string(x.beta));
    c.expect(secs < 1, "took " + std::to_string(secs) + " s");
    return {1, "golden foliation of the identity", c.ok(),
            c.ok() ? "alpha = " + to_string(x.alpha) + ", beta = " + to_string(x.beta) : c.failures()};
}

inline Result multiplicity_of_golden_field() {
    detail::Checker c;
    const auto start = std::chrono::steady_clock::now();
    const auto rep = multiplicity(detail::golden_field(), 12);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    // Leading cubic forms alpha_3 = -3t^3 - t s^2 and beta_3 = s^3 + 4t^2 s. With no common
    // projective zero, mu = 3 * 3 (Bezout). Zeros with s != 0: resultant of the forms at
    // s = 1; the zero s = 0 is excluded since alpha_3(1, 0) = -3.
    const Rational res = detail::resultant({0, -1, 0, -3}, {1, 0, 4});
    c.expect(!is_zero(res), "leading forms share a factor");
    const std::size_t oracle = 3 * 3;
    c.expect(rep.status == MultiplicityStatus::Finite, "not certified up to k = 12");
    c.expect(rep.mu0 && *rep.mu0 == oracle, "mu0 = " + (rep.mu0 ? std::to_string(*rep.mu0) : std::string("none")));
    c.expect(secs < 10, "took " + std::to_string(secs) + " s");
    return {2, "multiplicity of the golden field", c.ok(),
            c.ok() ? "mu0 = 9 certified at k = " + std::to_string(*rep.certified_at) + ", resultant " + to_string(res)
                   : c.failures()};
}

inline Result henon_suite(std::uint64_t seed) {
    detail::Checker c;
    std::mt19937_64 rng(seed);
    const PolyMap id = PolyMap::identity(4);
    std::ostringstream info;
    for (int i = 0; i < 5; ++i) {
        const HenonSpec spec = detail::random_henon(rng, 4, 3, false);
        const PolyMap h = henon_map(spec);
        const std::string tag = "spec " + std::to_string(i);
        for (unsigned k = 0; k <= 4; ++k)
            c.expect(defect_vanishes(symplectic_defect(h, k)), tag + ": defect at order " + std::to_string(k));
        c.expect(apply_henon(spec, henon_inverse(spec)) == id, tag + ": H o H^-1 != id");
        c.expect(apply_henon_inverse(spec, h) == id, tag + ": H^-1 o H != id");
        c.expect(h.degree() <= spec.degree_bound(), tag + ": degree above bound");
        info << (i ? ", " : "") << "l=" << spec.V.degree() << " N=" << spec.N << " deg=" << h.degree();
    }
    return {3, "Henon maps are exact symplectic automorphisms", c.ok(), c.ok() ? info.str() : c.failures()};
}

inline Result kallin_case_one() {
    detail::Checker c;
    const auto cert = kallin_construct(RealJordanSpec{{RealBlock{1, 1}}});
    c.expect(cert.qform_L1 == RatMatrix{{-1}}, "qform_L1 = " + to_string(cert.qform_L1));
    c.expect(cert.qform_L2 == RatMatrix{{2}}, "qform_L2 = " + to_string(cert.qform_L2));
    c.expect(cert.margin_L1 == 1 && cert.margin_L2 == 2, "margins");
    // Im((lambda - i) z^2) on E1 is -x^2 and on E2 is (lambda^2 + 1) y^2, per coordinate.
    const auto both = kallin_construct(RealJordanSpec{{RealBlock{1, 1}, RealBlock{-1, 1}}});
    c.expect(both.qform_L1 == RatMatrix({{-1, 0}, {0, -1}}), "combined qform_L1 = " + to_string(both.qform_L1));
    c.expect(both.qform_L2 == RatMatrix({{2, 0}, {0, 2}}), "combined qform_L2 = " + to_string(both.qform_L2));
    c.expect(both.p.coefficient({2, 0}) == Complex(1, -1) && both.p.coefficient({0, 2}) == Complex(-1, -1),
             "combined p = " + to_string(both.p));
    c.expect(kallin_verify(both, RatMatrix({{1, 0}, {0, -1}})).valid, "combined certificate invalid");
    return {4, "Kallin certificate for a real eigenvalue", c.ok(),
            c.ok() ? "p = " + to_string(cert.p) + ", forms (-1) and (2)" : c.failures()};
}

inline Result kallin_at_scale(std::uint64_t seed) {
    detail::Checker c;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    int failures = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto spec = detail::random_admissible(rng);
        const RatMatrix a = spec.to_matrix();
        const std::size_t n = a.rows();
        try {
            const auto cert = kallin_construct(spec);
            const auto rep = kallin_verify(cert, a);
            bool ok = rep.valid && sgn(rep.margin_L1) > 0 && sgn(rep.margin_L2) > 0;
            for (int k = 0; k < 10 && ok; ++k) {
                std::vector<std::complex<double>> e1(n), e2(n);
                for (std::size_t i = 0; i < n; ++i) e1[i] = g(rng);
                for (std::size_t i = 0; i < n; ++i) {
                    double ay = 0;
                    for (std::size_t j = 0; j < n; ++j) ay += to_double(a(i, j)) * e1[j].real();
                    e2[i] = {ay, e1[i].real()};
                }
                ok = detail::im_p(cert.p, e1) < 0 && detail::im_p(cert.p, e2) > 0;
            }
            if (!ok) ++failures;
            c.expect(ok, "spec with matrix " + to_string(a));
        } catch (const std::exception& e) {
            ++failures;
            c.expect(false, std::string("construction failed: ") + e.what());
        }
    }
    return {5, "Kallin certificates for 50 random admissible Jordan forms", c.ok(),
            c.ok() ? "50 verified, 0 failures" : std::to_string(failures) + " failures: " + c.failures()};
}

inline Result weinstock(std::uint64_t seed) {
    detail::Checker c;
    const auto rot = weinstock_decide(RatMatrix({{0, -2}, {2, 0}}));
    // lambda^2 + 4 = 0
    c.expect(rot.kind == VerdictKind::NotConvex && rot.witness && format_complex(*rot.witness) == "2i",
             "rotation by 2 gives " + std::string(to_string(rot.kind)));
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + trial % 6;
        RatMatrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = detail::rnd(rng, 9, 5);
        c.expect(weinstock_decide(a).kind == VerdictKind::Convex, "symmetric " + to_string(a));
    }
    const RatMatrix unit{{0, -1}, {1, 0}};
    const auto b = weinstock_decide(unit);
    c.expect(b.kind == VerdictKind::BoundaryCase, "unit rotation gives " + std::string(to_string(b.kind)));
    bool refused = false;
    try {
        (void)kallin_construct(*detect_real_jordan(unit));
    } catch (const std::domain_error&) {
        refused = true;
    }
    c.expect(refused, "boundary case produced a certificate");
    return {6, "Weinstock eigenvalue criterion", c.ok(),
            c.ok() ? "NotConvex with witness 2i; 50 symmetric Convex; unit rotation BoundaryCase" : c.failures()};
}

inline Result stokes_area(std::uint64_t seed) {
    detail::Checker c;
    const auto line = symplectic_area(holomorphic_curve({{0, 1}, {}}), Annulus{1, 2});
    c.expect(std::abs(line.area - 3 * std::numbers::pi) < 1e-8, "annulus area " + format_double(line.area));
    c.expect(std::abs(line.boundary_integral - 3 * std::numbers::pi) < 1e-8,
             "annulus boundary " + format_double(line.boundary_integral));
    std::mt19937_64 rng(seed);
    std::ostringstream info;
    for (int i = 0; i < 3; ++i) {
        const double R = 0.9;
        std::vector<std::vector<Complex>> coeffs(2);
        double expected = 0;  // pi sum k |c_k|^2 R^(2k)
        for (auto& comp : coeffs) {
            const int deg = std::uniform_int_distribution<int>(1, 5)(rng);
            for (int k = 0; k <= deg; ++k) {
                Complex ck(detail::rnd(rng, 3, 2), detail::rnd(rng, 3, 2));
                if (k == deg && is_zero(ck)) ck = Complex(1);
                comp.push_back(ck);
                const double m2 = to_double(ck.re * ck.re + ck.im * ck.im);
                expected += std::numbers::pi * k * m2 * std::pow(R, 2 * k);
            }
        }
        const auto r = symplectic_area(holomorphic_curve(coeffs), Disc{R});
        const double scale = std::max(1.0, std::abs(r.area));
        c.expect(std::abs(r.area - r.boundary_integral) <= 1e-8 * scale, "curve " + std::to_string(i) + ": Stokes");
        c.expect(std::abs(r.area - expected) <= 1e-8 * scale, "curve " + std::to_string(i) + ": closed form");
        c.expect(r.area > 0, "curve " + std::to_string(i) + ": area not positive");
        info << (i ? ", " : "") << format_double(r.area);
    }
    return {7, "area equals the Stokes boundary integral", c.ok(),
            c.ok() ? "annulus 3pi; curves " + info.str() : c.failures()};
}

inline Result portrait() {
    detail::Checker c;
    const VectorField2 x = detail::golden_field();
    const Poly zero(2, plane_names());
    const Poly t = Poly::variable(2, 0, plane_names()), s = Poly::variable(2, 1, plane_names());
    c.expect(poly_compose(x.alpha, {zero, s}) == zero, "alpha(0, s) != 0");
    c.expect(poly_compose(x.beta, {t, zero}) == zero, "beta(t, 0) != 0");
    double dev = 0;
    for (const auto& p : integrate(x, {0, 0.1}, -50, {1e-10, 0.5}).points) dev = std::max(dev, std::abs(p.t));
    for (const auto& p : integrate(x, {0.1, 0}, 50, {1e-10, 0.5}).points) dev = std::max(dev, std::abs(p.s));
    c.expect(dev < 1e-9, "axis deviation " + format_double(dev));
    const double probe = zero_isolation_probe(x, 0.5, 128);
    c.expect(probe > 0, "probe minimum " + format_double(probe));
    const auto sep = separatrices(x, 0.5);
    int horiz = 0, vert = 0;
    for (const auto& arc : sep.arcs) {
        double mt = 0, ms = 0;
        for (const auto& p : arc.points) {
            mt = std::max(mt, std::abs(p[0]));
            ms = std::max(ms, std::abs(p[1]));
        }
        horiz += ms < 1e-9 && mt > 0.4;
        vert += mt < 1e-9 && ms > 0.4;
    }
    c.expect(sep.arcs.size() == 2 && horiz == 1 && vert == 1, "separatrices are not the two axes");
    const double gap = arc_separation(sep.arcs, 1e-6);
    c.expect(gap > 1e-3 && !arcs_cross(sep.arcs), "arc separation " + format_double(gap));
    return {8, "phase portrait of the golden field", c.ok(),
            c.ok() ? "axis deviation " + format_double(dev) + ", probe min " + format_double(probe) + ", arc gap " +
                         format_double(gap)
                   : c.failures()};
}

inline Result jet_functoriality(std::uint64_t seed) {
    detail::Checker c;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < 10; ++i) {
        const PolyMap phi = henon_map(detail::random_henon(rng, 3, 1 + i % 2, true));
        const VectorField2 x = characteristic_field(phi);
        for (unsigned k = 0; k <= 4; ++k) {
            const auto [a, b] = jet_foliation(phi.truncated(k + 1), k);
            c.expect(a == jet_truncate(x.alpha, k) && b == jet_truncate(x.beta, k),
                     "map " + std::to_string(i) + " at k = " + std::to_string(k));
        }
    }
    return {9, "jets of the foliation commute with truncation", c.ok(), c.ok() ? "10 maps, k = 0..4" : c.failures()};
}

inline Result tangential_example() {
    detail::Checker c;
    const std::vector<std::string> names{"x", "u"};
    const Poly x = Poly::variable(2, 0, names), u = Poly::variable(2, 1, names);
    const PolyMap flat(2, {Poly(2, names), Poly(2, names)});
    const PolyMap cube(2, {x.pow(3), u.pow(3)});
    CPoly p(2, {"z", "w"});
    p.add_term({2, 0}, Complex(1));
    p.add_term({0, 2}, Complex(1));
    const auto rep = surface_separation_check(Surface::over_real(flat), Surface::over_real(cube), p, 0.5, 41,
                                              SeparationMode::Tangential);
    c.expect(rep.pass, "tangential check failed");
    c.expect(rep.max_im_L1 <= 0 && rep.min_re_L1 >= 0, "p(L1) leaves [0, inf)");
    c.expect(rep.min_im_L2 > 0, "Im p on L2 not positive");
    return {10, "tangential pair separated by z^2 + w^2", c.ok(),
            c.ok() ? "min Im p on L2 " + format_double(rep.min_im_L2) : c.failures()};
}

inline std::vector<std::function<Result()>> suite(std::uint64_t seed = kDefaultSeed) {
    return {golden_foliation,
            multiplicity_of_golden_field,
            [seed] { return henon_suite(seed); },
            kallin_case_one,
            [seed] { return kallin_at_scale(seed + 1); },
            [seed] { return weinstock(seed + 2); },
            [seed] { return stokes_area(seed + 3); },
            portrait,
            [seed] { return jet_functoriality(seed + 4); },
            tangential_example};
}

/// Runs every check; an exception inside a check counts as a failure.
inline std::vector<Result> run_all(std::uint64_t seed = kDefaultSeed) {
    std::vector<Result> out;
    int id = 0;
    for (const auto& check : suite(seed)) {
        ++id;
        const auto start = std::chrono::steady_clock::now();
        Result r;
        try {
            r = check();
        } catch (const std::exception& e) {
            r = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what()};
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.push_back(std::move(r));
    }
    return out;
}

inline std::string format_line(const Result& r) {
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.3f", r.seconds);
    return std::string(r.pass ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.title + " (" + secs +
           " s): " + r.detail;
}

}  // namespace umbrella::acceptance
