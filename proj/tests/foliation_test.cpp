#include "support.hpp"

#include <umbrella/foliation.hpp>

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

using namespace umbrella;
using test_support::P2;

namespace {

const Poly t = Poly::variable(2, 0);
const Poly s = Poly::variable(2, 1);

Poly golden_alpha() { return P2({{{3, 0}, -3}, {{1, 2}, -1}, {{5, 0}, -3}}); }
Poly golden_beta() { return P2({{{0, 3}, 1}, {{2, 1}, 4}, {{4, 1}, 7}}); }

// Hénon map fixing the origin: eta = 0 and V without linear terms.
HenonSpec small_spec(std::mt19937_64& rng, unsigned max_l, unsigned n) {
    HenonSpec spec;
    Poly v(2, {"y1", "y2"});
    for (const auto& e : monomial_basis(2, max_l))
        if (total_degree(e) >= 2 && rng() % 3 != 0) v.add_term(e, test_support::random_rational(rng, 3, 4));
    v.add_term({0, 2}, Rational(1, 2));
    spec.V = v;
    spec.N = n;
    return spec;
}

// 4th-order central difference.
template <class F>
double d5(F&& f, double h) {
    return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h);
}

}  // namespace

TEST(UmbrellaParam, Values) {
    const PolyMap pi = umbrella_param();
    EXPECT_EQ(pi.value_at_origin(), std::vector<Rational>(4, Rational(0)));
    const std::array<double, 2> one{1.0, 1.0};
    const std::vector<double> expect{1.0, 2.0 / 3.0, 1.0, 1.0};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(evaluate(pi[i], one), expect[i]);
    EXPECT_EQ(poly_compose(pi[1], {Poly::constant(2, 1), Poly::constant(2, 1)}), Poly::constant(2, Rational(2, 3)));
}

TEST(UmbrellaParam, SDerivative) {
    const PolyMap pi = umbrella_param();
    const std::vector<Poly> expect{t, Poly(2), Poly(2), Poly::constant(2, 1)};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(pi[i].diff(1), expect[i]);
}

TEST(RhoGradient, VanishesAtOriginAndMatchesSubstitution) {
    const PolyMap g = rho_gradient();
    EXPECT_TRUE(g.fixes_origin());
    const PolyMap gp = map_compose(g, umbrella_param());
    EXPECT_EQ(gp[0], (t * s).scaled(2));
    EXPECT_EQ(gp[1], t.pow(3).scaled(3));
    EXPECT_EQ(gp[2], -(s * s) - t.pow(4).scaled(3));
    EXPECT_EQ(gp[3], (t * t * s).scaled(-2));
}

TEST(RhoGradient, UmbrellaLiesInHypersurface) {
    EXPECT_TRUE(poly_compose(umbrella_rho(), umbrella_param().components()).is_zero());
}

TEST(CharacteristicField, GoldenIdentity) {
    const VectorField2 x = characteristic_field(PolyMap::identity(4));
    EXPECT_EQ(x.alpha, golden_alpha());
    EXPECT_EQ(x.beta, golden_beta());
    EXPECT_EQ(to_string(x.alpha), "-3t^3 - t s^2 - 3t^5");
}

TEST(CharacteristicField, VanishesToSecondOrderForSymplecticMaps) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 6; ++i) {
        const PolyMap phi = henon_map(small_spec(rng, 3, 1 + i % 2));
        const VectorField2 x = characteristic_field(phi);
        EXPECT_TRUE(is_zero(x.alpha.constant_term()));
        EXPECT_TRUE(is_zero(x.beta.constant_term()));
        EXPECT_GE(x.alpha.order(), 2);
        EXPECT_GE(x.beta.order(), 2);
    }
}

TEST(CharacteristicField, LinearSymplecticMap) {
    // shear (x, u, y, v) -> (x, u, y + 2x, v): psi undoes nothing here since B = 0, D = I
    RatMatrix m = RatMatrix::identity(4);
    m(2, 0) = 2;
    const VectorField2 x = characteristic_field(PolyMap::linear(m));
    const auto c = extract_system_coefficients(x);
    EXPECT_TRUE(c.matches_template);
    EXPECT_TRUE(c.consistent);
}

TEST(CharacteristicField, AgreesWithFiniteDifferencesOfTransportedHypersurface) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 3; ++trial) {
        HenonSpec spec = small_spec(rng, 3, 1 + trial % 2);
        spec.V = spec.V.map_coefficients([](const Rational& c) { return Rational(c / 8); });
        const PolyMap phi = henon_map(spec);
        const VectorField2 x = characteristic_field(phi);
        const auto c = extract_system_coefficients(x);
        EXPECT_TRUE(c.matches_template);

        // rho' = rho ∘ phi^{-1} ∘ psi^{-1}, evaluated in floating point
        const RatMatrix psi = build_normalizer(BlockDecomposition::from_matrix(phi.linear_part()));
        const RatMatrix psi_inv = inverse(psi);
        const PolyMap rho_prime_map = map_compose(henon_inverse(spec), PolyMap::linear(psi_inv));
        const CompiledPoly<double> rho_prime(poly_compose(umbrella_rho(), rho_prime_map.components()));
        const PolyMap f = map_compose(apply_linear(psi, phi), umbrella_param());
        std::array<CompiledPoly<double>, 4> fc{CompiledPoly<double>(f[0]), CompiledPoly<double>(f[1]),
                                              CompiledPoly<double>(f[2]), CompiledPoly<double>(f[3])};
        const CompiledPoly<double> ac(x.alpha), bc(x.beta);
        auto f_at = [&](double tt, double ss) {
            std::array<double, 2> p{tt, ss};
            std::array<double, 4> out{};
            for (int i = 0; i < 4; ++i) out[i] = fc[i](std::span<const double>(p));
            return out;
        };
        const double h = 1e-3;
        for (double tt = -0.3; tt <= 0.31; tt += 0.15) {
            for (double ss = -0.3; ss <= 0.31; ss += 0.15) {
                const auto p = f_at(tt, ss);
                std::array<double, 4> grad{}, xt{}, xs{};
                for (int i = 0; i < 4; ++i) {
                    grad[i] = d5(
                        [&](double e) {
                            auto q = p;
                            q[i] += e;
                            return rho_prime(std::span<const double>(q));
                        },
                        h);
                    xt[i] = d5([&](double e) { return f_at(tt + e, ss)[i]; }, h);
                    xs[i] = d5([&](double e) { return f_at(tt, ss + e)[i]; }, h);
                }
                const auto jxs = apply_j(xs), jxt = apply_j(xt);
                double a_num = 0, b_num = 0;
                for (int i = 0; i < 4; ++i) {
                    a_num += jxs[i] * grad[i];
                    b_num -= jxt[i] * grad[i];
                }
                const std::array<double, 2> pt{tt, ss};
                EXPECT_NEAR(ac(std::span<const double>(pt)), a_num, 1e-8) << tt << "," << ss;
                EXPECT_NEAR(bc(std::span<const double>(pt)), b_num, 1e-8) << tt << "," << ss;
            }
        }
    }
}

TEST(CharacteristicField, RejectsMapsNotFixingOrigin) {
    HenonSpec spec;
    spec.V = Poly::variable(2, 0, {"y1", "y2"});  // grad V(0) != 0
    EXPECT_THROW(characteristic_field(henon_map(spec)), std::domain_error);
}

TEST(CharacteristicField, RejectsNonSymplecticMaps) {
    const Poly x = Poly::variable(4, 0);
    const PolyMap phi(4, {x + x * x, Poly::variable(4, 1), Poly::variable(4, 2), Poly::variable(4, 3)});
    EXPECT_THROW(characteristic_field(phi), std::domain_error);
    EXPECT_THROW(jet_foliation(phi, 2), std::domain_error);
    RatMatrix m = RatMatrix::identity(4);
    m(0, 0) = 2;
    EXPECT_THROW(characteristic_field(PolyMap::linear(m)), std::domain_error);
}

TEST(JetFoliation, GoldenTruncated) {
    const auto [a, b] = jet_foliation(PolyMap::identity(4), 3);
    EXPECT_EQ(a.poly, P2({{{3, 0}, -3}, {{1, 2}, -1}}));
    EXPECT_EQ(b.poly, P2({{{0, 3}, 1}, {{2, 1}, 4}}));
    EXPECT_EQ(a.order, 3u);
}

TEST(JetFoliation, OrderZeroIsZero) {
    const auto [a, b] = jet_foliation(PolyMap::identity(4), 0);
    EXPECT_TRUE(a.poly.is_zero());
    EXPECT_TRUE(b.poly.is_zero());
}

TEST(JetFoliation, CommutesWithTruncation) {
    std::mt19937_64 rng(404);
    for (int i = 0; i < 10; ++i) {
        const PolyMap phi = henon_map(small_spec(rng, 3, 1 + i % 2));
        const VectorField2 x = characteristic_field(phi);
        for (unsigned k = 0; k <= 4; ++k) {
            const auto [a, b] = jet_foliation(phi, k);
            EXPECT_EQ(a, jet_truncate(x.alpha, k)) << "map " << i << " k " << k;
            EXPECT_EQ(b, jet_truncate(x.beta, k)) << "map " << i << " k " << k;
            // only the (k+1)-jet of phi is consumed
            const auto [a2, b2] = jet_foliation(phi.truncated(k + 1), k);
            EXPECT_EQ(a2, a);
            EXPECT_EQ(b2, b);
        }
    }
}

TEST(SystemCoefficients, GoldenField) {
    const auto c = extract_system_coefficients({golden_alpha(), golden_beta()});
    EXPECT_EQ(c.g11, 1);
    EXPECT_EQ(c.g12, 0);
    EXPECT_EQ(c.g22, 1);
    EXPECT_EQ(c.a02, 0);
    EXPECT_EQ(c.b12, 0);
    EXPECT_EQ(c.b03, 1);
    EXPECT_FALSE(c.generic);
    EXPECT_TRUE(c.consistent);
    EXPECT_TRUE(c.matches_template);
    EXPECT_EQ(c.alpha_rest, -(t * s * s));
    EXPECT_TRUE(c.beta_rest.is_zero());
}

TEST(SystemCoefficients, ZeroField) {
    const auto c = extract_system_coefficients(VectorField2{});
    for (const auto* q : {&c.g11, &c.g12, &c.g22, &c.a02, &c.b12, &c.b03}) EXPECT_EQ(*q, 0);
    EXPECT_FALSE(c.generic);
}

TEST(SystemCoefficients, DirectTemplateRead) {
    const VectorField2 x{(t * s).scaled(-2) + s * s, (t * t * s).scaled(4) + t * s * s + s.pow(3)};
    // beta carries no t^4 term, so the second g12 reading is 0 and the strict check refuses
    EXPECT_THROW(extract_system_coefficients(x), std::domain_error);
    const auto c = extract_system_coefficients(x, CoefficientCheck::Lenient);
    EXPECT_EQ(c.g12, 1);
    EXPECT_EQ(c.a02, 1);
    EXPECT_EQ(c.g11, 1);
    EXPECT_EQ(c.b12, 1);
    EXPECT_EQ(c.b03, 1);
    EXPECT_TRUE(c.generic);
    EXPECT_FALSE(c.consistent);
    EXPECT_EQ(c.g12_from_beta, 0);
}

TEST(SystemCoefficients, ConsistentWhenBetaCarriesQuarticTerm) {
    const VectorField2 x{(t * s).scaled(-2) + s * s,
                         (t * t * s).scaled(4) + t * s * s + s.pow(3) + t.pow(4).scaled(6)};
    const auto c = extract_system_coefficients(x);
    EXPECT_TRUE(c.consistent);
    EXPECT_TRUE(c.generic);
}

TEST(SystemCoefficients, HenonFieldsAreConsistent) {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 8; ++i) {
        const VectorField2 x = characteristic_field(henon_map(small_spec(rng, 3, 1 + i % 2)));
        const auto c = extract_system_coefficients(x);
        EXPECT_TRUE(c.consistent);
        EXPECT_TRUE(c.matches_template);
    }
}

TEST(SystemCoefficients, ReportsOffTemplateTerms) {
    const VectorField2 x{t * t + t * t * s, s * s};
    const auto c = extract_system_coefficients(x, CoefficientCheck::Lenient);
    EXPECT_FALSE(c.matches_template);
    EXPECT_EQ(c.alpha_rest, t * t + t * t * s);
    EXPECT_EQ(c.beta_rest, s * s);
    EXPECT_EQ(c.a02, 0);
}

TEST(VectorField, RejectsConstantTerms) {
    EXPECT_THROW(VectorField2(t + Poly::constant(2, 1), s), std::invalid_argument);
    EXPECT_THROW(VectorField2(Poly::variable(3, 0), s), std::invalid_argument);
}
