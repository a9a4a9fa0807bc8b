#include "support.hpp"

#include <umbrella/symplectic.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace umbrella;

namespace {

Poly var4(std::size_t i) { return Poly::variable(4, i); }
Poly y1() { return Poly::variable(2, 0, {"y1", "y2"}); }
Poly y2() { return Poly::variable(2, 1, {"y1", "y2"}); }

HenonSpec random_spec(std::mt19937_64& rng, int max_l, unsigned max_n) {
    std::uniform_int_distribution<int> l_dist(2, max_l);
    std::uniform_int_distribution<unsigned> n_dist(1, max_n);
    HenonSpec spec;
    const int l = l_dist(rng);
    Poly v(2, {"y1", "y2"});
    for (const auto& e : monomial_basis(2, static_cast<unsigned>(l))) {
        if (total_degree(e) == 0) continue;
        if (rng() % 2 == 0 && total_degree(e) != static_cast<unsigned>(l)) continue;
        v.add_term(e, test_support::random_rational(rng, 3, 3));
    }
    // keep the top degree present
    v.add_term({static_cast<std::uint32_t>(l), 0}, 1);
    spec.V = v;
    spec.eta = {test_support::random_rational(rng, 2, 2), test_support::random_rational(rng, 2, 2)};
    spec.N = n_dist(rng);
    return spec;
}

bool all_defects_zero(const PolyMap& f, unsigned k) { return defect_vanishes(symplectic_defect(f, k)); }

}  // namespace

TEST(SymplecticDefect, IdentityVanishes) {
    const PolyMap id = PolyMap::identity(4);
    for (unsigned k = 0; k <= 4; ++k) {
        const auto d = symplectic_defect(id, k);
        ASSERT_EQ(d.size(), 6u);
        EXPECT_TRUE(defect_vanishes(d));
    }
}

TEST(SymplecticDefect, StretchedFirstCoordinate) {
    // phi = (2 x1, x2, x3, x4) in the interleaved ordering x1=x, x2=y, x3=u, x4=v
    const PolyMap phi(4, {var4(0).scaled(2), var4(1), var4(2), var4(3)});
    const auto d = symplectic_defect(phi, 0);
    // Jac(1,2,1,2) = det [[2,0],[0,1]] = 2, Jac(3,4,1,2) = 0, d12 = 1
    EXPECT_EQ(d[0].j, 1u);
    EXPECT_EQ(d[0].k, 2u);
    EXPECT_EQ(d[0].residual.poly, Poly::constant(4, 1));
    for (std::size_t i = 1; i < d.size(); ++i) EXPECT_TRUE(d[i].residual.poly.is_zero());
}

TEST(SymplecticDefect, NonSymplecticCubicHasHigherOrderDefect) {
    const PolyMap phi(4, {var4(0) + var4(0).pow(3), var4(1), var4(2), var4(3)});
    EXPECT_TRUE(all_defects_zero(phi, 1));
    EXPECT_FALSE(all_defects_zero(phi, 2));
}

TEST(SymplecticDefect, DimensionMismatch) {
    EXPECT_THROW(symplectic_defect(PolyMap::identity(3), 1), std::invalid_argument);
}

TEST(Normalizer, IdentityBlocks) {
    const RatMatrix i2 = RatMatrix::identity(2), z2(2, 2);
    EXPECT_EQ(build_normalizer(BlockDecomposition(i2, z2, z2, i2)), RatMatrix::identity(4));
}

TEST(Normalizer, DoubleRotationHenon) {
    HenonSpec spec;
    spec.N = 2;
    const PolyMap phi = henon_map(spec);
    const RatMatrix lin = phi.linear_part();
    // two quarter turns (x, y) -> (y, -x) compose to -I
    EXPECT_EQ(lin, RatMatrix::identity(4).scaled(-1));
    const RatMatrix psi = build_normalizer(BlockDecomposition::from_matrix(lin));
    EXPECT_GT(sgn(det(psi)), 0);
    const RatMatrix prod = psi * lin;
    EXPECT_EQ(prod.block(0, 0, 2, 2), RatMatrix::identity(2));
    EXPECT_EQ(prod.block(0, 2, 2, 2), RatMatrix(2, 2));
}

TEST(Normalizer, UpperRightBlockVanishesForRandomSymplecticLinearParts) {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 20; ++i) {
        // symplectic matrices generated by Hénon steps with quadratic V
        HenonSpec spec;
        Poly v(2, {"y1", "y2"});
        for (const auto& e : monomial_basis(2, 2))
            if (total_degree(e) == 2) v.add_term(e, test_support::random_rational(rng, 3, 2));
        spec.V = v;
        spec.N = 1 + i % 3;
        const RatMatrix lin = henon_map(spec).linear_part();
        const RatMatrix prod = build_normalizer(BlockDecomposition::from_matrix(lin)) * lin;
        EXPECT_EQ(prod.block(0, 2, 2, 2), RatMatrix(2, 2));
        EXPECT_EQ(prod.block(0, 0, 2, 2), RatMatrix::identity(2));
    }
}

TEST(Normalizer, RejectsCorruptedBlocks) {
    // oracle: M is symplectic iff M^t Omega M = Omega
    RatMatrix omega(4, 4);
    omega.set_block(0, 2, RatMatrix::identity(2));
    omega.set_block(2, 0, RatMatrix::identity(2).scaled(-1));
    std::mt19937_64 rng(99);
    int rejected = 0;
    for (int i = 0; i < 40; ++i) {
        HenonSpec spec;
        spec.V = (y1() * y1()).scaled(test_support::random_rational(rng, 3, 2)) + y1() * y2();
        spec.N = 1 + i % 2;
        RatMatrix lin = henon_map(spec).linear_part();
        const std::size_t r = rng() % 4, c = rng() % 4;
        lin(r, c) += Rational(1 + static_cast<int>(rng() % 5), 7);
        const bool symplectic = lin.transpose() * omega * lin == omega;
        bool threw = false;
        try {
            BlockDecomposition::from_matrix(lin);
        } catch (const std::domain_error&) {
            threw = true;
            ++rejected;
        }
        EXPECT_EQ(threw, !symplectic) << "trial " << i;
    }
    EXPECT_GT(rejected, 30);
}

TEST(Henon, RotationForZeroPotential) {
    HenonSpec spec;
    const PolyMap h = henon_map(spec);
    // (x, y) -> (y, -x) with x = (x1, x2) = (x, u) and y = (y1, y2) = (y, v)
    EXPECT_EQ(h, PolyMap(4, {var4(2), var4(3), -var4(0), -var4(1)}));
}

TEST(Henon, CubicPotentialSingleStep) {
    HenonSpec spec;
    spec.V = y1() * y1() * y2();
    const PolyMap h = henon_map(spec);
    const Poly y = var4(2), v = var4(3);
    EXPECT_EQ(h, PolyMap(4, {y, v, (y * v).scaled(2) - var4(0), y * y - var4(1)}));
}

TEST(Henon, DegreeBoundCubicTwoSteps) {
    HenonSpec spec;
    spec.V = y1().pow(3) + y1() * y2() * y2();
    spec.N = 2;
    EXPECT_LE(henon_map(spec).degree(), 4);
    EXPECT_EQ(spec.degree_bound(), 4);
}

TEST(Henon, InverseOfRotation) {
    HenonSpec spec;
    EXPECT_EQ(henon_inverse(spec), PolyMap(4, {-var4(2), -var4(3), var4(0), var4(1)}));
}

TEST(Henon, RoundTripsAreExactIdentity) {
    std::mt19937_64 rng(123);
    const PolyMap id = PolyMap::identity(4);
    for (int i = 0; i < 5; ++i) {
        const HenonSpec spec = random_spec(rng, 4, 3);
        EXPECT_EQ(apply_henon(spec, henon_inverse(spec)), id) << "spec " << i;
        EXPECT_EQ(apply_henon_inverse(spec, henon_map(spec)), id) << "spec " << i;
    }
}

TEST(Henon, SmallRoundTripByDirectComposition) {
    HenonSpec spec;
    spec.V = y1().pow(3) - y2() * y2() + y1();
    spec.eta = {Rational(1, 2), Rational(-1)};
    spec.N = 2;
    EXPECT_EQ(map_compose(henon_map(spec), henon_inverse(spec)), PolyMap::identity(4));
    EXPECT_EQ(map_compose(henon_inverse(spec), henon_map(spec)), PolyMap::identity(4));
}

TEST(Henon, InverseHasSameDegree) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 5; ++i) {
        const HenonSpec spec = random_spec(rng, 4, 2);
        EXPECT_EQ(henon_inverse(spec).degree(), henon_map(spec).degree());
    }
}

TEST(Henon, SymplecticAndUnimodular) {
    std::mt19937_64 rng(2718);
    for (int i = 0; i < 5; ++i) {
        const HenonSpec spec = random_spec(rng, 4, 3);
        const PolyMap h = henon_map(spec);
        for (unsigned k = 0; k <= 4; ++k) EXPECT_TRUE(all_defects_zero(h, k)) << "spec " << i << " k " << k;
        EXPECT_LE(h.degree(), spec.degree_bound());
    }
    for (int i = 0; i < 4; ++i) {
        const HenonSpec spec = random_spec(rng, 3, 2);
        EXPECT_EQ(jacobian_determinant(henon_map(spec)), Poly::constant(4, 1));
    }
}

TEST(Henon, InvalidSpec) {
    HenonSpec spec;
    spec.N = 0;
    EXPECT_THROW(henon_map(spec), std::invalid_argument);
    spec.N = 1;
    spec.V = Poly::variable(3, 0);
    EXPECT_THROW(henon_map(spec), std::invalid_argument);
}

TEST(MapCompose, RightIdentity) {
    std::mt19937_64 rng(1);
    std::vector<Poly> comps;
    for (int i = 0; i < 4; ++i) comps.push_back(test_support::random_poly(rng, 4, 3, 5));
    const PolyMap f(4, comps);
    EXPECT_EQ(map_compose(f, PolyMap::identity(4)), f);
}

TEST(MapCompose, LinearAfterIdentity) {
    RatMatrix psi{{1, 2, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {3, 0, 0, 1}};
    EXPECT_EQ(map_compose(PolyMap::linear(psi), PolyMap::identity(4)), PolyMap::linear(psi));
    EXPECT_EQ(apply_linear(psi, PolyMap::identity(4)), PolyMap::linear(psi));
}

TEST(MapCompose, Associative) {
    std::mt19937_64 rng(17);
    auto rand_map = [&] {
        std::vector<Poly> c;
        for (int i = 0; i < 2; ++i) c.push_back(test_support::random_poly(rng, 2, 2, 3));
        return PolyMap(2, c);
    };
    for (int i = 0; i < 5; ++i) {
        const PolyMap f = rand_map(), g = rand_map(), h = rand_map();
        EXPECT_EQ(map_compose(map_compose(f, g), h), map_compose(f, map_compose(g, h)));
    }
}

TEST(MapCompose, DimensionMismatch) {
    EXPECT_THROW(map_compose(PolyMap::identity(4), PolyMap::identity(2)), std::invalid_argument);
}

TEST(Coordinates, PermutationRoundTrip) {
    const std::vector<std::size_t> perm{2, 0, 3, 1};
    std::mt19937_64 rng(4);
    std::vector<Poly> comps;
    for (int i = 0; i < 4; ++i) comps.push_back(test_support::random_poly(rng, 4, 3, 4));
    const PolyMap f(4, comps);
    EXPECT_EQ(permute_coordinates(permute_coordinates(f, perm), inverse_permutation(perm)), f);
}
