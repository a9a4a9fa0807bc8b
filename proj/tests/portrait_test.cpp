#include "support.hpp"

#include <umbrella/portrait.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace umbrella;
using test_support::P2;

namespace {

VectorField2 golden() {
    return {P2({{{3, 0}, -3}, {{1, 2}, -1}, {{5, 0}, -3}}), P2({{{0, 3}, 1}, {{2, 1}, 4}, {{4, 1}, 7}})};
}

VectorField2 linear(int a, int b, int c, int d) {
    return {P2({{{1, 0}, a}, {{0, 1}, b}}), P2({{{1, 0}, c}, {{0, 1}, d}})};
}

bool times_increase(const Trajectory& tr) {
    for (std::size_t i = 1; i < tr.points.size(); ++i)
        if (!(tr.points[i].time > tr.points[i - 1].time)) return false;
    return true;
}

}  // namespace

TEST(Integrate, GoldenFieldKeepsTheAxesInvariantSymbolically) {
    const auto x = golden();
    const Poly zero(2, plane_names());
    const Poly t = Poly::variable(2, 0, plane_names()), s = Poly::variable(2, 1, plane_names());
    EXPECT_EQ(poly_compose(x.alpha, {zero, s}), zero);
    EXPECT_EQ(poly_compose(x.beta, {t, zero}), zero);
}

TEST(Integrate, BackwardAlongTheVerticalAxis) {
    const auto tr = integrate(golden(), {0, 0.1}, -50, {1e-10, 0.5});
    ASSERT_GT(tr.points.size(), 2u);
    EXPECT_TRUE(tr.backward);
    EXPECT_TRUE(times_increase(tr));
    for (std::size_t i = 1; i < tr.points.size(); ++i) {
        EXPECT_LT(std::abs(tr.points[i].t), 1e-9);
        EXPECT_LT(tr.points[i].s, tr.points[i - 1].s);
    }
    // s' = s^3 backward: s(tau) = s0 / sqrt(1 + 2 s0^2 tau)
    const double expect = 0.1 / std::sqrt(1 + 2 * 0.01 * 50);
    EXPECT_NEAR(tr.points.back().s, expect, 1e-8);
}

TEST(Integrate, ForwardAlongTheHorizontalAxis) {
    const auto tr = integrate(golden(), {0.1, 0}, 20, {1e-10, 0.5});
    for (const auto& p : tr.points) EXPECT_LT(std::abs(p.s), 1e-9);
    EXPECT_LT(tr.points.back().t, 0.1);
    EXPECT_GT(tr.points.back().t, 0);
}

TEST(Integrate, LinearSinkMatchesExponential) {
    for (double tol : {1e-6, 1e-8, 1e-10}) {
        const auto tr = integrate(linear(-1, 0, 0, -1), {1, 1}, 5, {tol, 2});
        EXPECT_EQ(tr.terminated, Termination::ReachedEnd);
        EXPECT_DOUBLE_EQ(tr.points.back().time, 5);
        EXPECT_NEAR(tr.points.back().t, std::exp(-5.0), tol);
        EXPECT_NEAR(tr.points.back().s, std::exp(-5.0), tol);
    }
}

TEST(Integrate, SaddleErrorShrinksWithTolerance) {
    const auto x = linear(-1, 0, 0, 1);
    std::vector<double> errs;
    for (double tol : {1e-5, 1e-7, 1e-9}) {
        const auto tr = integrate(x, {1, 0.01}, 3, {tol, 10});
        const auto& p = tr.points.back();
        const double e = std::hypot(p.t - std::exp(-3.0), p.s - 0.01 * std::exp(3.0));
        EXPECT_LT(e, 100 * tol);
        errs.push_back(e);
    }
    EXPECT_LT(errs[1], errs[0]);
    EXPECT_LT(errs[2], errs[1]);
}

TEST(Integrate, StopsOnTheBoxBoundary) {
    const auto tr = integrate(linear(-1, 0, 0, 1), {0.1, 0.1}, 100, {1e-10, 1});
    EXPECT_EQ(tr.terminated, Termination::LeftBox);
    EXPECT_NEAR(tr.points.back().s, 1, 1e-9);
    EXPECT_NEAR(tr.points.back().time, std::log(10.0), 1e-8);
}

TEST(Integrate, ReachesTheOriginBall) {
    const auto tr = integrate(linear(-1, 0, 0, -1), {0.5, -0.5}, 1000, {1e-10, 1});
    EXPECT_EQ(tr.terminated, Termination::ReachedOrigin);
    EXPECT_LT(std::hypot(tr.points.back().t, tr.points.back().s), kOriginRadius);
}

TEST(Integrate, StepCap) {
    const auto tr = integrate(linear(-1, 0, 0, -1), {0.5, 0.5}, 1000, {1e-10, 1, 5});
    EXPECT_EQ(tr.terminated, Termination::MaxSteps);
    EXPECT_EQ(tr.points.size(), 6u);
}

TEST(Integrate, RejectsBadInput) {
    EXPECT_THROW(integrate(golden(), {1, 0}, 1, {1e-10, 0.5}), std::invalid_argument);
    EXPECT_THROW(integrate(golden(), {0, 0.1}, 1, {0, 0.5}), std::invalid_argument);
}

TEST(Separatrices, GoldenFieldGivesTheTwoAxes) {
    const auto res = separatrices(golden(), 0.5);
    ASSERT_EQ(res.status, SeparatrixStatus::Found);
    ASSERT_EQ(res.directions.size(), 4u);
    ASSERT_EQ(res.arcs.size(), 2u);
    int horizontal = 0, vertical = 0;
    for (const auto& arc : res.arcs) {
        double max_t = 0, max_s = 0;
        for (const auto& p : arc.points) {
            max_t = std::max(max_t, std::abs(p[0]));
            max_s = std::max(max_s, std::abs(p[1]));
        }
        if (max_s < 1e-9 && std::abs(max_t - 0.5) < 1e-9) ++horizontal;
        if (max_t < 1e-9 && std::abs(max_s - 0.5) < 1e-9) ++vertical;
        EXPECT_NEAR(std::abs(arc.points.front()[0]) + std::abs(arc.points.front()[1]), 0.5, 1e-9);
        EXPECT_NEAR(std::abs(arc.points.back()[0]) + std::abs(arc.points.back()[1]), 0.5, 1e-9);
    }
    EXPECT_EQ(horizontal, 1);
    EXPECT_EQ(vertical, 1);
    EXPECT_GT(arc_separation(res.arcs, 1e-6), 1e-3);
    EXPECT_FALSE(arcs_cross(res.arcs));
}

TEST(Separatrices, LinearSaddle) {
    const auto res = separatrices(linear(-1, 0, 0, 1), 1);
    ASSERT_EQ(res.status, SeparatrixStatus::Found);
    ASSERT_EQ(res.arcs.size(), 2u);
    EXPECT_GT(arc_separation(res.arcs), 1e-3);
    EXPECT_FALSE(arcs_cross(res.arcs));
}

TEST(Separatrices, LinearNodeIsDegenerate) {
    EXPECT_EQ(separatrices(linear(-1, 0, 0, -1), 1).status, SeparatrixStatus::Node);
}

TEST(Separatrices, CrossingsAwayFromTheOriginAreDetected) {
    const Arc a{{{-1, -1}, {0, 0}, {1, 1}}, 0}, b{{{-1, 1}, {0, 0}, {1, -1}}, 0};
    EXPECT_FALSE(arcs_cross({a, b}));
    EXPECT_NEAR(arc_separation({a, b}), 2, 1e-15);
    const Arc c{{{0, 0}, {0.5, 0.5}, {1, 0}}, 0}, d{{{0, 0}, {1, 0.2}}, 0};
    EXPECT_TRUE(arcs_cross({c, d}));
    EXPECT_FALSE(arcs_cross({c, d}, 2));
}

TEST(Grid, RejectsZeroSeeds) { EXPECT_THROW(phase_portrait_grid(golden(), 0.5, 0), std::invalid_argument); }

TEST(Grid, GoldenTrajectoriesNeverCrossTheAxes) {
    const auto trs = phase_portrait_grid(golden(), 0.5, 64);
    ASSERT_EQ(trs.size(), 64u);
    for (const auto& tr : trs) {
        EXPECT_TRUE(times_increase(tr));
        const double t0 = tr.points.front().t, s0 = tr.points.front().s;
        for (const auto& p : tr.points) {
            EXPECT_GE(p.t * t0, 0);
            EXPECT_GE(p.s * s0, 0);
            EXPECT_LE(std::max(std::abs(p.t), std::abs(p.s)), 0.5);
        }
    }
}

TEST(Grid, SinkTrajectoriesReachTheOrigin) {
    for (const auto& tr : phase_portrait_grid(linear(-1, 0, 0, -1), 0.5, 10))
        EXPECT_EQ(tr.terminated, Termination::ReachedOrigin);
}

TEST(Grid, SeedLatticeIsDeterministic) {
    const auto s = seed_lattice(1, 4);
    ASSERT_EQ(s.size(), 4u);
    EXPECT_EQ(s[0], (std::array<double, 2>{-0.5, 0.5}));
    EXPECT_EQ(s[3], (std::array<double, 2>{0.5, -0.5}));
    EXPECT_EQ(seed_lattice(1, 5).size(), 5u);
}

TEST(Probe, IdentityFieldMinimumIsTheSpacing) {
    EXPECT_NEAR(zero_isolation_probe(linear(1, 0, 0, 1), 0.5, 64), 0.5 / 64, 1e-15);
}

TEST(Probe, DegenerateFieldVanishesOnALine) {
    EXPECT_EQ(zero_isolation_probe(linear(1, 0, 1, 0), 0.5, 16), 0);
}

TEST(Probe, GoldenFieldHasAnIsolatedZero) {
    EXPECT_GT(zero_isolation_probe(golden(), 0.5, 128), 0);
    EXPECT_THROW(zero_isolation_probe(golden(), 0.5, 4), std::invalid_argument);
}

TEST(Csv, HeaderAndFullPrecision) {
    Trajectory tr;
    tr.points = {{0, 0.1, 1.0 / 3}};
    std::ostringstream os;
    write_csv(os, tr);
    EXPECT_EQ(os.str(), "time,t,s\n0,0.10000000000000001,0.33333333333333331\n");
}
