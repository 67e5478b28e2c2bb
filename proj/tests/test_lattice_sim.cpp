#include <gtest/gtest.h>

#include <cmath>

#include "todashock/lattice_sim.hpp"

using namespace todashock;

namespace {

const StepData& step()
{
    static const StepData d = pure_step(make_background(1, -4));
    return d;
}

double sup_diff(const std::vector<double>& x, const std::vector<double>& y)
{
    double m = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

}  // namespace

TEST(Init, DomainCoversRays)
{
    const LatticeState s = init_steplike(step(), 799);
    EXPECT_LE(s.n_min, -2470);
    EXPECT_GE(s.n_max, 1990);
    EXPECT_EQ(s.a_at(-1), 1.0);
    EXPECT_EQ(s.b_at(-1), -4.0);
    EXPECT_EQ(s.a_at(0), 0.5);
    EXPECT_EQ(s.b_at(0), 0.0);
}

TEST(Init, TooLargeThrows)
{
    EXPECT_THROW(init_steplike(step(), 5e6), std::length_error);
    EXPECT_THROW(init_range(step(), 0, 1), std::invalid_argument);
}

TEST(Evolve, ZeroTimeIsInitialData)
{
    LatticeState s = init_steplike(step(), 0);
    const LatticeState s0 = s;
    evolve_to(s, 0, 0.01);
    EXPECT_EQ(s.a, s0.a);
    EXPECT_EQ(s.b, s0.b);
    EXPECT_EQ(front_detect(s), -1);
}

TEST(Evolve, ConstantBackgroundIsFixed)
{
    StepData flat = pure_step(make_background(1, -4));
    flat.n_lo = -40;
    flat.a.assign(80, 0.5);
    flat.b.assign(80, 0.0);
    LatticeState s = init_range(flat, -20, 20);
    evolve_to(s, 3, 0.01);
    for (long n = -20; n <= 20; ++n) {
        EXPECT_EQ(s.a_at(n), 0.5);
        EXPECT_EQ(s.b_at(n), 0.0);
    }
}

TEST(Evolve, BoundaryFrozen)
{
    LatticeState s = init_steplike(step(), 10);
    const double a0 = s.a.front(), b0 = s.b.front(), a1 = s.a.back(), b1 = s.b.back();
    evolve_to(s, 10, 0.01);
    EXPECT_EQ(s.a.front(), a0);
    EXPECT_EQ(s.b.front(), b0);
    EXPECT_EQ(s.a.back(), a1);
    EXPECT_EQ(s.b.back(), b1);
    EXPECT_DOUBLE_EQ(s.t, 10);
}

TEST(Evolve, LandsOnTargetWithPartialStep)
{
    LatticeState s = init_steplike(step(), 1);
    evolve_to(s, 0.0137, 0.01);
    EXPECT_EQ(s.t, 0.0137);
    EXPECT_THROW(evolve_to(s, 0.001, 0.01), std::invalid_argument);
    EXPECT_THROW(evolve_to(s, 1, 0.0), std::invalid_argument);
}

TEST(Evolve, StepHalvingConverges)
{
    LatticeState s1 = init_steplike(step(), 10), s2 = s1;
    evolve_to(s1, 10, 0.001);
    evolve_to(s2, 10, 0.0005);
    EXPECT_LT(sup_diff(s1.b, s2.b), 1e-8);
}

TEST(Evolve, FourthOrderRate)
{
    LatticeState s0 = init_steplike(step(), 10), s1 = s0, s2 = s0;
    evolve_to(s0, 10, 0.02);
    evolve_to(s1, 10, 0.01);
    evolve_to(s2, 10, 0.005);
    const double r = sup_diff(s0.b, s1.b) / sup_diff(s1.b, s2.b);
    EXPECT_GT(r, 12);
    EXPECT_LT(r, 20);
}

TEST(Evolve, TimeReversal)
{
    LatticeState s = init_steplike(step(), 5);
    const LatticeState s0 = s;
    evolve_to(s, 5, 0.002);
    evolve_to(s, 10, 0.002, -1);
    EXPECT_LT(sup_diff(s.a, s0.a), 1e-7);
    EXPECT_LT(sup_diff(s.b, s0.b), 1e-7);
}

TEST(Evolve, WindowSumDrift)
{
    LatticeState s = init_steplike(step(), 10);
    const long Nw = 100;
    const double s0 = window_sum_b(s, Nw);
    evolve_to(s, 10, 0.01);
    const double rate = (window_sum_b(s, Nw) - s0) / 10;
    EXPECT_NEAR(rate, 2 * (0.25 - 1.0), 1e-6);
}

TEST(Evolve, InstabilityReported)
{
    LatticeState s = init_steplike(step(), 5);
    try {
        evolve_to(s, 5, 1.5);
        FAIL() << "expected an instability";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("a(n) <= 0"), std::string::npos);
    }
}

TEST(Front, LeadingRayAtT200)
{
    LatticeState s = init_steplike(step(), 200);
    evolve_to(s, 200, 0.01);
    const double xi_cr = critical_rays(step().bg).xi_cr;
    EXPECT_NEAR(front_detect(s) / 200.0, xi_cr, 0.05 * xi_cr);
    // raising the threshold never moves the front right
    EXPECT_LE(front_detect(s, 1e-2), front_detect(s, 1e-3));
    EXPECT_LE(front_detect(s, 1e-1), front_detect(s, 1e-2));
}
