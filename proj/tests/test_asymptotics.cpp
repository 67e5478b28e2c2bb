#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "todashock/harness.hpp"

using namespace todashock;

namespace {

struct Fixture {
    StepData d = pure_step(make_background(1, -4));
    std::vector<double> eig = find_eigenvalues(d);
    Resonance res = resonance_status(d);
    AsymptoticModel at(double xi) const { return AsymptoticModel::build(xi, d, eig, res); }
};

const Fixture& fx()
{
    static const Fixture f;
    return f;
}

}  // namespace

TEST(PhaseShift, GoldenAndReal)
{
    const AsymptoticModel m = fx().at(0.8);
    EXPECT_NEAR(m.ps.Delta, 0.8095501878720135, 1e-9);
    EXPECT_LT(m.ps.imag_residual, 1e-9);
    EXPECT_EQ(m.ps.ell, 1);
}

TEST(PhaseShift, StableUnderRefinement)
{
    const AsymptoticModel m = fx().at(0.8);
    const PhaseShift fine = phase_shift(*m.S, fx().d, fx().eig, fx().res, {1e-15, 4, 12});
    EXPECT_NEAR(fine.Delta, m.ps.Delta, 1e-9);
}

TEST(PhaseShift, TrivialBlaschkeLeavesDeltaUnchanged)
{
    const AsymptoticModel m = fx().at(0.8);
    // an eigenvalue outside (q, 0) contributes no Blaschke factor
    const PhaseShift p = phase_shift(*m.S, fx().d, {0.5}, fx().res);
    EXPECT_EQ(p.Delta, m.ps.Delta);
}

TEST(ThetaPhase, RoutesAgreeOnGrid)
{
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        const double t = 50 + 40 * i;
        for (int j = 0; j < 20; ++j) {
            const double xi = -0.4 + 2.4 * j / 19;
            const long n = std::lround(xi * t);
            const AsymptoticModel m = fx().at((double)n / t);
            const double xb = phase_B((double)n, t, *m.S, m.ps.Delta), xl = phase_LU((double)n, t, *m.S, m.ps.Delta);
            worst = std::max(worst, std::abs(xb - xl) / std::max(1.0, std::abs(xb)));
        }
    }
    EXPECT_LT(worst, 1e-10);
}

TEST(ThetaPhase, AtOriginIsMinusDeltaOver4Pi)
{
    const AsymptoticModel m = fx().at(0.8);
    EXPECT_NEAR(phase_LU(0, 0, *m.S, m.ps.Delta), -m.ps.Delta / (4 * std::numbers::pi), 1e-15);
}

TEST(Dirichlet, EigenvalueInGapAndThetaZero)
{
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> Ut(50, 900), Ux(-0.4, 2.0);
    for (int i = 0; i < 100; ++i) {
        const double t = Ut(rng);
        const long n = std::lround(Ux(rng) * t);
        const AsymptoticModel m = fx().at((double)n / t);
        const ThetaPhase p = theta_phase((double)n, t, *m.S, m.ps.Delta);
        const Divisor dv = dirichlet_eigenvalue(p.x, *m.S);
        EXPECT_GE(dv.lambda, m.S->edge().lambda_y - 1e-12);
        EXPECT_LE(dv.lambda, -1 + 1e-12);
        if (i < 10) {
            // the lower-side Abel image of mu is a zero of theta(2A - 1/2 + 2x | 2 tau)
            const Side side = dv.mu < 1 / m.S->y() + 1e-9 || dv.mu > m.S->y() - 1e-9 ? Side::none : Side::lower;
            if (side == Side::lower) {
                const cplx A = m.S->abel(dv.mu, Side::lower);
                const cplx T = 2.0 * m.S->tau();
                const cplx th = theta(2.0 * A - 0.5 + 2 * p.x, T);
                EXPECT_LT(std::abs(th) / std::abs(theta(2.0 * A - 0.5 + 2 * p.x + 0.3, T)), 1e-8);
            }
        }
    }
}

TEST(Dirichlet, PeriodicInX)
{
    const AsymptoticModel m = fx().at(0.8);
    for (double x : {0.05, 0.31, 0.77}) {
        const double l0 = dirichlet_eigenvalue(x, *m.S).lambda;
        EXPECT_NEAR(dirichlet_eigenvalue(x + 1, *m.S).lambda, l0, 1e-12);
        // half shift maps mu to 1/mu
        EXPECT_NEAR(dirichlet_eigenvalue(x + 0.5, *m.S).lambda, l0, 1e-12);
    }
}

TEST(TraceFormulas, Substitutions)
{
    const Background bg = make_background(1, -4);
    const double ly = -4.2;
    const ModulatedWave mid = trace_formulas(0.5 * (bg.b - 2 * bg.a + ly), ly, bg);
    EXPECT_NEAR(mid.b_hat, 0, 1e-15);
    const ModulatedWave edge = trace_formulas(-1, ly, bg);
    EXPECT_NEAR(edge.b_hat, 0.5 * (bg.b - 2 * bg.a + ly + 2), 1e-15);
}

TEST(ModelY, ThetaAndRationalFormsAgree)
{
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> U(-2.5, 2.5);
    for (int k = 0; k < 10; ++k) {
        const double xi = -0.4 + 0.26 * k;
        const AsymptoticModel m = fx().at(xi);
        const double t = 300 + 37 * k;
        const double x = phase_B(xi * t, t, *m.S, m.ps.Delta);
        const Divisor dv = dirichlet_eigenvalue(x, *m.S);
        for (int i = 0; i < 50; ++i) {
            cplx z(U(rng), U(rng));
            if (std::abs(z.imag()) < 1e-3)
                z += cplx(0, 0.01);
            const cplx yt = model_Y_theta(z, x, *m.S), yr = model_Y_rational(z, dv.mu, *m.S);
            EXPECT_LT(std::abs(yt - yr), 1e-8 * std::max(1.0, std::abs(yr)));
        }
    }
}

TEST(ModelY, ExpansionCoefficientIsTwiceBhat)
{
    for (double xi : {-0.3, 0.8, 1.9}) {
        const AsymptoticModel m = fx().at(xi);
        const double t = 640;
        const double x = phase_B(xi * t, t, *m.S, m.ps.Delta);
        const Divisor dv = dirichlet_eigenvalue(x, *m.S);
        const ModulatedWave w = trace_formulas(dv.lambda, m.S->edge().lambda_y, m.S->background());
        EXPECT_NEAR(model_expansion_coefficient(dv, *m.S), 2 * w.b_hat, 1e-7);
        EXPECT_NEAR(model_H2(1e-14, *m.S).real(), 1.0, 1e-12);
    }
}

TEST(ModelY, AtOneBothFormsEqual)
{
    const AsymptoticModel m = fx().at(0.8);
    const double x = 0.123;
    const Divisor dv = dirichlet_eigenvalue(x, *m.S);
    EXPECT_NO_THROW(model_product_Y(1.0, x, dv, *m.S));
}

TEST(ModelVector, NormalisationSymmetryAndJump)
{
    const AsymptoticModel m = fx().at(0.8);
    const double t = 800, n = 640;
    const double x = phase_B(n, t, *m.S, m.ps.Delta);
    const auto m0 = model_vector(0.0, x, *m.S);
    EXPECT_LT(std::abs(m0.first * m0.second - 1.0), 1e-10);
    EXPECT_NEAR(std::abs(model_H(1e-300, *m.S)), 1.0, 1e-14);
    const cplx z(0.3, 0.55);
    const auto a = model_vector(z, x, *m.S), b = model_vector(1.0 / z, x, *m.S);
    EXPECT_LT(std::abs(a.first - b.second), 1e-10);
    EXPECT_LT(std::abs(a.second - b.first), 1e-10);
    // gap jump, "+" = lower side as for the Abel map
    const cplx ph = std::exp(cplx(0, 2 * t * m.S->B() - m.ps.Delta));
    for (double s : {-0.6, -0.3, -2.0}) {
        const auto lo = model_vector(cplx(s, -1e-13), x, *m.S), up = model_vector(cplx(s, 1e-13), x, *m.S);
        EXPECT_LT(std::abs(lo.first - up.first * ph), 1e-8 * std::abs(lo.first));
        EXPECT_LT(std::abs(lo.second - up.second / ph), 1e-8 * std::abs(lo.second));
    }
}

TEST(Asymptotics, PeriodTwoAtLambdaYMinusFour)
{
    EXPECT_LT(period_two_defect(fx().d, 799), 1e-6);
}

TEST(Asymptotics, AgreesWithSimulationAtT200)
{
    LatticeState s = init_steplike(fx().d, 200);
    evolve_to(s, 200, 0.002);
    for (double xi : {0.0, 0.8, 1.6}) {
        const long n = std::lround(xi * 200);
        const ModulatedWave w = fx().at(n / 200.0).at((double)n, 200);
        EXPECT_LT(std::abs(s.b_at(n) - w.b_hat), 2.0 / 200) << xi;
        const double a2 = s.a_at(n) * s.a_at(n) + s.a_at(n - 1) * s.a_at(n - 1);
        EXPECT_LT(std::abs(a2 - w.a2sum_hat), 3.0 / 200) << xi;
    }
}
