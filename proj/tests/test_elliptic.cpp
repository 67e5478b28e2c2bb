#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/ellint_1.hpp>

#include "todashock/elliptic.hpp"

using namespace todashock;

namespace {

Surface surface_at(double xi)
{
    const Background bg = make_background(1, -4);
    return Surface(GFunction(bg, solve_whitham_edge(xi, bg)));
}

cplx theta_naive(cplx v, cplx T, int K = 80)
{
    using std::numbers::pi;
    cplx s = 0;
    for (int k = -K; k <= K; ++k)
        s += std::exp(cplx(0, pi) * (double)(k * k) * T + cplx(0, 2 * pi * k) * v);
    return s;
}

}  // namespace

TEST(Theta, MatchesLongSum)
{
    const cplx T(0.1, 0.7);
    for (cplx v : {cplx(0.3, 0.1), cplx(-0.2, 0.9), cplx(0.45, -1.6)})
        EXPECT_LT(std::abs(theta(v, T) - theta_naive(v, T)), 1e-12 * std::abs(theta_naive(v, T)));
}

TEST(Theta, QuasiPeriodicity)
{
    using std::numbers::pi;
    const Surface S = surface_at(0.8);
    const cplx T = 2.0 * S.tau();
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int i = 0; i < 20; ++i) {
        const cplx v(U(rng), 0.3 * U(rng));
        const cplx t0 = theta(v, T);
        EXPECT_LT(std::abs(theta(v + 1.0, T) - t0), 1e-12 * std::abs(t0));
        const cplx shifted = theta(v + T, T) * std::exp(cplx(0, pi) * T + cplx(0, 2 * pi) * v);
        EXPECT_LT(std::abs(shifted - t0), 1e-12 * std::abs(t0));
    }
}

TEST(Theta, Duplication)
{
    const Surface S = surface_at(0.8);
    const cplx tau = S.tau();
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int i = 0; i < 20; ++i) {
        const cplx v(U(rng), 0.2 * U(rng));
        const cplx lhs = theta(v, tau) * theta(v - 0.5, tau);
        const cplx rhs = theta(2.0 * v - 0.5, 2.0 * tau) * theta(0.5, 2.0 * tau);
        EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(rhs)));
    }
}

TEST(Theta, KmaxFormula)
{
    EXPECT_EQ(theta_kmax(1.0), (int)std::ceil(std::sqrt(16 * std::log(10.0) / std::numbers::pi)) + 2);
    EXPECT_THROW(theta(0.0, cplx(0.1, 0.0)), std::domain_error);
}

TEST(Surface, GoldenPeriods)
{
    const Surface S = surface_at(0.8);
    EXPECT_NEAR(S.Gamma(), 1.894088079434195, 1e-12);
    EXPECT_NEAR(S.Kb(), 0.32410936896672643, 1e-12);
    EXPECT_NEAR(S.tau().imag(), 0.3422326263344046, 1e-12);
    EXPECT_NEAR(S.lambda_h(), -2.550928426873074, 1e-11);
}

TEST(Surface, PeriodsMatchLegendreForm)
{
    for (double xi : {-0.3, 0.8, 1.9}) {
        const Surface S = surface_at(xi);
        const double q = S.background().q, y = S.y();
        // roots a < b < c < d
        const double a = 1 / q, b = 1 / y, c = y, d = q;
        const double den = std::sqrt((c - a) * (d - b));
        const double k2 = (c - b) * (d - a) / ((c - a) * (d - b));
        const double K = boost::math::ellint_1(std::sqrt(k2)), Kp = boost::math::ellint_1(std::sqrt(1 - k2));
        EXPECT_NEAR(S.Gamma(), 4 * K / den, 1e-11);
        EXPECT_NEAR(S.Kb(), 2 * Kp / den, 1e-11);
        EXPECT_NEAR(S.tau().imag(), Kp / K, 1e-11);
    }
}

TEST(Surface, PeriodsPurelyImaginary)
{
    for (double xi : {-0.4, 0.5, 1.2, 2.0}) {
        const Surface S = surface_at(xi);
        EXPECT_LT(std::abs(S.tau().real()), 1e-10);
        EXPECT_LT(std::abs(S.Lambda().real()), 1e-10);
        EXPECT_LT(std::abs(S.U().real()), 1e-10);
        EXPECT_GT(S.tau().imag(), 0);
        const cplx r = cplx(0, 2 * S.B()) + xi * S.Lambda() + S.U();
        EXPECT_LT(std::abs(r), 1e-9);
    }
}

TEST(Surface, LambdaIsXiDerivativeOfB)
{
    const Background bg = make_background(1, -4);
    const double h = 1e-4, xi = 0.8;
    const double bp = GFunction(bg, solve_whitham_edge(xi + h, bg)).B();
    const double bm = GFunction(bg, solve_whitham_edge(xi - h, bg)).B();
    const Surface S = surface_at(xi);
    EXPECT_NEAR(S.Lambda().imag(), -2 * (bp - bm) / (2 * h), 1e-7);
    EXPECT_NEAR(S.Lambda().imag(), 3.110935034, 1e-8);
}

TEST(Abel, NormalisationPoints)
{
    for (double xi : {0.0, 0.8, 1.7}) {
        const Surface S = surface_at(xi);
        EXPECT_LT(std::abs(S.abel(1 / S.background().q) - 0.5), 1e-8);
        EXPECT_LT(std::abs(S.abel(1.0) - 0.25), 1e-8);
        EXPECT_LT(std::abs(S.abel(-1.0, Side::lower) - (0.25 - 0.5 * S.tau())), 1e-8);
        EXPECT_LT(std::abs(S.abel(-1.0, Side::upper) - S.abel(-1.0, Side::lower) - S.tau()), 1e-8);
    }
}

TEST(Abel, ShiftBetweenZeroAndInfinity)
{
    // with the upper-side Lambda used throughout: A(inf) - A(0) = +Lambda/(4 pi i)
    const Surface S = surface_at(0.8);
    const cplx d = S.A_inf() - S.A_zero() - S.Lambda() / cplx(0, 4 * std::numbers::pi);
    EXPECT_LT(std::abs(d), 1e-8);
}

TEST(Abel, GapParameterInverse)
{
    const Surface S = surface_at(0.8);
    EXPECT_NEAR(S.gap_r(S.y()), 0, 1e-15);
    EXPECT_NEAR(S.gap_r(-1), 0.25, 1e-12);
    EXPECT_NEAR(S.gap_r(1 / S.y()), 0.5, 1e-12);
    for (double r : {0.01, 0.1, 0.2, 0.3, 0.45}) {
        const double v = S.gap_point(r);
        EXPECT_NEAR(S.gap_r(v), r, 1e-12);
        // lower-side Abel map on the gap is r - tau/2
        const cplx A = S.abel(v, Side::lower);
        EXPECT_LT(lattice_distance(A, cplx(r, 0) - 0.5 * S.tau(), S.tau()), 1e-8) << r;
    }
    EXPECT_THROW(S.gap_point(0.6), std::domain_error);
    EXPECT_THROW(S.abel(-0.1), std::domain_error);
}

TEST(Surface, FrequencyRatioOneAtPeriodTwoRay)
{
    const Background bg = make_background(1, -4);
    const double xi0 = xi_of_edge(z_of_lambda(-4.0), bg);
    const Surface S(GFunction(bg, solve_whitham_edge(xi0, bg)));
    EXPECT_NEAR(S.edge().lambda_y, -4.0, 1e-9);
    EXPECT_NEAR(S.Lambda().imag(), std::numbers::pi, 1e-9);
    EXPECT_NEAR(S.frequency_ratio(), 1.0, 1e-9);
}
