#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "quadrature.hpp"

namespace todashock {

// left background (a, b); right background is (1/2, 0)
struct Background {
    double a = 1, b = -4;
    double q = 0, q1 = 0;  // z(b-2a), z(b+2a)
};

inline cplx z_of_lambda(cplx lam)
{
    if (std::isnan(lam.real()) || std::isnan(lam.imag()))
        throw std::invalid_argument("z_of_lambda: NaN input");
    // principal roots: cut only on [-1,1], z -> 0 as lam -> inf
    return lam - std::sqrt(lam - 1.0) * std::sqrt(lam + 1.0);
}

inline double z_of_lambda(double lam)
{
    if (std::isnan(lam))
        throw std::invalid_argument("z_of_lambda: NaN input");
    if (std::abs(lam) < 1)
        throw std::domain_error("z_of_lambda: real branch needs |lambda| >= 1");
    return z_of_lambda(cplx(lam, 0)).real();
}

inline cplx lambda_of_z(cplx z) { return 0.5 * (z + 1.0 / z); }

inline Background make_background(double a, double b)
{
    if (!(a > 0))
        throw std::invalid_argument("background: need a > 0");
    if (!(b + 2 * a < -1)) {
        std::ostringstream os;
        os << "background: shock condition b + 2a < -1 violated (b + 2a = " << b + 2 * a << ")";
        throw std::invalid_argument(os.str());
    }
    Background bg{a, b};
    bg.q = z_of_lambda(b - 2 * a);
    bg.q1 = z_of_lambda(b + 2 * a);
    return bg;
}

inline cplx zeta_of_lambda(cplx lam, const Background& bg)
{
    const cplx w = lam - bg.b;
    return (w - std::sqrt(w - 2 * bg.a) * std::sqrt(w + 2 * bg.a)) / (2 * bg.a);
}

inline cplx zeta_of_z(cplx z, const Background& bg) { return zeta_of_lambda(lambda_of_z(z), bg); }

// right phase (z - 1/z)/2 + xi log z
inline cplx phase_right(cplx z, double xi)
{
    if (z == 0.0)
        throw std::domain_error("phase_right: z = 0");
    return 0.5 * (z - 1.0 / z) + xi * std::log(z);
}

// left phase a(1/zeta - zeta) - xi log zeta
inline cplx phase_left(cplx z, double xi, const Background& bg)
{
    const cplx ze = zeta_of_z(z, bg);
    if (ze == 0.0)
        throw std::domain_error("phase_left: zeta = 0");
    return bg.a * (1.0 / ze - ze) - xi * std::log(ze);
}

struct CriticalRays {
    double xi_cr, xi_cr_prime, xi_cr1_prime, xi_cr1;
};

inline CriticalRays critical_rays(const Background& bg, quad::Options opt = {1e-13, 1, 11})
{
    const double a = bg.a, b = bg.b;
    CriticalRays r{};
    const double s = std::sqrt((2 * a - b) * (2 * a - b) - 1);
    r.xi_cr = s / std::log(2 * a - b + s);
    const double s1 = std::sqrt((1 - b) * (1 - b) - 4 * a * a);
    r.xi_cr1 = s1 / (std::log(2 * a) - std::log(1 - b + s1));

    // lambda on [b+2a, -1]; u^2 = lambda-b-2a, v^2 = -1-lambda
    const double lo = b + 2 * a, hi = -1;
    auto den = [&](double l) { return std::sqrt((l - b + 2 * a) * (1 - l)); };
    const double iq = quad::cosint([&](double l, double u, double) { return u * u / den(l); }, lo, hi, opt);
    const double ilq = quad::cosint([&](double l, double u, double) { return l * u * u / den(l); }, lo, hi, opt);
    r.xi_cr_prime = -2 * a - ilq / iq;
    const double iq1 = quad::cosint([&](double l, double, double v) { return v * v / den(l); }, lo, hi, opt);
    const double ilq1 = quad::cosint([&](double l, double, double v) { return l * v * v / den(l); }, lo, hi, opt);
    r.xi_cr1_prime = b + 1 - ilq1 / iq1;
    return r;
}

}  // namespace todashock
