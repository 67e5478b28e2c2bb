#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "spectral_map.hpp"

namespace todashock {

// initial data: backgrounds plus an optional finite window of explicit coefficients
struct StepData {
    Background bg;
    long n_lo = 0;               // first index of the window
    std::vector<double> a, b;    // window values for n = n_lo .. n_lo+size-1

    bool pure() const { return a.empty(); }
    double a_at(long n) const
    {
        if (n >= n_lo && n < n_lo + (long)a.size())
            return a[n - n_lo];
        return n >= 0 ? 0.5 : bg.a;
    }
    double b_at(long n) const
    {
        if (n >= n_lo && n < n_lo + (long)b.size())
            return b[n - n_lo];
        return n >= 0 ? 0.0 : bg.b;
    }
};

inline StepData pure_step(const Background& bg) { return StepData{bg, 0, {}, {}}; }

inline StepData windowed(const Background& bg, long n_lo, std::vector<double> a, std::vector<double> b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("window: a and b lengths differ");
    for (double v : a)
        if (!(v > 0))
            throw std::invalid_argument("window: a(n) must be positive");
    return StepData{bg, n_lo, std::move(a), std::move(b)};
}

namespace detail {

// sites where the pure background recurrence already holds
inline long right_start(const StepData& d)
{
    return d.pure() ? 1 : std::max<long>(1, d.n_lo + (long)d.a.size() + 1);
}
inline long left_start(const StepData& d) { return d.pure() ? -1 : std::min<long>(-1, d.n_lo - 1); }

}  // namespace detail

// Jost solutions at sites n and n+1: right psi ~ z^n, left psi_l ~ zeta^{-n} (zeta^{n} if flipped)
inline std::pair<cplx, cplx> right_jost(cplx z, const StepData& d, long n)
{
    const long nr = std::max(detail::right_start(d), n + 1);
    const cplx lam = lambda_of_z(z);
    cplx p1 = std::pow(z, nr + 1), p0 = std::pow(z, nr);
    for (long m = nr; m > n; --m) {
        cplx pm = ((lam - d.b_at(m)) * p0 - d.a_at(m) * p1) / d.a_at(m - 1);
        p1 = p0;
        p0 = pm;
    }
    return {p0, p1};
}

inline std::pair<cplx, cplx> left_jost(cplx z, const StepData& d, long n, bool flip = false)
{
    const long nl = std::min(detail::left_start(d), n);
    const cplx lam = lambda_of_z(z);
    cplx ze = zeta_of_z(z, d.bg);
    if (flip)
        ze = 1.0 / ze;
    cplx pm = std::pow(ze, -(nl - 1)), p0 = std::pow(ze, -nl);
    for (long m = nl; m < n + 1; ++m) {
        cplx pp = ((lam - d.b_at(m)) * p0 - d.a_at(m - 1) * pm) / d.a_at(m);
        pm = p0;
        p0 = pp;
    }
    return {pm, p0};
}

// W = a(n)(psi_l(n) psi(n+1) - psi_l(n+1) psi(n)); `flip` replaces zeta by 1/zeta
inline cplx wronskian(cplx z, const StepData& d, long site = 0, bool flip = false)
{
    if (z == 0.0)
        throw std::domain_error("wronskian: z = 0");
    if (d.pure() && site == 0) {
        cplx ze = zeta_of_z(z, d.bg);
        if (flip)
            ze = 1.0 / ze;
        return d.bg.a * ze - 0.5 / z;
    }
    auto [r0, r1] = right_jost(z, d, site);
    auto [l0, l1] = left_jost(z, d, site, flip);
    return d.a_at(site) * (l0 * r1 - l1 * r0);
}

inline void check_band(double z, const Background& bg)
{
    if (!(z > bg.q1 && z < bg.q))
        throw std::domain_error("chi: z must lie strictly inside (q1, q)");
}

// chi on the open band via the Wronskian pair
inline cplx chi_on_band(double z, const StepData& d)
{
    check_band(z, d.bg);
    const cplx ze = zeta_of_z(cplx(z, 0), d.bg);
    const cplx w = wronskian(z, d), wb = wronskian(z, d, 0, true);
    return -d.bg.a * (ze - 1.0 / ze) * (z - 1.0 / z) / (2.0 * w * wb);
}

// second route: -2a (zeta - 1/zeta)/(z - 1/z) |T|^2, |T|^2 = (z-1/z)^2 / (4|W|^2) with W from the recurrence at site 3
inline cplx chi_via_transmission(double z, const StepData& d)
{
    check_band(z, d.bg);
    const cplx ze = zeta_of_z(cplx(z, 0), d.bg);
    const double w = std::abs(wronskian(z, d, 3));
    const double t2 = (z - 1 / z) * (z - 1 / z) / (4 * w * w);
    return -2 * d.bg.a * (ze - 1.0 / ze) / (z - 1 / z) * t2;
}

// |chi| on the band written to stay accurate near the edges:
// |zeta - 1/zeta| = sqrt((2a-w)(2a+w))/a, w = lambda-b, both factors as differences of lambda(z)
inline double chi_abs(double s, const StepData& d)
{
    const Background& bg = d.bg;
    const double lo = 0.5 * (s - bg.q) * (1 - 1 / (s * bg.q));
    const double hi = 0.5 * (bg.q1 - s) * (1 - 1 / (s * bg.q1));
    const double zz = std::sqrt(hi * lo) / bg.a;
    const double W = std::abs(wronskian(s, d));
    return bg.a * zz * std::abs(s - 1 / s) / (2 * W * W);
}

struct Resonance {
    double tol = 1e-9;
    double w_m1 = 0, w_p1 = 0, w_q = 0, w_q1 = 0;
    bool at_m1 = false, at_p1 = false, at_q = false, at_q1 = false;
};

inline Resonance resonance_status(const StepData& d, double tol = 1e-9)
{
    Resonance r;
    r.tol = tol;
    r.w_m1 = std::abs(wronskian(-1.0, d));
    r.w_p1 = std::abs(wronskian(1.0, d));
    r.w_q = std::abs(wronskian(d.bg.q, d));
    r.w_q1 = std::abs(wronskian(d.bg.q1, d));
    r.at_m1 = r.w_m1 < tol;
    r.at_p1 = r.w_p1 < tol;
    r.at_q = r.w_q < tol;
    r.at_q1 = r.w_q1 < tol;
    return r;
}

// sign changes of the real Wronskian on (-1,q1), (q,0), (0,1)
inline std::vector<double> find_eigenvalues(const StepData& d, int grid = 10000)
{
    const Background& bg = d.bg;
    std::vector<double> out;
    auto wr = [&](double z) {
        cplx w = wronskian(z, d);
        if (std::abs(w.imag()) > 1e-8 * (1 + std::abs(w.real())))
            throw std::logic_error("find_eigenvalues: Wronskian not real on a gap segment");
        return w.real();
    };
    const double segs[3][2] = {{-1, bg.q1}, {bg.q, 0}, {0, 1}};
    for (auto& sg : segs) {
        const double lo = sg[0], hi = sg[1], h = (hi - lo) / grid;
        double zp = lo + 0.5 * h, fp = wr(zp);
        for (int i = 1; i < grid; ++i) {
            const double zc = lo + (i + 0.5) * h, fc = wr(zc);
            if (fp == 0)
                out.push_back(zp);
            else if ((fp < 0) != (fc < 0)) {
                boost::uintmax_t it = 200;
                auto tolf = [](double x0, double x1) { return std::abs(x1 - x0) < 1e-13; };
                auto [x0, x1] = boost::math::tools::toms748_solve(wr, zp, zc, fp, fc, tolf, it);
                out.push_back(0.5 * (x0 + x1));
            }
            zp = zc;
            fp = fc;
        }
    }
    return out;
}

// Blaschke factor over eigenvalues in (q, 0)
inline cplx blaschke(cplx z, const std::vector<double>& eig, const Background& bg)
{
    cplx p = 1.0;
    for (double zj : eig)
        if (zj > bg.q && zj < 0)
            p *= std::abs(zj) * (z - 1 / zj) / (z - zj);
    return p;
}

}  // namespace todashock
