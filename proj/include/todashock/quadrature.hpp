#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include <boost/math/quadrature/gauss.hpp>

namespace todashock {

using cplx = std::complex<double>;

namespace quad {

struct Rule {
    std::array<double, 20> x{}, w{};
};

// full 20-point Gauss-Legendre rule on [-1,1]
inline const Rule& gauss20()
{
    static const Rule r = [] {
        using G = boost::math::quadrature::gauss<double, 20>;
        Rule out;
        const auto& ab = G::abscissa();
        const auto& wt = G::weights();
        for (std::size_t i = 0; i < ab.size(); ++i) {
            out.x[2 * i] = -ab[i];
            out.x[2 * i + 1] = ab[i];
            out.w[2 * i] = wt[i];
            out.w[2 * i + 1] = wt[i];
        }
        return out;
    }();
    return r;
}

struct Options {
    double rtol = 1e-12;  // relative to the L1 mass of the integrand
    int min_level = 1;
    int max_level = 11;
};

inline double mag(double v) { return std::abs(v); }
inline double mag(cplx v) { return std::abs(v); }

template <class F>
auto panels(const F& f, double lo, double hi, int np, double& l1) -> std::invoke_result_t<F, double>
{
    using R = std::invoke_result_t<F, double>;
    const Rule& g = gauss20();
    R sum{};
    l1 = 0;
    const double h = (hi - lo) / np;
    for (int p = 0; p < np; ++p) {
        const double c = lo + (p + 0.5) * h, r = 0.5 * h;
        for (int i = 0; i < 20; ++i) {
            R v = f(c + r * g.x[i]) * (g.w[i] * r);
            sum += v;
            l1 += mag(v);
        }
    }
    return sum;
}

// composite Gauss-Legendre, panel doubling until successive sums agree
template <class F>
auto integrate(const F& f, double lo, double hi, Options opt = {}) -> std::invoke_result_t<F, double>
{
    using R = std::invoke_result_t<F, double>;
    double l1 = 0;
    int np = 1 << opt.min_level;
    R prev = panels(f, lo, hi, np, l1);
    double err = 0;
    for (int lev = opt.min_level + 1; lev <= opt.max_level; ++lev) {
        np *= 2;
        R cur = panels(f, lo, hi, np, l1);
        err = mag(cur - prev);
        if (!std::isfinite(err))
            throw std::runtime_error("quadrature: non-finite integrand");
        if (err <= opt.rtol * l1 || l1 == 0)
            return cur;
        prev = cur;
    }
    std::ostringstream os;
    os << "quadrature did not converge on [" << lo << ", " << hi << "]: achieved " << err
       << " vs requested " << opt.rtol * l1;
    throw std::runtime_error(os.str());
}

// int_lo^hi f(s,u,v)/(u v) ds, u = sqrt(s-lo), v = sqrt(hi-s); s = lo + (hi-lo)(1-cos th)/2
// u and v are passed in exact form so integrands can cancel endpoint factors
template <class F>
auto cosint(const F& f, double lo, double hi, Options opt = {})
{
    const double d = hi - lo, sd = std::sqrt(d);
    auto g = [&](double th) {
        const double s = lo + d * 0.5 * (1 - std::cos(th));
        const double u = sd * std::sin(0.5 * th), v = sd * std::cos(0.5 * th);
        return f(s, u, v);
    };
    return integrate(g, 0.0, std::numbers::pi, opt);
}

// int f(z) dz on the straight segment z0 -> z1; the cosine map absorbs
// square-root singularities at either end
template <class F>
cplx segment(const F& f, cplx z0, cplx z1, Options opt = {})
{
    const cplx dz = z1 - z0;
    auto g = [&](double th) -> cplx {
        const double t = 0.5 * (1 - std::cos(th));
        return f(z0 + t * dz) * (0.5 * std::sin(th)) * dz;
    };
    return integrate(g, 0.0, std::numbers::pi, opt);
}

}  // namespace quad
}  // namespace todashock
