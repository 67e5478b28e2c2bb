#pragma once

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "spectral_map.hpp"

namespace todashock {

enum class Side { none, upper, lower };

struct WhithamEdge {
    double xi = 0, y = 0, lambda_y = 0;
    double residual = 0;
};

namespace detail {

// sqrt((z-y)/(z-q)) sqrt((z-1/y)/(z-1/q)); each factor is cut only on its own segment
inline cplx q_factor(cplx z, double y, double q)
{
    return std::sqrt((z - y) / (z - q)) * std::sqrt((z - 1 / y) / (z - 1 / q));
}

inline bool on_cut(cplx z, double y, double q)
{
    if (z.imag() != 0)
        return false;
    const double s = z.real();
    return (s > y && s < q) || (s > 1 / q && s < 1 / y);
}

// boundary values on the cuts: Q(s+i0) = -i|Q| on (y,q), +i|Q| on (1/q,1/y)
inline cplx q_factor_side(double s, Side side, double y, double q)
{
    const double m = std::sqrt(std::abs((s - y) / (s - q))) * std::sqrt(std::abs((s - 1 / y) / (s - 1 / q)));
    const double sg = (s > y && s < q) ? -1 : 1;
    return cplx(0, side == Side::upper ? sg * m : -sg * m);
}

// M0 + 2 xi M1 = int_{-1}^{y} P Q ds/s, Q real positive on (-1,y)
struct Moment {
    double m0, m1;
};

inline Moment whitham_moment_parts(double y, const Background& bg, quad::Options opt)
{
    const double q = bg.q, c = 0.5 * (y + 1 / y - q - 1 / q);
    // Q = v * rest with v = sqrt(y-s)
    auto rest = [&](double s) { return std::sqrt((s - 1 / y) / ((q - s) * (s - 1 / q))); };
    const double m0 = quad::cosint([&](double s, double u, double v) { return (s + 1 / s + c) * rest(s) / s * v * v * u; }, -1, y, opt);
    const double m1 = quad::cosint([&](double s, double u, double v) { return rest(s) / s * v * v * u; }, -1, y, opt);
    return {m0, m1};
}

}  // namespace detail

inline cplx q_factor(cplx z, double y, const Background& bg, Side side = Side::none)
{
    if (detail::on_cut(z, y, bg.q)) {
        if (side == Side::none)
            throw std::domain_error("q_factor: point on a cut needs a side");
        return detail::q_factor_side(z.real(), side, y, bg.q);
    }
    return detail::q_factor(z, y, bg.q);
}

inline double whitham_moment(double y, double xi, const Background& bg, quad::Options opt = {1e-13, 1, 11})
{
    auto m = detail::whitham_moment_parts(y, bg, opt);
    return m.m0 + 2 * xi * m.m1;
}

// xi as an explicit function of the edge: M is linear in xi
inline double xi_of_edge(double y, const Background& bg)
{
    auto m = detail::whitham_moment_parts(y, bg, {1e-13, 1, 11});
    return -m.m0 / (2 * m.m1);
}

inline WhithamEdge solve_whitham_edge(double xi, const Background& bg, double eps = 0.05)
{
    const CriticalRays cr = critical_rays(bg);
    if (!(xi >= cr.xi_cr_prime + eps && xi <= cr.xi_cr - eps)) {
        std::ostringstream os;
        os << "xi = " << xi << " outside the admissible window [xi'_cr + eps, xi_cr - eps] = [" << cr.xi_cr_prime + eps
           << ", " << cr.xi_cr - eps << "]";
        throw std::out_of_range(os.str());
    }
    const double q = bg.q, q1 = bg.q1;
    auto f = [&](double y) { return xi_of_edge(y, bg) - xi; };
    // Chebyshev scan for the bracket
    const int nodes = 64;
    std::vector<double> ys(nodes), fs(nodes);
    for (int k = 0; k < nodes; ++k) {
        const double t = std::cos(std::numbers::pi * (k + 0.5) / nodes);
        ys[k] = 0.5 * (q1 + q) - 0.5 * (q - q1) * t;
        fs[k] = f(ys[k]);
    }
    int found = -1, changes = 0;
    for (int k = 0; k + 1 < nodes; ++k)
        if ((fs[k] < 0) != (fs[k + 1] < 0)) {
            ++changes;
            found = k;
        }
    if (changes != 1) {
        std::ostringstream os;
        os << "solve_whitham_edge: expected one sign change of the moment, found " << changes;
        throw std::runtime_error(os.str());
    }
    boost::uintmax_t it = 200;
    auto tolf = [](double a, double b) { return std::abs(b - a) < 1e-15; };
    auto [y0, y1] = boost::math::tools::toms748_solve(f, ys[found], ys[found + 1], fs[found], fs[found + 1], tolf, it);
    WhithamEdge e;
    e.xi = xi;
    e.y = 0.5 * (y0 + y1);
    e.lambda_y = 0.5 * (e.y + 1 / e.y);
    e.residual = whitham_moment(e.y, xi, bg);
    if (std::abs(e.residual) > 1e-10)
        throw std::runtime_error("solve_whitham_edge: moment residual above 1e-10");
    return e;
}

class GFunction {
public:
    GFunction(const Background& bg, const WhithamEdge& e) : bg_(bg), e_(e)
    {
        c_ = 0.5 * (e.y + 1 / e.y - bg.q - 1 / bg.q);
        B_ = band_period();
    }

    const Background& background() const { return bg_; }
    const WhithamEdge& edge() const { return e_; }
    double B() const { return B_; }

    cplx P(cplx s) const { return s + 1.0 / s + 2 * e_.xi + c_; }
    cplx Q(cplx z, Side side = Side::none) const { return q_factor(z, e_.y, bg_, side); }

    // B = (g(s+i0) - g(s-i0))/(2i) on the gap = (1/2) int_y^q P |Q| ds/s
    double band_period(quad::Options opt = {1e-13, 1, 11}) const
    {
        const double y = e_.y, q = bg_.q;
        auto far = [&](double s) { return std::sqrt((s - 1 / y) / (s - 1 / q)); };
        // |Q| = u/v * far, u = sqrt(s-y), v = sqrt(q-s)
        const double I = quad::cosint([&](double s, double u, double) { return (P(s).real() / s) * far(s) * u * u; }, y, q, opt);
        const double b = 0.5 * I;
        if (!(b > 0))
            throw std::logic_error("band_period: B <= 0 (branch or orientation bug)");
        return b;
    }

    // g = (1/2) int_1^z P Q ds/s, path 1 -> +-i -> z
    cplx g(cplx z, Side side = Side::none, quad::Options opt = {1e-12, 1, 12}) const
    {
        if (z == 0.0)
            throw std::domain_error("g: z = 0");
        // (-inf, 0) carries the log cut and the band cuts
        if (z.imag() == 0 && z.real() < 0 && side == Side::none && z.real() != bg_.q && z.real() != 1 / bg_.q)
            throw std::domain_error("g: point on the negative real axis needs a side");
        const bool up = z.imag() > 0 || (z.imag() == 0 && side != Side::lower);
        const cplx anchor(0, up ? 1 : -1);
        // the cut endpoint is never sampled, interior nodes are off the axis
        auto f = [&](cplx s) -> cplx { return P(s) * detail::q_factor(s, e_.y, bg_.q) / s; };
        return 0.5 * (quad::segment(f, 1.0, anchor, opt) + quad::segment(f, anchor, z, opt));
    }

    // g with the log branch offset i pi xi removed in each half-plane; invisible in exp(2tg) for integer xi t
    cplx g_normalized(cplx z, Side side = Side::none, quad::Options opt = {1e-12, 1, 12}) const
    {
        const bool up = z.imag() > 0 || (z.imag() == 0 && side != Side::lower);
        return g(z, side, opt) - cplx(0, std::numbers::pi * e_.xi * (up ? 1 : -1));
    }

private:
    Background bg_;
    WhithamEdge e_;
    double c_ = 0, B_ = 0;
};

struct SignatureCell {
    double re, im;
    int sign;
};

// sign of Re g on a polar grid avoiding the real axis
inline std::vector<SignatureCell> signature_report(const GFunction& gf, int n, double rmax = 3.0)
{
    std::vector<SignatureCell> out;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double r = rmax * (i + 0.5) / n;
            const double th = 2 * std::numbers::pi * (j + 0.5) / n;
            const cplx z = std::polar(r, th);
            if (std::abs(z.imag()) < 1e-9)
                continue;
            const double v = gf.g_normalized(z).real();
            out.push_back({z.real(), z.imag(), v > 0 ? 1 : (v < 0 ? -1 : 0)});
        }
    return out;
}

}  // namespace todashock
