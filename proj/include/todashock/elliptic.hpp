#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "gfunction.hpp"

namespace todashock {

inline int theta_kmax(double im_T) { return (int)std::ceil(std::sqrt(16 * std::log(10.0) / (std::numbers::pi * im_T))) + 2; }

// theta(v|T) = sum exp(pi i k^2 T + 2 pi i k v); v is first moved into the fundamental strip
inline cplx theta(cplx v, cplx T)
{
    using std::numbers::pi;
    if (!(T.imag() > 0))
        throw std::domain_error("theta: Im T must be positive");
    const double m = std::round(v.imag() / T.imag());
    const cplx v0 = v - m * T;
    const cplx I(0, 1);
    const int K = theta_kmax(T.imag()) + 2;
    cplx s = 0;
    for (int k = -K; k <= K; ++k)
        s += std::exp(pi * I * (double)k * (double)k * T + 2.0 * pi * I * (double)k * v0);
    // theta(v0 + m T) = exp(-2 pi i m v0 - pi i m^2 T) theta(v0)
    return std::exp(-2.0 * pi * I * m * v0 - pi * I * m * m * T) * s;
}

// genus-1 surface of R^2 = (z-q)(z-y)(z-1/y)(z-1/q) for one xi
class Surface {
public:
    Surface(const GFunction& gf, quad::Options opt = {1e-13, 1, 11}) : bg_(gf.background()), e_(gf.edge()), B_(gf.B()), opt_(opt)
    {
        const double y = e_.y, q = bg_.q;
        auto gapden = [&](double s) { return std::sqrt((q - s) * (s - 1 / y) * (s - 1 / q)); };
        // |R| = v * gapden on (-1, y), v = sqrt(y - s)
        const double g0 = quad::cosint([&](double s, double u, double) { return u / gapden(s); }, -1, y, opt);
        const double g1 = quad::cosint([&](double s, double u, double) { return (s + 1 / s) * u / gapden(s); }, -1, y, opt);
        Gamma_ = 4 * g0;
        lambda_h_ = g1 / (2 * g0);
        auto cutden = [&](double s) { return std::sqrt((s - 1 / y) * (s - 1 / q)); };
        Kb_ = quad::cosint([&](double s, double, double) { return 1 / cutden(s); }, y, q, opt);
        tau_ = cplx(0, 2 * Kb_ / Gamma_);
        const double li = quad::cosint([&](double s, double, double) { return (s + 1 / s - 2 * lambda_h_) / cutden(s); }, y, q, opt);
        // R(s+i0) = i|R| on (y,q)
        Lambda_ = cplx(0, -2 * li);
        // second-kind differential (1/2)(s+1/s+c)(s+1/s-2 lambda_y) ds/R - kappa ds/R, kappa from a zero gap period
        const double ly = e_.lambda_y, c = 0.5 * (y + 1 / y - q - 1 / q);
        auto w2 = [&](double s) { return 0.5 * (s + 1 / s + c) * (s + 1 / s - 2 * ly); };
        const double g2 = quad::cosint([&](double s, double u, double) { return w2(s) * u / gapden(s); }, -1, y, opt);
        kappa_ = g2 / g0;
        const double ui = quad::cosint([&](double s, double, double) { return (w2(s) - kappa_) / cutden(s); }, y, q, opt);
        U_ = cplx(0, -2 * ui);

        auto realden = [&](double s) { return std::sqrt((s - y) * (s - 1 / y) * (s - 1 / q)); };
        A1_ = quad::cosint([&](double s, double, double v) { return v / realden(s); }, q, 1, opt) / Gamma_;
        A0_ = quad::cosint([&](double s, double, double v) { return v / realden(s); }, q, 0, opt) / Gamma_;
        Aup_ = A1_ + quad::segment([&](cplx z) { return 1.0 / R(z); }, 1.0, cplx(0, 1), opt) / Gamma_;
        Alo_ = A1_ + quad::segment([&](cplx z) { return 1.0 / R(z); }, 1.0, cplx(0, -1), opt) / Gamma_;
        // z = 1/u maps dz/R(z) to -du/R(u)
        Ainf_ = Aup_ + quad::segment([&](cplx u) { return 1.0 / R(u); }, 0.0, cplx(0, -1), opt) / Gamma_;
    }

    const Background& background() const { return bg_; }
    const WhithamEdge& edge() const { return e_; }
    double y() const { return e_.y; }
    double B() const { return B_; }
    double Gamma() const { return Gamma_; }
    double Kb() const { return Kb_; }
    cplx tau() const { return tau_; }
    double lambda_h() const { return lambda_h_; }
    cplx Lambda() const { return Lambda_; }
    cplx U() const { return U_; }
    double kappa() const { return kappa_; }
    cplx A_inf() const { return Ainf_; }
    cplx A_zero() const { return A0_; }

    // R = (z-y)(z-1/y)/Q: R(1) > 0, R(-1) < 0, R(0) = 1
    cplx R(cplx z, Side side = Side::none) const
    {
        const double y = e_.y;
        return (z - y) * (z - 1 / y) / q_factor(z, y, bg_, side);
    }

    // raw Abel map from q, path q -> 1 -> +-i -> z; lower/upper picks the half-plane for real z
    cplx abel(cplx z, Side side = Side::none) const
    {
        const double y = e_.y, q = bg_.q;
        if (z.imag() == 0) {
            const double s = z.real();
            const bool jumpy = (s > y && s < q) || (s > 1 / q && s < 1 / y) || (s >= 1 / y && s <= y);
            if (jumpy && side == Side::none)
                throw std::domain_error("abel: point on the cuts or the gap needs a side");
        }
        const bool up = z.imag() > 0 || (z.imag() == 0 && side != Side::lower);
        const cplx anchor(0, up ? 1 : -1);
        return (up ? Aup_ : Alo_) + quad::segment([&](cplx s) { return 1.0 / R(s); }, anchor, z, opt_) / Gamma_;
    }

    // real part of the lower-side Abel map on the gap, measured from y: r(y)=0, r(-1)=1/4, r(1/y)=1/2
    double gap_r(double v) const
    {
        const double y = e_.y;
        if (!(v >= 1 / y && v <= y))
            throw std::domain_error("gap_r: point outside the gap [1/y, y]");
        if (v < -1)
            return 0.5 - gap_r(1 / v);
        if (v == y)
            return 0;
        const double q = bg_.q;
        auto den = [&](double s) { return std::sqrt((q - s) * (s - 1 / y) * (s - 1 / q)); };
        return quad::cosint([&](double s, double u, double) { return u / den(s); }, v, y, opt_) / Gamma_;
    }

    // inverse of gap_r on [0, 1/2]
    double gap_point(double r) const
    {
        const double y = e_.y;
        if (r < 0 || r > 0.5)
            throw std::domain_error("gap_point: r outside [0, 1/2]");
        if (r > 0.25)
            return 1 / gap_point(0.5 - r);
        if (r == 0)
            return y;
        auto f = [&](double v) { return gap_r(v) - r; };
        boost::uintmax_t it = 200;
        auto tolf = [](double a, double b) { return std::abs(b - a) < 1e-14; };
        auto [v0, v1] = boost::math::tools::toms748_solve(f, -1.0, y, 0.25 - r, -r, tolf, it);
        return 0.5 * (v0 + v1);
    }

    // ratio of quasi-momentum increments: right band (unit circle) over left band [y, q]
    double frequency_ratio() const
    {
        const double lh = lambda_h_;
        auto right = [&](double phi) {
            const cplx z = std::polar(1.0, phi);
            const cplx S = R(z) / z;
            return (2 * std::cos(phi) - 2 * lh) / S.real();
        };
        const double ir = quad::integrate(right, 0.0, std::numbers::pi, opt_);
        const double y = e_.y, q = bg_.q;
        const double il = quad::cosint([&](double s, double, double) { return (s + 1 / s - 2 * lh) / std::sqrt((s - 1 / y) * (s - 1 / q)); }, y, q, opt_);
        return std::abs(ir) / std::abs(il);
    }

private:
    Background bg_;
    WhithamEdge e_;
    double B_;
    quad::Options opt_;
    double Gamma_ = 0, Kb_ = 0, lambda_h_ = 0, kappa_ = 0;
    cplx tau_, Lambda_, U_;
    double A1_ = 0, A0_ = 0;
    cplx Aup_, Alo_, Ainf_;
};

// reduce mod 1 and mod tau (tau purely imaginary)
inline cplx lattice_reduce(cplx v, cplx tau)
{
    const double m = std::floor(v.imag() / tau.imag() + 0.5);
    v -= m * tau;
    return cplx(v.real() - std::floor(v.real() + 0.5), v.imag());
}

inline double lattice_distance(cplx a, cplx b, cplx tau) { return std::abs(lattice_reduce(a - b, tau)); }

}  // namespace todashock
