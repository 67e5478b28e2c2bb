#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "elliptic.hpp"
#include "scattering.hpp"

namespace todashock {

struct PhaseShift {
    double Delta = 0;
    int ell = 1;                 // +1 non-resonant at q, -1 resonant
    double imag_residual = 0;    // |Im| of the raw complex evaluation
};

// log(Pi^-2 |chi V_+^2|) on (y, q), V normalised so that V(1/z) = 1/V(z)
inline double delta_log(double s, const StepData& d, const std::vector<double>& eig, int ell)
{
    const double q = d.bg.q;
    const double ratio = std::abs((q * s - 1) / (s - q));
    const double v2 = ell > 0 ? std::sqrt(ratio) : 1 / std::sqrt(ratio);
    const double pi2 = std::norm(blaschke(s, eig, d.bg));
    return std::log(chi_abs(s, d)) + std::log(v2) - std::log(pi2);
}

// Delta = -i int_q^y L/(S_+ s) ds [int_y^-1 ds/(s S)]^-1 + pi ell/2, S_+ s = R(s+i0)
inline PhaseShift phase_shift(const Surface& S, const StepData& d, const std::vector<double>& eig, const Resonance& res,
                              quad::Options opt = {1e-13, 1, 11})
{
    const double y = S.y(), q = d.bg.q;
    PhaseShift ps;
    ps.ell = res.at_q ? -1 : 1;
    // int_q^y = -int_y^q; R(s+i0) = i u v sqrt((s-1/y)(s-1/q))
    auto cutden = [&](double s) { return std::sqrt((s - 1 / y) * (s - 1 / q)); };
    const cplx num = -quad::cosint(
        [&](double s, double, double) -> cplx { return cplx(0, -1) * delta_log(s, d, eig, ps.ell) / cutden(s); }, y, q, opt);
    const double den = -S.Gamma() / 4;  // int_y^-1 ds/R
    const cplx raw = cplx(0, -1) * num / den;
    ps.imag_residual = std::abs(raw.imag());
    if (ps.imag_residual > 1e-9)
        throw std::runtime_error("phase_shift: Delta not real");
    ps.Delta = raw.real() + std::numbers::pi * ps.ell / 2;
    return ps;
}

struct ThetaPhase {
    double x = 0, x_B = 0, x_LU = 0;
};

inline double phase_B(double n, double t, const Surface& S, double Delta)
{
    (void)n;
    return t * S.B() / (2 * std::numbers::pi) - Delta / (4 * std::numbers::pi);
}

inline double phase_LU(double n, double t, const Surface& S, double Delta)
{
    const cplx four_pi_i(0, 4 * std::numbers::pi);
    const cplx v = -n * S.Lambda() / four_pi_i - t * S.U() / four_pi_i;
    return v.real() - Delta / (4 * std::numbers::pi);
}

// both routes; S must be built at xi = n/t
inline ThetaPhase theta_phase(double n, double t, const Surface& S, double Delta)
{
    ThetaPhase p;
    p.x_B = phase_B(n, t, S, Delta);
    p.x_LU = phase_LU(n, t, S, Delta);
    if (std::abs(p.x_B - p.x_LU) > 1e-10 * std::max(1.0, std::abs(p.x_B))) {
        std::ostringstream os;
        os << "theta_phase: route disagreement " << p.x_B - p.x_LU;
        throw std::logic_error(os.str());
    }
    p.x = p.x_B;
    return p;
}

struct Divisor {
    double r = 0;       // Abel coordinate of mu along the gap
    double mu = 0;      // in [1/y, y]
    double lambda = 0;  // (mu + 1/mu)/2 in [lambda_y, -1]
    int sheet = 1;      // +1 if mu in [-1, y], -1 if mu in [1/y, -1]
};

inline double frac_half(double v)
{
    double r = std::fmod(v, 0.5);
    if (r < 0)
        r += 0.5;
    return r;
}

// zero of v -> theta(2A_+(v) - 1/2 + 2x | 2 tau) along the gap, A_+(v) = r(v) - tau/2
inline Divisor dirichlet_eigenvalue(double x, const Surface& S)
{
    using std::numbers::pi;
    const cplx T = 2.0 * S.tau();
    // theta(u - T/2 | T) e^{-i pi u} is real
    auto G = [&](double r) {
        const double u = 2 * r - 0.5 + 2 * x;
        return (std::exp(cplx(0, -pi * u)) * theta(u - 0.5 * T, T)).real();
    };
    Divisor dv;
    const double g0 = G(0), g1 = G(0.5);
    if (g0 == 0)
        dv.r = 0;
    else {
        if ((g0 < 0) == (g1 < 0))
            throw std::logic_error("dirichlet_eigenvalue: no sign change of theta along the gap");
        boost::uintmax_t it = 200;
        auto tolf = [](double a, double b) { return std::abs(b - a) < 1e-15; };
        auto [r0, r1] = boost::math::tools::toms748_solve(G, 0.0, 0.5, g0, g1, tolf, it);
        dv.r = 0.5 * (r0 + r1);
    }
    // zero of theta(.|T) sits at 1/2 + T/2: r = -x mod 1/2
    const double ra = frac_half(-x);
    double dr = std::abs(dv.r - ra);
    dr = std::min(dr, 0.5 - dr);
    if (dr > 1e-9) {
        std::ostringstream os;
        os << "dirichlet_eigenvalue: theta root " << dv.r << " disagrees with inversion " << ra;
        throw std::logic_error(os.str());
    }
    if (dv.r >= 0.5)
        dv.r -= 0.5;
    dv.mu = S.gap_point(dv.r);
    dv.lambda = 0.5 * (dv.mu + 1 / dv.mu);
    dv.sheet = dv.mu >= -1 ? 1 : -1;
    return dv;
}

struct ModulatedWave {
    double lambda_nt = 0, b_hat = 0, a2sum_hat = 0;
};

inline ModulatedWave trace_formulas(double lambda_nt, double lambda_y, const Background& bg)
{
    const double lq = bg.b - 2 * bg.a;
    const double s = lq + lambda_y - 2 * lambda_nt;
    ModulatedWave w;
    w.lambda_nt = lambda_nt;
    w.b_hat = 0.5 * s;
    w.a2sum_hat = 0.25 * (2 + lq * lq + lambda_y * lambda_y - 2 * lambda_nt * lambda_nt - 0.5 * s * s);
    return w;
}

// model diagnostics
inline cplx model_delta(cplx Az, double x, const Surface& S)
{
    const cplx T = 2.0 * S.tau();
    return theta(2.0 * Az - 0.5 + 2 * x, T) / theta(2.0 * Az - 0.5, T);
}

// H^2 = Q, H(0) = 1
inline cplx model_H2(cplx z, const Surface& S) { return q_factor(z, S.y(), S.background()); }

inline cplx model_H(cplx z, const Surface& S)
{
    const double y = S.y(), q = S.background().q;
    return std::sqrt(std::sqrt((z - y) / (z - q))) * std::sqrt(std::sqrt((z - 1 / y) / (z - 1 / q)));
}

// delta(z) delta(1/z) / (delta(0) delta(inf))
inline cplx model_Y_theta(cplx z, double x, const Surface& S)
{
    const cplx d0 = model_delta(S.A_zero(), x, S), di = model_delta(S.A_inf(), x, S);
    return model_delta(S.abel(z), x, S) * model_delta(S.abel(1.0 / z), x, S) / (d0 * di);
}

inline cplx model_Y_rational(cplx z, double mu, const Surface& S)
{
    const double y = S.y();
    return (z - mu) * (z - 1 / mu) / ((z - y) * (z - 1 / y));
}

// H^2 Y, asserting both forms agree
inline cplx model_product_Y(cplx z, double x, const Divisor& dv, const Surface& S, double tol = 1e-8)
{
    const cplx yt = model_Y_theta(z, x, S), yr = model_Y_rational(z, dv.mu, S);
    if (std::abs(yt - yr) > tol * std::max(1.0, std::abs(yr))) {
        std::ostringstream os;
        os << "model_product_Y: theta form " << yt << " vs rational form " << yr;
        throw std::logic_error(os.str());
    }
    return model_H2(z, S) * yr;
}

// d/dz of H^2 Y at 0 by the trapezoid rule on |z| = r; r must stay inside |q|
inline double model_expansion_coefficient(const Divisor& dv, const Surface& S, double r = -1, int N = 64)
{
    if (r < 0)
        r = 0.5 * std::abs(S.background().q);
    cplx acc = 0;
    for (int k = 0; k < N; ++k) {
        const cplx z = std::polar(r, 2 * std::numbers::pi * k / N);
        acc += model_H2(z, S) * model_Y_rational(z, dv.mu, S) / z;
    }
    return (acc / (double)N).real();
}

// (m1, m2) = (delta(z), delta(1/z)) H(z)/sqrt(delta(0) delta(inf))
inline std::pair<cplx, cplx> model_vector(cplx z, double x, const Surface& S)
{
    const cplx nrm = std::sqrt(model_delta(S.A_zero(), x, S) * model_delta(S.A_inf(), x, S));
    const cplx H = model_H(z, S);
    const cplx Az = z == 0.0 ? S.A_zero() : S.abel(z);
    const cplx Ai = z == 0.0 ? S.A_inf() : S.abel(1.0 / z);
    return {model_delta(Az, x, S) * H / nrm, model_delta(Ai, x, S) * H / nrm};
}

// everything needed to evaluate the asymptotic profile at one xi
struct AsymptoticModel {
    std::shared_ptr<GFunction> gf;
    std::shared_ptr<Surface> S;
    PhaseShift ps;

    static AsymptoticModel build(double xi, const StepData& d, const std::vector<double>& eig, const Resonance& res,
                                 double eps = 0.05)
    {
        AsymptoticModel m;
        const WhithamEdge e = solve_whitham_edge(xi, d.bg, eps);
        m.gf = std::make_shared<GFunction>(d.bg, e);
        m.S = std::make_shared<Surface>(*m.gf);
        m.ps = phase_shift(*m.S, d, eig, res);
        return m;
    }

    static AsymptoticModel build(double xi, const StepData& d, double eps = 0.05)
    {
        return build(xi, d, find_eigenvalues(d), resonance_status(d), eps);
    }

    // xi frozen at this model's value: x from the Lambda/U route
    ModulatedWave at_frozen(double n, double t) const
    {
        const double x = phase_LU(n, t, *S, ps.Delta);
        return trace_formulas(dirichlet_eigenvalue(x, *S).lambda, S->edge().lambda_y, S->background());
    }

    // requires xi = n/t
    ModulatedWave at(double n, double t) const
    {
        const ThetaPhase p = theta_phase(n, t, *S, ps.Delta);
        return trace_formulas(dirichlet_eigenvalue(p.x, *S).lambda, S->edge().lambda_y, S->background());
    }
};

inline ModulatedWave asymptotic_profile(long n, double t, const StepData& d, double eps = 0.05)
{
    const AsymptoticModel m = AsymptoticModel::build((double)n / t, d, eps);
    return m.at((double)n, t);
}

}  // namespace todashock
