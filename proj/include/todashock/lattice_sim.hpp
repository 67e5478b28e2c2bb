#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "scattering.hpp"

namespace todashock {

// a(n), b(n) for n in [n_min, n_max]; first and last cells stay at background values
struct LatticeState {
    Background bg;
    long n_min = 0, n_max = -1;
    std::vector<double> a, b;
    double t = 0;

    std::size_t size() const { return a.size(); }
    bool contains(long n) const { return n >= n_min && n <= n_max; }
    double a_at(long n) const { return a.at(n - n_min); }
    double b_at(long n) const { return b.at(n - n_min); }
};

inline double default_pad(double t_final) { return 50 + 10 * std::sqrt(t_final); }

inline LatticeState init_range(const StepData& d, long n_min, long n_max)
{
    if (n_max <= n_min + 2)
        throw std::invalid_argument("init: domain needs at least three sites");
    if (n_max - n_min + 1 > 10000000L)
        throw std::length_error("init: domain exceeds 1e7 sites");
    LatticeState s;
    s.bg = d.bg;
    s.n_min = n_min;
    s.n_max = n_max;
    s.a.resize(n_max - n_min + 1);
    s.b.resize(n_max - n_min + 1);
    for (long n = n_min; n <= n_max; ++n) {
        s.a[n - n_min] = d.a_at(n);
        s.b[n - n_min] = d.b_at(n);
    }
    return s;
}

// domain [xi_cr1 t - pad, xi_cr t + pad]
inline LatticeState init_steplike(const StepData& d, double t_final, double pad = -1)
{
    if (!(t_final >= 0))
        throw std::invalid_argument("init_steplike: t_final must be >= 0");
    if (pad < 0)
        pad = default_pad(t_final);
    const CriticalRays cr = critical_rays(d.bg);
    const double lo = cr.xi_cr1 * t_final - pad, hi = cr.xi_cr * t_final + pad;
    if (hi - lo > 1e7)
        throw std::length_error("init_steplike: domain exceeds 1e7 sites");
    long n_min = (long)std::floor(lo), n_max = (long)std::ceil(hi);
    if (!d.pure()) {
        n_min = std::min(n_min, d.n_lo - 2);
        n_max = std::max(n_max, d.n_lo + (long)d.a.size() + 1);
    }
    return init_range(d, n_min, n_max);
}

namespace detail {

// a' = a (b(n+1) - b(n)), b' = 2 (a(n)^2 - a(n-1)^2); boundary cells get zero
inline void toda_rhs(const double* a, const double* b, double* da, double* db, std::size_t N, double sign)
{
    da[0] = db[0] = 0;
    da[N - 1] = db[N - 1] = 0;
    for (std::size_t i = 1; i + 1 < N; ++i) {
        da[i] = sign * a[i] * (b[i + 1] - b[i]);
        db[i] = sign * 2 * (a[i] * a[i] - a[i - 1] * a[i - 1]);
    }
}

}  // namespace detail

struct Stepper {
    std::vector<double> ka[4], kb[4], ta, tb;

    void step(LatticeState& s, double h, double sign)
    {
        const std::size_t N = s.size();
        for (int k = 0; k < 4; ++k) {
            ka[k].resize(N);
            kb[k].resize(N);
        }
        ta.resize(N);
        tb.resize(N);
        detail::toda_rhs(s.a.data(), s.b.data(), ka[0].data(), kb[0].data(), N, sign);
        const double c[3] = {0.5 * h, 0.5 * h, h};
        for (int k = 1; k < 4; ++k) {
            const double* pa = ka[k - 1].data();
            const double* pb = kb[k - 1].data();
            for (std::size_t i = 0; i < N; ++i) {
                ta[i] = s.a[i] + c[k - 1] * pa[i];
                tb[i] = s.b[i] + c[k - 1] * pb[i];
            }
            detail::toda_rhs(ta.data(), tb.data(), ka[k].data(), kb[k].data(), N, sign);
        }
        const double w = h / 6;
        for (std::size_t i = 1; i + 1 < N; ++i) {
            s.a[i] += w * (ka[0][i] + 2 * ka[1][i] + 2 * ka[2][i] + ka[3][i]);
            s.b[i] += w * (kb[0][i] + 2 * kb[1][i] + 2 * kb[2][i] + kb[3][i]);
        }
    }
};

// classical RK4; sign = -1 integrates the reversed flow (t still increases)
inline void evolve_to(LatticeState& s, double t_target, double dt = 0.01, double sign = 1)
{
    if (!(dt > 0))
        throw std::invalid_argument("evolve_to: dt must be positive");
    if (t_target < s.t)
        throw std::invalid_argument("evolve_to: t_target before current time");
    Stepper st;
    const double t0 = s.t;
    const long full = (long)std::floor((t_target - t0) / dt * (1 + 1e-14));
    for (long k = 1; k <= full + 1; ++k) {
        const double tk = k <= full ? t0 + k * dt : t_target;
        const double h = tk - s.t;
        if (h <= 0)
            break;
        st.step(s, h, sign);
        s.t = tk;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (!(s.a[i] > 0)) {
                std::ostringstream os;
                os << "evolve_to: a(n) <= 0 at n = " << s.n_min + (long)i << ", t = " << s.t << ", dt = " << dt;
                throw std::runtime_error(os.str());
            }
    }
    s.t = t_target;
}

// largest n with |b(n) - b_right| > threshold; right background has b = 0
inline long front_detect(const LatticeState& s, double threshold = 1e-3)
{
    for (long n = s.n_max; n >= s.n_min; --n)
        if (std::abs(s.b_at(n)) > threshold)
            return n;
    return s.n_min - 1;
}

inline double window_sum_b(const LatticeState& s, long Nw)
{
    if (!s.contains(-Nw - 1) || !s.contains(Nw))
        throw std::out_of_range("window_sum_b: window outside the domain");
    double sum = 0;
    for (long n = -Nw; n <= Nw; ++n)
        sum += s.b_at(n);
    return sum;
}

}  // namespace todashock
