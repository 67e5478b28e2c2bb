#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "asymptotics.hpp"
#include "lattice_sim.hpp"

namespace todashock {

struct CompareConfig {
    double a = 1, b = -4;
    double epsilon = 0.3;
    std::vector<double> t_list{100, 200, 400, 800};
    std::vector<double> xi_grid;  // empty: n_xi points spread over the window
    int n_xi = 9;
    double dt = 0.002;  // 0.01 leaves RK4 phase error ~5e-2 at t = 800
    double pad = -1;  // negative: 50 + 10 sqrt(t_max)
    double edge_eps = 0.05;
    std::string out = "compare_out";
    std::vector<std::string> warnings;
};

inline const char* config_help()
{
    return "config keys (key=value, '#' comments):\n"
           "  a, b        left background (default 1, -4)\n"
           "  epsilon     margin of the xi window (default 0.3)\n"
           "  t_list      comma separated increasing times (default 100,200,400,800)\n"
           "  xi_grid     comma separated rays (default: n_xi evenly spaced in the window)\n"
           "  n_xi        number of default rays (default 9)\n"
           "  dt          RK4 step (default 0.002)\n"
           "  pad         domain padding in sites (default 50 + 10 sqrt(t_max))\n"
           "  edge_eps    window margin of the Whitham solve (default 0.05)\n"
           "  out         output directory (default compare_out)\n";
}

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& v, int line)
{
    std::size_t used = 0;
    double x = 0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || trim(v.substr(used)) != "" || !std::isfinite(x))
        throw std::invalid_argument("config line " + std::to_string(line) + ": not a number: '" + v + "'");
    return x;
}

inline std::vector<double> parse_list(const std::string& v, int line)
{
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_real(trim(item), line));
    if (out.empty())
        throw std::invalid_argument("config line " + std::to_string(line) + ": empty list");
    return out;
}

}  // namespace detail

// window check and default grid; run after all keys are known
inline void finalize_config(CompareConfig& c)
{
    const Background bg = make_background(c.a, c.b);
    if (!(c.epsilon > 0))
        throw std::invalid_argument("config: epsilon must be positive");
    if (!(c.dt > 0))
        throw std::invalid_argument("config: dt must be positive");
    if (c.t_list.empty())
        throw std::invalid_argument("config: t_list is empty");
    for (std::size_t i = 0; i < c.t_list.size(); ++i) {
        if (!(c.t_list[i] > 0))
            throw std::invalid_argument("config: t_list entries must be positive");
        if (i > 0 && !(c.t_list[i] > c.t_list[i - 1]))
            throw std::invalid_argument("config: t_list must be strictly increasing");
    }
    const CriticalRays cr = critical_rays(bg);
    const double lo = cr.xi_cr_prime + c.epsilon, hi = cr.xi_cr - c.epsilon;
    if (!(lo < hi))
        throw std::invalid_argument("config: epsilon leaves an empty xi window");
    if (c.xi_grid.empty()) {
        if (c.n_xi < 1)
            throw std::invalid_argument("config: n_xi must be >= 1");
        for (int k = 0; k < c.n_xi; ++k)
            c.xi_grid.push_back(c.n_xi == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * k / (c.n_xi - 1));
    }
    for (double xi : c.xi_grid)
        if (!(xi >= lo && xi <= hi)) {
            std::ostringstream os;
            os << "config: xi = " << xi << " outside the window [xi'_cr + eps, xi_cr - eps] = [" << lo << ", " << hi << "]";
            throw std::invalid_argument(os.str());
        }
}

inline CompareConfig parse_config_text(const std::string& text)
{
    CompareConfig c;
    std::map<std::string, int> seen;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw.substr(0, raw.find('#'));
        s = detail::trim(s);
        if (s.empty())
            continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line) + ": expected key=value");
        const std::string key = detail::trim(s.substr(0, eq)), val = detail::trim(s.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::invalid_argument("config line " + std::to_string(line) + ": empty key or value");
        if (seen.count(key))
            c.warnings.push_back("config line " + std::to_string(line) + ": duplicate key '" + key +
                                 "' overrides line " + std::to_string(seen[key]));
        seen[key] = line;
        if (key == "a")
            c.a = detail::parse_real(val, line);
        else if (key == "b")
            c.b = detail::parse_real(val, line);
        else if (key == "epsilon")
            c.epsilon = detail::parse_real(val, line);
        else if (key == "t_list")
            c.t_list = detail::parse_list(val, line);
        else if (key == "xi_grid")
            c.xi_grid = detail::parse_list(val, line);
        else if (key == "n_xi") {
            const double v = detail::parse_real(val, line);
            if (v != std::floor(v))
                throw std::invalid_argument("config line " + std::to_string(line) + ": n_xi must be an integer");
            c.n_xi = (int)v;
        } else if (key == "dt")
            c.dt = detail::parse_real(val, line);
        else if (key == "pad")
            c.pad = detail::parse_real(val, line);
        else if (key == "edge_eps")
            c.edge_eps = detail::parse_real(val, line);
        else if (key == "out")
            c.out = val;
        else
            throw std::invalid_argument("config line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
    finalize_config(c);
    return c;
}

inline CompareConfig parse_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot open config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

struct CompareRow {
    double xi, t;
    long n;
    double b_sim, b_hat, err_b, a2sum_sim, a2sum_hat, err_a;
};

struct DecayFit {
    double slope = 0, intercept = 0, residual = 0;
};

// least squares of log e against log t; residual is the rms of the fit
inline DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& e)
{
    if (t.size() != e.size())
        throw std::invalid_argument("fit_decay: size mismatch");
    if (t.size() < 3)
        throw std::invalid_argument("fit_decay: need at least 3 points");
    const std::size_t N = t.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < N; ++i) {
        if (!(t[i] > 0 && e[i] > 0))
            throw std::invalid_argument("fit_decay: times and errors must be positive");
        const double x = std::log(t[i]), y = std::log(e[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    DecayFit f;
    const double den = N * sxx - sx * sx;
    f.slope = (N * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / N;
    double r2 = 0;
    for (std::size_t i = 0; i < N; ++i) {
        const double r = std::log(e[i]) - f.intercept - f.slope * std::log(t[i]);
        r2 += r * r;
    }
    f.residual = std::sqrt(r2 / N);
    return f;
}

struct RayConstants {
    double xi, y, B, Delta, Gamma, im_tau, im_Lambda, im_U;
};

struct ErrorReport {
    CompareConfig config;
    Background bg;
    CriticalRays rays{};
    std::vector<CompareRow> rows;
    std::vector<double> t, max_err_b, max_err_a;
    std::vector<RayConstants> constants;
    DecayFit fit_b, fit_a;
    bool slopes_ok = false, monotone_ok = false;
    int evolve_calls = 0;
    long n_min = 0, n_max = 0;
    double seconds = 0;

    bool passed() const { return slopes_ok && monotone_ok; }
};

inline bool slope_in_window(double s) { return s >= -1.4 && s <= -0.6; }

inline ErrorReport run_compare(const CompareConfig& cfg)
{
    const auto t0 = std::chrono::steady_clock::now();
    ErrorReport rep;
    rep.config = cfg;
    rep.bg = make_background(cfg.a, cfg.b);
    rep.rays = critical_rays(rep.bg);
    const StepData d = pure_step(rep.bg);
    const auto eig = find_eigenvalues(d);
    const Resonance res = resonance_status(d);

    for (double xi : cfg.xi_grid) {
        const AsymptoticModel m = AsymptoticModel::build(xi, d, eig, res, cfg.edge_eps);
        rep.constants.push_back({xi, m.S->y(), m.S->B(), m.ps.Delta, m.S->Gamma(), m.S->tau().imag(),
                                 m.S->Lambda().imag(), m.S->U().imag()});
    }

    LatticeState st = init_steplike(d, cfg.t_list.back(), cfg.pad);
    rep.n_min = st.n_min;
    rep.n_max = st.n_max;
    for (double t : cfg.t_list) {
        evolve_to(st, t, cfg.dt);
        ++rep.evolve_calls;
        double mb = 0, ma = 0;
        for (double xi : cfg.xi_grid) {
            const long n = std::lround(xi * t);
            const AsymptoticModel m = AsymptoticModel::build((double)n / t, d, eig, res, cfg.edge_eps);
            const ModulatedWave w = m.at((double)n, t);
            CompareRow r{};
            r.xi = xi;
            r.t = t;
            r.n = n;
            r.b_sim = st.b_at(n);
            r.b_hat = w.b_hat;
            r.err_b = std::abs(r.b_sim - r.b_hat);
            r.a2sum_sim = st.a_at(n) * st.a_at(n) + st.a_at(n - 1) * st.a_at(n - 1);
            r.a2sum_hat = w.a2sum_hat;
            r.err_a = std::abs(r.a2sum_sim - r.a2sum_hat);
            mb = std::max(mb, r.err_b);
            ma = std::max(ma, r.err_a);
            rep.rows.push_back(r);
        }
        rep.t.push_back(t);
        rep.max_err_b.push_back(mb);
        rep.max_err_a.push_back(ma);
    }
    if (rep.evolve_calls != (int)cfg.t_list.size())
        throw std::logic_error("run_compare: expected one evolution per t");

    if (rep.t.size() >= 3) {
        rep.fit_b = fit_decay(rep.t, rep.max_err_b);
        rep.fit_a = fit_decay(rep.t, rep.max_err_a);
        rep.slopes_ok = slope_in_window(rep.fit_b.slope) && slope_in_window(rep.fit_a.slope);
    }
    const std::size_t nx = cfg.xi_grid.size(), nt = cfg.t_list.size();
    rep.monotone_ok = nt >= 2;
    for (std::size_t k = 0; k < nx && nt >= 2; ++k) {
        const CompareRow& first = rep.rows[k];
        const CompareRow& last = rep.rows[(nt - 1) * nx + k];
        if (!(last.err_b < first.err_b && last.err_a < first.err_a))
            rep.monotone_ok = false;
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

inline std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string decay_svg(const ErrorReport& rep)
{
    const double W = 640, H = 420, L = 70, R = 20, T = 20, Bm = 50;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (rep.t.empty()) {
        os << "<text x=\"20\" y=\"40\">no data</text>\n</svg>\n";
        return os.str();
    }
    double x0 = std::log10(rep.t.front()), x1 = std::log10(rep.t.back());
    if (x1 <= x0)
        x1 = x0 + 1;
    double y0 = 1e300, y1 = -1e300;
    for (std::size_t i = 0; i < rep.t.size(); ++i)
        for (double e : {rep.max_err_b[i], rep.max_err_a[i]}) {
            const double v = std::log10(std::max(e, 1e-300));
            y0 = std::min(y0, v);
            y1 = std::max(y1, v);
        }
    y0 = std::floor(y0 - 0.2);
    y1 = std::ceil(y1 + 0.2);
    auto px = [&](double lx) { return L + (W - L - R) * (lx - x0) / (x1 - x0); };
    auto py = [&](double ly) { return T + (H - T - Bm) * (y1 - ly) / (y1 - y0); };
    os << "<line x1=\"" << L << "\" y1=\"" << H - Bm << "\" x2=\"" << W - R << "\" y2=\"" << H - Bm << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - Bm << "\" stroke=\"black\"/>\n";
    for (double t : rep.t)
        os << "<text x=\"" << px(std::log10(t)) << "\" y=\"" << H - Bm + 18 << "\" font-size=\"12\" text-anchor=\"middle\">" << t
           << "</text>\n";
    for (int k = (int)y0; k <= (int)y1; ++k)
        os << "<text x=\"" << L - 6 << "\" y=\"" << py(k) + 4 << "\" font-size=\"12\" text-anchor=\"end\">1e" << k << "</text>\n";
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 8 << "\" font-size=\"13\" text-anchor=\"middle\">t</text>\n";
    auto series = [&](const std::vector<double>& e, const char* color, const char* label, double ly) {
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < rep.t.size(); ++i)
            os << px(std::log10(rep.t[i])) << "," << py(std::log10(e[i])) << " ";
        os << "\"/>\n";
        for (std::size_t i = 0; i < rep.t.size(); ++i)
            os << "<circle cx=\"" << px(std::log10(rep.t[i])) << "\" cy=\"" << py(std::log10(e[i])) << "\" r=\"3\" fill=\"" << color
               << "\"/>\n";
        os << "<text x=\"" << W - R - 190 << "\" y=\"" << ly << "\" font-size=\"12\" fill=\"" << color << "\">" << label << "</text>\n";
    };
    series(rep.max_err_b, "steelblue", "max |b - b_hat|", T + 16);
    series(rep.max_err_a, "firebrick", "max |a2sum - a2sum_hat|", T + 32);
    // slope -1 guide through the first b point
    const double gy0 = std::log10(rep.max_err_b.front()), gy1 = gy0 - (x1 - x0);
    os << "<line x1=\"" << px(x0) << "\" y1=\"" << py(gy0) << "\" x2=\"" << px(x1) << "\" y2=\"" << py(gy1)
       << "\" stroke=\"gray\" stroke-dasharray=\"5,4\"/>\n";
    os << "<text x=\"" << W - R - 190 << "\" y=\"" << T + 48 << "\" font-size=\"12\" fill=\"gray\">slope -1</text>\n";
    os << "</svg>\n";
    return os.str();
}

inline void write_outputs(const ErrorReport& rep, const std::string& dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw std::runtime_error("write_outputs: cannot create directory " + dir);
    auto open = [&](const std::string& name) {
        std::ofstream f(fs::path(dir) / name);
        if (!f)
            throw std::runtime_error("write_outputs: cannot write " + (fs::path(dir) / name).string());
        return f;
    };
    {
        auto f = open("compare.csv");
        f << "xi,t,n,b_sim,b_hat,err_b,a2sum_sim,a2sum_hat,err_a\n";
        for (const auto& r : rep.rows)
            f << fmt17(r.xi) << ',' << fmt17(r.t) << ',' << r.n << ',' << fmt17(r.b_sim) << ',' << fmt17(r.b_hat) << ','
              << fmt17(r.err_b) << ',' << fmt17(r.a2sum_sim) << ',' << fmt17(r.a2sum_hat) << ',' << fmt17(r.err_a) << '\n';
    }
    {
        auto f = open("summary.csv");
        f << "t,max_err_b,max_err_a\n";
        for (std::size_t i = 0; i < rep.t.size(); ++i)
            f << fmt17(rep.t[i]) << ',' << fmt17(rep.max_err_b[i]) << ',' << fmt17(rep.max_err_a[i]) << '\n';
    }
    open("decay.svg") << decay_svg(rep);
    {
        auto f = open("manifest.txt");
        const CompareConfig& c = rep.config;
        f << "a=" << fmt17(c.a) << "\nb=" << fmt17(c.b) << "\nepsilon=" << fmt17(c.epsilon) << "\ndt=" << fmt17(c.dt)
          << "\npad=" << fmt17(c.pad) << "\nedge_eps=" << fmt17(c.edge_eps) << "\nt_list=";
        for (std::size_t i = 0; i < c.t_list.size(); ++i)
            f << (i ? "," : "") << fmt17(c.t_list[i]);
        f << "\nxi_grid=";
        for (std::size_t i = 0; i < c.xi_grid.size(); ++i)
            f << (i ? "," : "") << fmt17(c.xi_grid[i]);
        f << "\nq=" << fmt17(rep.bg.q) << "\nq1=" << fmt17(rep.bg.q1) << "\nxi_cr=" << fmt17(rep.rays.xi_cr)
          << "\nxi_cr_prime=" << fmt17(rep.rays.xi_cr_prime) << "\nxi_cr1_prime=" << fmt17(rep.rays.xi_cr1_prime)
          << "\nxi_cr1=" << fmt17(rep.rays.xi_cr1) << "\ndomain=" << rep.n_min << ".." << rep.n_max
          << "\nevolve_calls=" << rep.evolve_calls << '\n';
        for (const auto& k : rep.constants)
            f << "ray xi=" << fmt17(k.xi) << " y=" << fmt17(k.y) << " B=" << fmt17(k.B) << " Delta=" << fmt17(k.Delta)
              << " Gamma=" << fmt17(k.Gamma) << " im_tau=" << fmt17(k.im_tau) << " im_Lambda=" << fmt17(k.im_Lambda)
              << " im_U=" << fmt17(k.im_U) << '\n';
        f << "slope_b=" << fmt17(rep.fit_b.slope) << "\nresidual_b=" << fmt17(rep.fit_b.residual)
          << "\nslope_a=" << fmt17(rep.fit_a.slope) << "\nresidual_a=" << fmt17(rep.fit_a.residual)
          << "\nslopes_ok=" << rep.slopes_ok << "\nmonotone_ok=" << rep.monotone_ok << "\nseconds=" << rep.seconds << '\n';
    }
}

// ray where lambda_y = lambda0 (period 2 for lambda0 = -4)
inline double ray_with_edge(const Background& bg, double lambda0 = -4)
{
    return xi_of_edge(z_of_lambda(lambda0), bg);
}

// max |b_hat(n+2) - b_hat(n)| over `count` consecutive n near xi0 t, xi frozen at xi0
inline double period_two_defect(const StepData& d, double t, int count = 10, double lambda0 = -4)
{
    const double xi0 = ray_with_edge(d.bg, lambda0);
    const AsymptoticModel m = AsymptoticModel::build(xi0, d);
    const long n0 = std::lround(xi0 * t);
    double worst = 0;
    for (long n = n0; n < n0 + count; ++n)
        worst = std::max(worst, std::abs(m.at_frozen((double)n + 2, t).b_hat - m.at_frozen((double)n, t).b_hat));
    return worst;
}

}  // namespace todashock
