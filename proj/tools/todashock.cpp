#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "todashock/harness.hpp"

using namespace todashock;

namespace {

// window file: one "n a b" per line, consecutive n, '#' comments
StepData read_window(const std::string& path, const Background& bg)
{
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot open window file " + path);
    std::string raw;
    int line = 0;
    long n_lo = 0, expect = 0;
    bool first = true;
    std::vector<double> a, b;
    while (std::getline(f, raw)) {
        ++line;
        const std::string s = raw.substr(0, raw.find('#'));
        std::istringstream is(s);
        long n;
        double av, bv;
        if (!(is >> n)) {
            if (s.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            throw std::invalid_argument("window line " + std::to_string(line) + ": expected 'n a b'");
        }
        std::string rest;
        if (!(is >> av >> bv) || (is >> rest))
            throw std::invalid_argument("window line " + std::to_string(line) + ": expected 'n a b'");
        if (first) {
            n_lo = expect = n;
            first = false;
        }
        if (n != expect)
            throw std::invalid_argument("window line " + std::to_string(line) + ": sites must be consecutive");
        ++expect;
        a.push_back(av);
        b.push_back(bv);
    }
    if (a.empty())
        throw std::invalid_argument("window file " + path + " has no sites");
    return windowed(bg, n_lo, a, b);
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot write " + path);
    return f;
}

void cmd_critical(double a, double b, const std::string& csv)
{
    const Background bg = make_background(a, b);
    const CriticalRays r = critical_rays(bg);
    const std::pair<const char*, double> rows[] = {
        {"xi_cr", r.xi_cr}, {"xi_cr_prime", r.xi_cr_prime}, {"xi_cr1_prime", r.xi_cr1_prime}, {"xi_cr1", r.xi_cr1}};
    for (auto& [name, v] : rows)
        std::printf("%-14s %.12g\n", name, v);
    if (!csv.empty()) {
        auto f = open_out(csv);
        f << "name,value\n";
        for (auto& [name, v] : rows)
            f << name << ',' << fmt17(v) << '\n';
    }
}

void cmd_scattering(double a, double b, const std::string& window, const std::string& csv)
{
    const Background bg = make_background(a, b);
    const StepData d = window.empty() ? pure_step(bg) : read_window(window, bg);
    const Resonance r = resonance_status(d);
    std::printf("q = %.12g  q1 = %.12g\n", bg.q, bg.q1);
    std::printf("|W(-1)| = %.12g  resonant: %s\n", r.w_m1, r.at_m1 ? "yes" : "no");
    std::printf("|W(1)|  = %.12g  resonant: %s\n", r.w_p1, r.at_p1 ? "yes" : "no");
    std::printf("|W(q)|  = %.12g  resonant: %s\n", r.w_q, r.at_q ? "yes" : "no");
    std::printf("|W(q1)| = %.12g  resonant: %s\n", r.w_q1, r.at_q1 ? "yes" : "no");
    const auto eig = find_eigenvalues(d);
    std::printf("eigenvalues: %zu\n", eig.size());
    for (double z : eig)
        std::printf("  z = %.12g  lambda = %.12g\n", z, lambda_of_z(z).real());
    if (!csv.empty()) {
        auto f = open_out(csv);
        f << "z,im_chi\n";
        const int N = 200;
        for (int k = 1; k < N; ++k) {
            const double z = bg.q1 + (bg.q - bg.q1) * k / N;
            f << fmt17(z) << ',' << fmt17(chi_on_band(z, d).imag()) << '\n';
        }
    }
}

void cmd_gfunction(double a, double b, double xi, int grid, const std::string& csv)
{
    const Background bg = make_background(a, b);
    const GFunction gf(bg, solve_whitham_edge(xi, bg));
    std::printf("xi = %.12g\ny = %.17g\nlambda_y = %.17g\nB = %.17g\n", xi, gf.edge().y, gf.edge().lambda_y, gf.B());
    if (!csv.empty()) {
        auto f = open_out(csv);
        f << "re_z,im_z,sign_re_g\n";
        for (const auto& c : signature_report(gf, grid))
            f << fmt17(c.re) << ',' << fmt17(c.im) << ',' << c.sign << '\n';
    }
}

void cmd_asymptote(double a, double b, double t, const std::string& range, const std::string& csv)
{
    long lo, hi;
    char colon;
    std::istringstream is(range);
    if (!(is >> lo >> colon >> hi) || colon != ':' || lo > hi)
        throw std::invalid_argument("--n-range must look like LO:HI with LO <= HI");
    const Background bg = make_background(a, b);
    const StepData d = pure_step(bg);
    const auto eig = find_eigenvalues(d);
    const Resonance res = resonance_status(d);
    std::ofstream file;
    if (!csv.empty())
        file = open_out(csv);
    std::ostream& out = csv.empty() ? std::cout : file;
    out << "n,t,xi,lambda_nt,b_hat,a2sum_hat\n";
    for (long n = lo; n <= hi; ++n) {
        const double xi = (double)n / t;
        const ModulatedWave w = AsymptoticModel::build(xi, d, eig, res).at((double)n, t);
        out << n << ',' << fmt17(t) << ',' << fmt17(xi) << ',' << fmt17(w.lambda_nt) << ',' << fmt17(w.b_hat) << ','
            << fmt17(w.a2sum_hat) << '\n';
    }
}

void write_snapshot(const LatticeState& s, const std::string& dir)
{
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_t%.6g.csv", s.t);
    auto f = open_out((std::filesystem::path(dir) / name).string());
    f << "n,a,b\n";
    for (long n = s.n_min; n <= s.n_max; ++n)
        f << n << ',' << fmt17(s.a_at(n)) << ',' << fmt17(s.b_at(n)) << '\n';
}

void cmd_simulate(double a, double b, double t, double dt, double pad, double every, const std::string& dir)
{
    const Background bg = make_background(a, b);
    LatticeState s = init_steplike(pure_step(bg), t, pad);
    std::filesystem::create_directories(dir);
    int snaps = 0;
    if (every > 0) {
        for (double ts = every; ts < t; ts += every) {
            evolve_to(s, ts, dt);
            write_snapshot(s, dir);
            ++snaps;
        }
    }
    evolve_to(s, t, dt);
    write_snapshot(s, dir);
    ++snaps;
    auto f = open_out((std::filesystem::path(dir) / "manifest.txt").string());
    f << "a=" << fmt17(a) << "\nb=" << fmt17(b) << "\nt=" << fmt17(t) << "\ndt=" << fmt17(dt)
      << "\npad=" << fmt17(pad < 0 ? default_pad(t) : pad) << "\nn_min=" << s.n_min << "\nn_max=" << s.n_max
      << "\nsnapshot_every=" << fmt17(every) << "\nsnapshots=" << snaps << "\nfront=" << front_detect(s) << '\n';
    std::printf("domain %ld..%ld, %d snapshot(s) in %s, front at n = %ld\n", s.n_min, s.n_max, snaps, dir.c_str(),
                front_detect(s));
}

int cmd_compare(const std::string& config, const std::string& out_opt)
{
    CompareConfig cfg = parse_config(config);
    for (const auto& w : cfg.warnings)
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    const std::string dir = out_opt.empty() ? cfg.out : out_opt;
    const ErrorReport rep = run_compare(cfg);
    write_outputs(rep, dir);
    std::printf("%-8s %-14s %-14s\n", "t", "max_err_b", "max_err_a");
    for (std::size_t i = 0; i < rep.t.size(); ++i)
        std::printf("%-8g %-14.6e %-14.6e\n", rep.t[i], rep.max_err_b[i], rep.max_err_a[i]);
    std::printf("slope b = %.4f (rms %.3f), slope a2sum = %.4f (rms %.3f)\n", rep.fit_b.slope, rep.fit_b.residual,
                rep.fit_a.slope, rep.fit_a.residual);
    std::printf("slopes in [-1.4, -0.6]: %s\n", rep.slopes_ok ? "yes" : "no");
    std::printf("errors at last t below first t at every xi: %s\n", rep.monotone_ok ? "yes" : "no");
    std::printf("outputs in %s (%.1f s)\n", dir.c_str(), rep.seconds);
    return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Toda shock wave: spectral data, modulated elliptic wave and lattice simulation"};
    app.require_subcommand(1);
    double a = 1, b = -4;
    auto add_bg = [&](CLI::App* s) {
        s->add_option("--a", a, "left background a")->capture_default_str();
        s->add_option("--b", b, "left background b")->capture_default_str();
    };

    std::string csv;
    auto* crit = app.add_subcommand("critical-values", "critical rays of the shock");
    add_bg(crit);
    crit->add_option("--csv", csv, "write name,value CSV");

    std::string window;
    auto* scat = app.add_subcommand("scattering", "Wronskian at the band edges, resonances, eigenvalues");
    add_bg(scat);
    scat->add_option("--window", window, "file of 'n a b' lines replacing the pure step on a finite window");
    scat->add_option("--csv", csv, "write z,im_chi on the left band");

    double xi = 0.8;
    int grid = 60;
    auto* gfn = app.add_subcommand("gfunction", "Whitham edge, B and the sign table of Re g");
    add_bg(gfn);
    gfn->add_option("--xi", xi, "ray n/t")->capture_default_str();
    gfn->add_option("--grid", grid, "polar grid size for the sign table")->capture_default_str();
    gfn->add_option("--csv", csv, "write re_z,im_z,sign_re_g");

    double t = 800;
    std::string range = "0:10";
    auto* asy = app.add_subcommand("asymptote", "modulated elliptic wave b_hat, a2sum_hat");
    add_bg(asy);
    asy->add_option("--t", t, "time")->capture_default_str();
    asy->add_option("--n-range", range, "LO:HI")->capture_default_str();
    asy->add_option("--csv", csv, "output file (default stdout)");

    double dt = 0.01, pad = -1, every = 0;
    std::string sim_out = "simulate_out";
    auto* sim = app.add_subcommand("simulate", "RK4 integration of the lattice from the pure step");
    add_bg(sim);
    sim->add_option("--t", t, "final time")->capture_default_str();
    sim->add_option("--dt", dt, "step")->capture_default_str();
    sim->add_option("--pad", pad, "domain padding (default 50 + 10 sqrt(t))");
    sim->add_option("--snapshot-every", every, "snapshot interval (0: final state only)")->capture_default_str();
    sim->add_option("--out", sim_out, "output directory")->capture_default_str();

    std::string config, cmp_out;
    auto* cmp = app.add_subcommand("compare", "simulation against asymptotics on a (xi, t) grid");
    cmp->add_option("--config", config, "key=value file")->required();
    cmp->add_option("--out", cmp_out, "output directory (overrides 'out')");
    cmp->footer(config_help());

    CLI11_PARSE(app, argc, argv);
    try {
        if (*crit)
            cmd_critical(a, b, csv);
        else if (*scat)
            cmd_scattering(a, b, window, csv);
        else if (*gfn)
            cmd_gfunction(a, b, xi, grid, csv);
        else if (*asy)
            cmd_asymptote(a, b, t, range, csv);
        else if (*sim)
            cmd_simulate(a, b, t, dt, pad, every, sim_out);
        else if (*cmp)
            return cmd_compare(config, cmp_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
