#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hg/grid.hpp"
#include "hg/hessian.hpp"
#include "hg/kernel.hpp"
#include "hg/poles.hpp"
#include "hg/solver.hpp"
#include "hg/suite.hpp"
#include "hg/verify.hpp"
#include "svg.hpp"

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    int m = 1;
    int n = 1;
    double R0 = kUnset;
    std::string domain = "disk";
    std::vector<double> center;
    double radius = 1.0;
    std::vector<double> rect;
    std::string poles;
    double delta0 = kUnset, gamma0 = kUnset, gamma1 = kUnset, sigma0 = kUnset;
    int res = 257;
    double tol = 1e-10;
    std::uint64_t seed = 20240607;
    std::string out;
    std::string svg;
    std::string config;
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--m", c.m, "Hessian order m (1 <= m <= n)")->capture_default_str();
    sub->add_option("--n", c.n, "Complex dimension n")->capture_default_str();
    sub->add_option("--R0", c.R0, "Scale radius of the logarithmic kernel (default 2*diam+1)");
    sub->add_option("--domain", c.domain, "Domain kind: disk, rectangle or ball")
        ->check(CLI::IsMember({"disk", "rectangle", "ball"}))
        ->capture_default_str();
    sub->add_option("--center", c.center, "Domain center as real coordinates, comma separated")->delimiter(',');
    sub->add_option("--radius", c.radius, "Disk or ball radius")->capture_default_str();
    sub->add_option("--rect", c.rect, "Rectangle bounds x0,x1,y0,y1")->delimiter(',')->expected(4);
    sub->add_option("--poles", c.poles, "Pole set: CSV or JSON file, or inline:x,y,...,nu;...");
    sub->add_option("--delta0", c.delta0, "Family constant delta0 (default: tightest for the poles)");
    sub->add_option("--gamma0", c.gamma0, "Family constant gamma0 (default: smallest weight)");
    sub->add_option("--gamma1", c.gamma1, "Family constant gamma1 (default: total weight)");
    sub->add_option("--sigma0", c.sigma0, "Family constant sigma0 (default: pole separation)");
    sub->add_option("--res", c.res, "Grid resolution (nodes per side)")->capture_default_str();
    sub->add_option("--tol", c.tol, "Solver tolerance on the max update")->capture_default_str();
    sub->add_option("--seed", c.seed, "Sampling seed")->capture_default_str();
    sub->add_option("--out", c.out, "Output file (.csv, .bin or .json by extension)");
    sub->add_option("--svg", c.svg, "Also render the exported CSV data as SVG");
    sub->add_option("--config", c.config, "key=value file; keys are long option names, flags win");
}

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

// Applies key=value lines to options that were not given on the command line.
void apply_config(CLI::App* sub, const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#')
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key == "config")
            throw ConfigError(path + ":" + std::to_string(lineno) + ": nested config files are not allowed");
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (!opt)
            opt = sub->get_option_no_throw(key);
        if (!opt)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (opt->count() > 0)
            continue;
        try {
            if (opt->get_expected_max() > 1 || opt->get_delimiter() != '\0') {
                std::stringstream ss(value);
                std::string item;
                while (std::getline(ss, item, ','))
                    opt->add_result(trim(item));
            } else {
                opt->add_result(value);
            }
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": field '" + key + "': " + e.what());
        }
    }
}

hg::DomainSpec make_domain(const Common& c)
{
    if (c.domain == "rectangle") {
        if (c.rect.size() != 4)
            throw ConfigError("--rect needs x0,x1,y0,y1 for a rectangle");
        return hg::DomainSpec::rectangle(c.rect[0], c.rect[1], c.rect[2], c.rect[3]);
    }
    if (c.domain == "disk") {
        double cx = c.center.size() > 0 ? c.center[0] : 0.0, cy = c.center.size() > 1 ? c.center[1] : 0.0;
        if (!c.center.empty() && c.center.size() != 2)
            throw ConfigError("--center needs two coordinates for a disk");
        return hg::DomainSpec::disk(cx, cy, c.radius);
    }
    hg::Point ctr = c.center.empty() ? hg::Point(2 * c.n, 0.0) : c.center;
    if (ctr.size() != static_cast<std::size_t>(2 * c.n))
        throw ConfigError("--center needs 2n coordinates for a ball");
    return hg::DomainSpec::ball(ctr, c.radius);
}

hg::HessianParams make_params(const Common& c, const hg::DomainSpec& dom)
{
    double R0 = std::isnan(c.R0) ? hg::default_R0(dom.diam()) : c.R0;
    return hg::make_params(c.m, c.n, R0);
}

hg::PoleSet load_poles(const Common& c)
{
    if (c.poles.empty())
        throw ConfigError("--poles is required");
    return hg::parse_poles_arg(c.poles);
}

// Tight constants of the pole set when one is given, library defaults otherwise; flags override.
hg::FamilyParams make_family(const Common& c, const hg::HessianParams& p, const hg::DomainSpec& dom)
{
    hg::FamilyParams f = c.poles.empty() ? hg::FamilyParams{} : hg::tight_family(p, dom, load_poles(c));
    if (!std::isnan(c.delta0))
        f.delta0 = c.delta0;
    if (!std::isnan(c.gamma0))
        f.gamma0 = c.gamma0;
    if (!std::isnan(c.gamma1))
        f.gamma1 = c.gamma1;
    if (!std::isnan(c.sigma0))
        f.sigma0 = c.sigma0;
    f.validate();
    return f;
}

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << text;
}

bool ends_with(const std::string& s, const std::string& suffix)
{
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct EvalArgs {
    bool phi = false, phi_inv = false, theta = false, psi = false, phi_weight = false, green = false;
    bool lipschitz = false, schedule = false;
    double r = kUnset, t = kUnset, delta = kUnset, nu = 1.0, alpha = 0.0, C0 = kUnset, C1 = kUnset;
    std::vector<double> z;
};

int run_eval(const Common& c, const EvalArgs& e)
{
    int picked = e.phi + e.phi_inv + e.theta + e.psi + e.phi_weight + e.green + e.lipschitz + e.schedule;
    if (picked != 1)
        throw ConfigError("eval: choose exactly one quantity");
    auto need = [](double v, const char* name) {
        if (std::isnan(v))
            throw ConfigError(std::string("eval: ") + name + " is required");
        return v;
    };
    auto dom = make_domain(c);
    auto p = make_params(c, dom);
    if (e.phi) {
        std::cout << num(hg::phi(p, need(e.r, "--r"))) << '\n';
    } else if (e.phi_inv) {
        std::cout << num(hg::phi_inv(p, need(e.t, "--t"))) << '\n';
    } else if (e.theta) {
        std::cout << num(hg::theta(p, need(e.delta, "--delta"), e.nu)) << '\n';
    } else if (e.psi || e.phi_weight || e.green) {
        auto A = load_poles(c);
        if (e.z.empty())
            throw ConfigError("eval: --z is required");
        double v;
        if (e.green)
            v = hg::disk_oracle_result(p, dom, A).eval(e.z);
        else
            v = e.psi ? hg::psi_weight(p, A, e.z) : hg::phi_weight(p, A, e.z);
        std::cout << (hg::at_pole(v) ? std::string("-inf") : num(v)) << '\n';
    } else {
        auto f = make_family(c, p, dom);
        if (e.lipschitz) {
            auto L = hg::lipschitz_constants(p, f);
            std::cout << "L=" << num(L.L) << " Lp=" << num(L.Lp) << '\n';
        } else {
            auto s = hg::perturbation_schedule(p, f, need(e.C0, "--C0"), need(e.C1, "--C1"), need(e.r, "--r"),
                                               e.alpha);
            std::cout << "delta=" << num(s.delta) << " eps=" << num(s.eps) << " tau=" << num(s.tau)
                      << " r0=" << num(s.r0) << " R1=" << num(s.R1) << '\n';
        }
    }
    return 0;
}

int run_green(const Common& c, const std::string& method)
{
    auto dom = make_domain(c);
    auto p = make_params(c, dom);
    auto A = load_poles(c);
    nlohmann::json summary;
    std::string csv;
    if (method == "radial") {
        auto G = hg::green_radial(p, dom, A);
        std::vector<double> mesh;
        for (int k = 0; k < c.res; ++k)
            mesh.push_back(dom.R * std::pow(10.0, -4.0 * (c.res - 1 - k) / (c.res - 1)));
        auto tab = hg::radial_envelope_iterate(p, dom.R, A[0].nu, mesh);
        std::ostringstream os;
        os << "r,G\n";
        for (std::size_t k = 0; k < mesh.size(); ++k)
            os << num(tab.r[k]) << ',' << num(tab.G[k]) << '\n';
        csv = os.str();
        summary = {{"method", "radial"}, {"points", mesh.size()}};
    } else {
        auto grid = hg::build_grid(dom, c.res);
        hg::GridFunction values;
        if (method == "grid") {
            auto G = hg::green_grid(p, dom, A, grid, c.tol);
            summary = {{"method", "grid"},
                       {"h", G.h},
                       {"sweeps", G.sweeps},
                       {"boundary_max_abs", G.boundary_max_abs},
                       {"max_subharmonic_violation", G.max_subharmonic_violation}};
            values = *G.G;
        } else {
            auto G = hg::disk_oracle_result(p, dom, A);
            values = hg::sample_function(grid, [&G](const hg::Point& z) { return G.eval(z); });
            for (std::size_t k = 0; k < grid->kind.size(); ++k)
                if (grid->kind[k] == hg::NodeKind::Boundary)
                    values[k] = 0.0;
            summary = {{"method", "oracle"}, {"h", grid->h}};
        }
        std::ostringstream os;
        hg::write_grid_csv(os, values);
        csv = os.str();
        if (!c.out.empty() && ends_with(c.out, ".bin"))
            hg::save_grid(c.out, values);
    }
    if (!c.out.empty() && !ends_with(c.out, ".bin"))
        write_text(c.out, csv);
    if (!c.svg.empty()) {
        auto table = hgtool::parse_csv(csv);
        write_text(c.svg, method == "radial" ? hgtool::svg_lines(table, "r", {"G"}, true, false)
                                             : hgtool::svg_heatmap(table));
    }
    std::cout << summary.dump() << '\n';
    return 0;
}

int run_hausdorff(const std::string& a, const std::string& b)
{
    auto A = hg::parse_poles_arg(a);
    auto B = hg::parse_poles_arg(b);
    std::cout << "d_H=" << num(hg::d_hausdorff(A, B)) << '\n';
    if (A.size() == B.size())
        std::cout << "d_L=" << num(hg::d_lelong(A, B)) << '\n';
    return 0;
}

int run_lelong(const Common& c, const std::string& method, const std::vector<double>& at, double r_start,
               int count)
{
    auto dom = make_domain(c);
    auto p = make_params(c, dom);
    auto A = load_poles(c);
    hg::Point a = at.empty() ? A[0].a : at;
    auto radii = hg::geometric_radii(r_start, count);
    hg::LelongResult L;
    if (method == "grid") {
        auto grid = hg::build_grid(dom, c.res);
        auto G = hg::green_grid(p, dom, A, grid, c.tol);
        L = hg::lelong_number(*G.G, p, a, radii);
    } else {
        auto G = method == "radial" ? hg::green_radial(p, dom, A) : hg::disk_oracle_result(p, dom, A);
        hg::SmoothSample u{[&G](const hg::Point& z) { return G.eval(z); }};
        L = hg::lelong_number(u, p, a, radii);
    }
    std::cout << "nu=" << num(L.estimate) << '\n';
    return 0;
}

int run_verify(const hg::SuiteConfig& cfg)
{
    auto res = hg::run_suite(cfg);
    for (const auto& r : res.reports) {
        std::printf("%s %-36s max_violation=%-24s budget=%s%s\n", r.pass ? "PASS" : "FAIL", r.id.c_str(),
                    num(r.max_violation).c_str(), num(r.budget).c_str(), hg::is_gating(r) ? "" : " (diagnostic)");
    }
    for (const auto& id : res.failed)
        std::printf("failing gate: %s\n", id.c_str());
    return res.status;
}

int run_modulus(const Common& c, const std::string& which, double exponent, double r_max, int levels,
                int per_level)
{
    auto prob = which == "radial" ? hg::radial_modulus_problem(exponent) : hg::disk_modulus_problem(exponent);
    if (std::isnan(r_max)) {
        r_max = hg::schedule_r0(prob.p, prob.f);
        if (which == "disk")
            r_max = std::min(r_max, 0.1);
    }
    auto rep = hg::modulus_fit(prob, r_max, levels, static_cast<std::size_t>(per_level), c.seed);
    std::ostringstream os;
    rep.write_csv(os);
    if (!c.out.empty()) {
        if (ends_with(c.out, ".json"))
            write_text(c.out, rep.to_json().dump(2) + "\n");
        else
            write_text(c.out, os.str());
    }
    if (!c.svg.empty())
        write_text(c.svg, hgtool::svg_lines(hgtool::parse_csv(os.str()), "r", {"sup_ratio", "q99_ratio"}, true,
                                            true));
    std::cout << rep.to_json().dump() << '\n';
    return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Weighted m-subharmonic Green functions: kernels, solvers and verification"};
    app.require_subcommand(1);

    Common c_eval, c_green, c_lelong, c_verify, c_modulus, c_haus;

    auto* eval = app.add_subcommand("eval", "Evaluate kernels, weights and constants");
    add_common(eval, c_eval);
    EvalArgs ea;
    eval->add_flag("--phi", ea.phi, "Fundamental solution Phi(r)");
    eval->add_flag("--phi-inv", ea.phi_inv, "Inverse of Phi at --t");
    eval->add_flag("--theta", ea.theta, "Weighted radius theta(delta, nu)");
    eval->add_flag("--psi", ea.psi, "Sum weight psi(z, A)");
    eval->add_flag("--phi-weight", ea.phi_weight, "Minimum weight phi(z, A)");
    eval->add_flag("--green", ea.green, "Closed-form disk Green function at --z (m = n = 1)");
    eval->add_flag("--lipschitz", ea.lipschitz, "Lipschitz constants L and L' of the family");
    eval->add_flag("--schedule", ea.schedule, "Perturbation schedule at --r with --C0, --C1, --alpha");
    eval->add_option("--r", ea.r, "Radius");
    eval->add_option("--t", ea.t, "Kernel value");
    eval->add_option("--delta", ea.delta, "Sublevel radius delta");
    eval->add_option("--nu", ea.nu, "Weight")->capture_default_str();
    eval->add_option("--alpha", ea.alpha, "Modulus exponent alpha in [0, 1)")->capture_default_str();
    eval->add_option("--C0", ea.C0, "Schedule constant C0");
    eval->add_option("--C1", ea.C1, "Schedule constant C1");
    eval->add_option("--z", ea.z, "Point as real coordinates, comma separated")->delimiter(',');

    auto* green = app.add_subcommand("green", "Compute a Green function and export it");
    add_common(green, c_green);
    std::string green_method = "grid";
    green->add_option("--method", green_method, "grid, oracle (unit-disk closed form) or radial")
        ->check(CLI::IsMember({"grid", "oracle", "radial"}))
        ->capture_default_str();

    auto* haus = app.add_subcommand("hausdorff", "Hausdorff and ordered distances between pole sets");
    std::string set_a, set_b;
    haus->add_option("a", set_a, "First pole set (file or inline:)")->required();
    haus->add_option("b", set_b, "Second pole set (file or inline:)")->required();
    haus->add_option("--config", c_haus.config, "key=value file; keys are option names, flags win");

    auto* lelong = app.add_subcommand("lelong", "Estimate the Lelong number of G at a point");
    add_common(lelong, c_lelong);
    std::string lelong_method = "oracle";
    std::vector<double> lelong_at;
    double r_start = 1e-2;
    int lelong_count = 11;
    lelong->add_option("--method", lelong_method, "oracle, grid or radial")
        ->check(CLI::IsMember({"grid", "oracle", "radial"}))
        ->capture_default_str();
    lelong->add_option("--at", lelong_at, "Point (default: first pole)")->delimiter(',');
    lelong->add_option("--r-start", r_start, "Largest radius of the halving ladder")->capture_default_str();
    lelong->add_option("--count", lelong_count, "Number of radii")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Run the verification suite");
    std::vector<std::string> only;
    bool fault = false;
    std::string outdir;
    std::uint64_t verify_seed = 20240607;
    verify->add_option("--only", only, "Experiment ids to run (default: all)")->delimiter(',');
    verify->add_flag("--fault-selftest", fault, "Add a corrupted carrier whose gate must fail");
    verify->add_option("--outdir", outdir, "Directory for reports.json and per-report CSV files");
    verify->add_option("--seed", verify_seed, "Sampling seed")->capture_default_str();
    verify->add_option("--config", c_verify.config, "key=value file; keys are option names, flags win");
    bool list = false;
    verify->add_flag("--list", list, "List experiment ids and exit");

    auto* modulus = app.add_subcommand("modulus", "Fit the modulus of continuity of exp G");
    add_common(modulus, c_modulus);
    std::string mod_case = "disk";
    double mod_exponent = kUnset, mod_rmax = kUnset;
    int mod_levels = 12, mod_per_level = 1000;
    modulus->add_option("--case", mod_case, "radial (m=1, n=2 ball) or disk (m=n=1, two poles)")
        ->check(CLI::IsMember({"radial", "disk"}))
        ->capture_default_str();
    modulus->add_option("--exponent", mod_exponent, "tau for the radial case, alpha for the disk case");
    modulus->add_option("--r-max", mod_rmax, "Largest pair radius (default: schedule radius)");
    modulus->add_option("--levels", mod_levels, "Number of dyadic levels")->capture_default_str();
    modulus->add_option("--per-level", mod_per_level, "Pairs per level")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        std::string cfg = sub == eval      ? c_eval.config
                          : sub == green   ? c_green.config
                          : sub == lelong  ? c_lelong.config
                          : sub == verify  ? c_verify.config
                          : sub == modulus ? c_modulus.config
                                           : c_haus.config;
        if (!cfg.empty())
            apply_config(sub, cfg);

        if (sub == eval)
            return run_eval(c_eval, ea);
        if (sub == green)
            return run_green(c_green, green_method);
        if (sub == haus)
            return run_hausdorff(set_a, set_b);
        if (sub == lelong)
            return run_lelong(c_lelong, lelong_method, lelong_at, r_start, lelong_count);
        if (sub == verify) {
            if (list) {
                for (const auto& e : hg::experiments())
                    std::printf("%-20s %s\n", e.id.c_str(), e.title.c_str());
                return 0;
            }
            hg::SuiteConfig sc;
            sc.only = only;
            sc.fault_selftest = fault;
            sc.outdir = outdir;
            sc.seed = verify_seed;
            return run_verify(sc);
        }
        double expo = std::isnan(mod_exponent) ? (mod_case == "radial" ? 0.6 : 0.5) : mod_exponent;
        return run_modulus(c_modulus, mod_case, expo, mod_rmax, mod_levels, mod_per_level);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
