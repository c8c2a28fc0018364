#include "hg/suite.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

#include "hg/grid.hpp"
#include "hg/hessian.hpp"
#include "hg/kernel.hpp"
#include "hg/poles.hpp"
#include "hg/solver.hpp"
#include "hg/verify.hpp"

namespace hg {

namespace {

using json = nlohmann::json;

Report make_report(const std::string& id, double violation, double budget, json params,
                   std::size_t samples = 0)
{
    Report r;
    r.id = id;
    r.max_violation = violation;
    r.budget = budget;
    r.params = std::move(params);
    r.samples = samples;
    r.finalize();
    return r;
}

PoleSet two_disk_poles()
{
    return PoleSet({{{-0.3, 0.0}, 1.0}, {{0.4, 0.0}, 2.0}});
}

Point origin(int n) { return Point(2 * n, 0.0); }

const std::vector<std::pair<int, int>> kRadialOrders = {{1, 2}, {1, 3}, {2, 3}, {1, 1}, {2, 2}, {3, 3}};

// Kernel identities over log-spaced inputs.
std::vector<Report> run_kernel(const SuiteConfig&)
{
    double worst_inv = 0, worst_theta = 0;
    std::size_t count = 0;
    for (auto [m, n] : kRadialOrders) {
        auto p = make_params(m, n, 4.0);
        const int K = 1000;
        for (int k = 0; k < K; ++k) {
            double r = (p.logarithmic() ? p.R0 : 100.0) * std::pow(10.0, -6.0 * k / (K - 1));
            double back = phi_inv(p, phi(p, r));
            worst_inv = std::max(worst_inv, std::abs(back - r) / r);
            double delta = p.R0 * std::pow(10.0, -6 + 5.0 * k / (K - 1));
            double nu = 0.5 + 3.5 * ((k * 7919) % K) / double(K);
            double lhs = phi(p, theta(p, delta, nu)), rhs = phi(p, delta) / nu;
            worst_theta = std::max(worst_theta, std::abs(lhs - rhs) / std::abs(rhs));
            ++count;
        }
    }
    return {make_report("kernel_phi_inverse", worst_inv, 1e-12, {{"inputs", count}}, count),
            make_report("kernel_theta_identity", worst_theta, 1e-12, {{"inputs", count}}, count)};
}

double disk_grid_error(int res, const PoleSet& A)
{
    auto dom = DomainSpec::disk(0, 0, 1);
    auto grid = build_grid(dom, res);
    auto p = make_params(1, 1, default_R0(dom.diam()));
    auto G = green_grid(p, dom, A, grid, 1e-11);
    double err = 0;
    const Grid& g = *grid;
    for (std::size_t k = 0; k < g.kind.size(); ++k) {
        if (g.kind[k] != NodeKind::Interior)
            continue;
        Point z = g.point(k);
        if (dom.boundary_distance(z) < 0.05)
            continue;
        bool near = false;
        for (const auto& q : A.poles())
            near = near || distance(z, q.a) < 0.1;
        if (near)
            continue;
        err = std::max(err, std::abs((*G.G)[k] - green_disk_oracle(A, z)));
    }
    return err;
}

std::vector<Report> run_disk_oracle(const SuiteConfig&)
{
    auto A = two_disk_poles();
    double e257 = disk_grid_error(257, A);
    double e129 = disk_grid_error(129, A);
    return {make_report("disk_oracle_257", e257, 1e-2, {{"res", 257}, {"error", e257}}),
            make_report("disk_oracle_refinement", 3 * e257 - e129, 0.0,
                        {{"error_129", e129}, {"error_257", e257}, {"ratio", e129 / e257}})};
}

std::vector<Report> run_radial(const SuiteConfig& cfg)
{
    std::vector<Report> out;
    double tight = 0;
    for (auto [m, n] : kRadialOrders) {
        auto ball = DomainSpec::ball(origin(n), 1.0);
        auto p = make_params(m, n, default_R0(ball.diam()));
        const double nu = 1.5;
        std::vector<double> mesh;
        for (int k = 0; k < 256; ++k)
            mesh.push_back(std::pow(10.0, -3 + 3.0 * k / 255));
        auto tab = radial_envelope_iterate(p, 1.0, nu, mesh);
        auto G = green_radial(p, 1.0, nu);
        double diff = 0;
        for (std::size_t k = 0; k < mesh.size(); ++k)
            diff = std::max(diff, std::abs(tab.G[k] - G(mesh[k])) / std::max(1.0, std::abs(G(mesh[k]))));
        std::string tag = std::to_string(m) + "_" + std::to_string(n);
        out.push_back(make_report("radial_table_" + tag, diff, 1e-10, {{"m", m}, {"n", n}, {"nu", nu}},
                                  mesh.size()));
        auto res = green_radial(p, ball, PoleSet({{origin(n), nu}}));
        auto sw = check_sandwich(res, 2000, cfg.seed);
        tight = std::max(tight, sw.params["upper_gap_max"].get<double>());
    }
    out.push_back(make_report("radial_upper_bound_attained", tight, 1e-12, {{"orders", kRadialOrders.size()}}));
    return out;
}

std::vector<Report> run_residual_mass(const SuiteConfig&)
{
    auto dom = DomainSpec::disk(0, 0, 1);
    auto grid = build_grid(dom, 257);
    auto p = make_params(1, 1, default_R0(dom.diam()));
    auto A = two_disk_poles();
    auto G = green_grid(p, dom, A, grid, 1e-11);
    auto rep = residual_mass_check(G, {0.25, 0.25});
    // No pole inside: the flux through a circle must vanish.
    auto fm = flux_mass(*G.G, {0.0, 0.6}, 0.2);
    auto harmonic = make_report("residual_mass_harmonic", std::abs(fm.flux) - 0.01 * 2 * M_PI, 0.0,
                                {{"flux", fm.flux}});
    return {rep, harmonic};
}

std::vector<Report> run_exact_inequalities(const SuiteConfig& cfg)
{
    std::vector<Report> out;
    const std::size_t N = 10000;
    {
        auto p = make_params(1, 2, 4.0);
        PoleSet A({{{-0.5, 0, 0, 0}, 1.0}, {{0.5, 0, 0, 0}, 1.0}});
        auto r = check_lemma31(p, A, 0.05, N, cfg.seed);
        r.id = "lemma31_1_2";
        out.push_back(r);
    }
    {
        auto p = make_params(1, 1, 4.0);
        PoleSet A({{{-0.5, 0}, 1.0}, {{0.5, 0}, 1.0}});
        auto r = check_lemma31(p, A, 0.05, N, cfg.seed);
        r.id = "lemma31_1_1";
        out.push_back(r);
    }
    {
        auto p = make_params(1, 2, 4.0);
        auto dom = DomainSpec::ball(origin(2), 1.0);
        FamilyParams f{0.1, 1.0, 2.0, 0.1};
        PoleSet A({{{-0.25, 0, 0, 0}, 1.0}, {{0.25, 0, 0, 0}, 1.0}});
        PoleSet Ap({{{-0.25 + 0.01, 0, 0, 0}, 1.0}, {{0.25, 0.01, 0, 0}, 1.0}});
        auto r = check_lemma42(p, dom, f, A, Ap, 0.1, N, cfg.seed);
        r.id = "lemma42_1_2";
        out.push_back(r);
    }
    {
        auto p = make_params(1, 1, 4.0);
        auto dom = DomainSpec::disk(0, 0, 1);
        FamilyParams f{0.1, 1.0, 2.1, 0.1};
        PoleSet A({{{-0.3, 0}, 1.0}, {{0.4, 0}, 1.0}});
        PoleSet Ap({{{-0.3, 0.01}, 1.0}, {{0.405, 0}, 1.01}});
        auto r = check_lemma42(p, dom, f, A, Ap, 0.1, N, cfg.seed);
        r.id = "lemma42_1_1";
        out.push_back(r);
    }
    return out;
}

std::vector<Report> run_sandwich(const SuiteConfig& cfg)
{
    std::vector<Report> out;
    auto dom = DomainSpec::disk(0, 0, 1);
    auto p11 = make_params(1, 1, default_R0(dom.diam()));
    auto A = two_disk_poles();
    {
        auto grid = build_grid(dom, 257);
        auto G = green_grid(p11, dom, A, grid, 1e-11);
        auto r = check_sandwich(G, 0, cfg.seed);
        r.id = "sandwich_disk_grid";
        out.push_back(r);
    }
    auto oracle = disk_oracle_result(p11, dom, A);
    {
        auto r = check_sandwich(oracle, 10000, cfg.seed);
        r.id = "sandwich_disk_oracle";
        out.push_back(r);
    }
    GreenResult radial12;
    for (auto [m, n] : kRadialOrders) {
        auto ball = DomainSpec::ball(origin(n), 1.0);
        auto p = make_params(m, n, default_R0(ball.diam()));
        auto G = green_radial(p, ball, PoleSet({{origin(n), 1.5}}));
        if (m == 1 && n == 2)
            radial12 = G;
        auto r = check_sandwich(G, 2000, cfg.seed);
        r.id = "sandwich_radial_" + std::to_string(m) + "_" + std::to_string(n);
        out.push_back(r);
    }
    // Harness self-test: a +0.1 shift must break the upper chain on the closed-form carriers.
    auto f1 = check_sandwich(radial12, 2000, cfg.seed, 0.1);
    auto f2 = check_sandwich(oracle, 2000, cfg.seed, 0.1);
    out.push_back(make_report("sandwich_fault_detected", (f1.pass || f2.pass) ? 1.0 : 0.0, 0.0,
                              {{"radial_violation", f1.max_violation},
                               {"disk_violation", f2.max_violation}}));
    if (cfg.fault_selftest) {
        f2.id = "sandwich_corrupted";
        out.push_back(f2);
    }
    return out;
}

std::vector<PoleSet> random_family(const HessianParams& p, const DomainSpec& dom,
                                   const FamilyParams& f, int count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<PoleSet> out;
    while (static_cast<int>(out.size()) < count) {
        std::vector<WeightedPole> poles;
        for (int k = 0; k < 2; ++k) {
            double rad = 0.6 * std::sqrt(uni(rng)), ang = 2 * M_PI * uni(rng);
            poles.push_back({{rad * std::cos(ang), rad * std::sin(ang)}, 1.0 + 0.5 * uni(rng)});
        }
        if (distance(poles[0].a, poles[1].a) < 2 * f.sigma0)
            continue;
        PoleSet A(poles);
        if (family_check(p, dom, A, f).in_F)
            out.push_back(A);
    }
    return out;
}

std::vector<Report> run_boundary_decay(const SuiteConfig& cfg)
{
    auto dom = DomainSpec::disk(0, 0, 1);
    auto p = make_params(1, 1, default_R0(dom.diam()));
    FamilyParams f{0.1, 1.0, 3.0, 0.1};
    auto fam = random_family(p, dom, f, 5, cfg.seed);
    auto r = boundary_decay_check(p, dom, fam, f, 0.5 * f.delta0, {0.9, 0.95, 0.99});
    return {r};
}

std::vector<Report> run_subextension(const SuiteConfig&)
{
    auto dom = DomainSpec::disk(0, 0, 1);
    auto grid = build_grid(dom, 257);
    const Grid& g = *grid;
    const std::size_t N = g.kind.size();
    std::vector<char> D(N, 0);
    GridFunction h(grid);
    for (std::size_t k = 0; k < N; ++k)
        if (g.kind[k] == NodeKind::Interior && norm(g.point(k)) < 0.5) {
            D[k] = 1;
            h[k] = -1.0;
        }
    auto iface = obstacle_interface(
        g, D, [](const Point& z) { return norm(z) - 0.5; }, [](const Point&) { return -1.0; });
    auto res = subextension(grid, D, h, nullptr, 1e-13, 2000000, &iface);
    double err = 0, lap = 0, scale = 0;
    for (std::size_t k = 0; k < N; ++k) {
        if (g.kind[k] != NodeKind::Interior)
            continue;
        double r = norm(g.point(k));
        double exact = r <= 0.5 ? -1.0 : std::log(r) / std::log(2.0);
        err = std::max(err, std::abs(res.U[k] - exact));
        scale = std::max(scale, std::abs(res.U[k]));
    }
    for (std::size_t k = 0; k < N; ++k) {
        if (g.kind[k] != NodeKind::Interior || g.cut[k])
            continue;
        if (iface.t[k] != std::array<double, 4>{0, 0, 0, 0})
            continue;
        if (D[k] && res.U[k] >= h[k] - 1e-9)
            continue;
        lap = std::max(lap, std::abs(discrete_laplacian(res.U, k)));
    }
    return {make_report("subextension_annulus", err, 5e-3, {{"sweeps", res.sweeps}, {"error", err}}),
            make_report("subextension_noncontact_laplacian", lap, 1e-6 * std::max(scale, 1.0),
                        {{"max_abs_laplacian", lap}})};
}

std::vector<Report> run_walsh(const SuiteConfig&)
{
    std::vector<Report> out;
    auto dom = DomainSpec::disk(0, 0, 1);
    auto p = make_params(1, 1, default_R0(dom.diam()));
    PoleSet A({{{0.2, 0.0}, 1.0}});
    auto g257 = build_grid(dom, 257);
    for (double r : {1e-3, 5e-4, 2.5e-4}) {
        auto rep = walsh_experiment(p, dom, A, {r, 0.0}, g257);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", r);
        rep.id = std::string("walsh_r") + buf;
        out.push_back(rep);
    }
    auto coarse = walsh_experiment(p, dom, A, {1e-3, 0.0}, build_grid(dom, 129));
    coarse.id = "walsh_r0.001_res129";
    double b129 = coarse.budget, b257 = out[0].budget;
    out.push_back(coarse);
    out.push_back(make_report("walsh_budget_shrinks", b257 / b129, 0.5,
                              {{"budget_129", b129}, {"budget_257", b257}}));
    return out;
}

std::vector<Report> run_moduli(const SuiteConfig& cfg)
{
    std::vector<Report> out;
    auto radial = radial_modulus_problem(0.6);
    double r1 = schedule_r0(radial.p, radial.f);
    out.push_back(modulus_fit(radial, r1, 12, 1000, cfg.seed));
    auto sharp = radial_modulus_problem(0.9);
    sharp.id = "diag_modulus_radial_1_2_tau0.9";
    out.push_back(modulus_fit(sharp, r1, 12, 1000, cfg.seed));
    auto disk = disk_modulus_problem(0.5);
    out.push_back(modulus_fit(disk, std::min(0.1, schedule_r0(disk.p, disk.f)), 12, 1000, cfg.seed));
    return out;
}

std::vector<Report> run_metric(const SuiteConfig& cfg)
{
    double worst = 0;
    for (int j = 1; j <= 10; ++j) {
        double t = std::ldexp(1.0, -j);
        PoleSet Aj({{{0, 0, t, 0}, 1.0}, {{0.5, 0, t, 0}, 1.0}});
        PoleSet A({{{0.5, 0, 0, 0}, 1.0}, {{0, 0, 0, 0}, 1.0}});
        worst = std::max(worst, std::abs(d_hausdorff(Aj, A) - t));
        worst = std::max(worst, std::abs(d_lelong(Aj, A) - (1 + 2 * t)));
    }
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    auto random_set = [&]() {
        int k = 1 + static_cast<int>(rng() % 4);
        std::vector<WeightedPole> poles;
        for (int i = 0; i < k; ++i)
            poles.push_back({{uni(rng), uni(rng)}, 1.5 + uni(rng)});
        return PoleSet(poles);
    };
    double axioms = 0;
    for (int i = 0; i < 1000; ++i) {
        auto X = random_set(), Y = random_set(), Z = random_set();
        double xy = d_hausdorff(X, Y), yx = d_hausdorff(Y, X);
        axioms = std::max(axioms, std::abs(xy - yx));
        axioms = std::max(axioms, d_hausdorff(X, X));
        axioms = std::max(axioms, xy - d_hausdorff(X, Z) - d_hausdorff(Z, Y) - 1e-12);
        if (xy <= 0)
            axioms = std::max(axioms, 1.0);
    }
    return {make_report("metric_ordered_sequence", worst, 1e-15, {{"j_max", 10}}),
            make_report("metric_axioms", axioms, 0.0, {{"pairs", 1000}}, 1000)};
}

std::vector<Report> run_lelong(const SuiteConfig&)
{
    std::vector<Report> out;
    auto radii = geometric_radii(1e-2, 11);
    {
        auto dom = DomainSpec::disk(0, 0, 1);
        auto p = make_params(1, 1, default_R0(dom.diam()));
        auto A = two_disk_poles();
        auto G = disk_oracle_result(p, dom, A);
        SmoothSample u{[&G](const Point& z) { return G.eval(z); }};
        double worst = 0;
        json est = json::array();
        for (const auto& q : A.poles()) {
            auto L = lelong_number(u, p, q.a, radii);
            worst = std::max(worst, std::abs(L.estimate - q.nu));
            est.push_back(L.estimate);
        }
        out.push_back(make_report("lelong_disk_oracle", worst, 1e-3, {{"estimates", est}}));
    }
    for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 2}, {2, 3}}) {
        auto ball = DomainSpec::ball(origin(n), 1.0);
        auto p = make_params(m, n, default_R0(ball.diam()));
        const double nu = 1.7;
        auto G = green_radial(p, ball, PoleSet({{origin(n), nu}}));
        SmoothSample u{[&G](const Point& z) { return G.eval(z); }};
        auto L = lelong_number(u, p, origin(n), radii);
        out.push_back(make_report("lelong_radial_" + std::to_string(m) + "_" + std::to_string(n),
                                  std::abs(L.estimate - nu), 1e-3, {{"estimate", L.estimate}, {"nu", nu}}));
    }
    return out;
}

}  // namespace

ModulusProblem radial_modulus_problem(double tau)
{
    ModulusProblem prob;
    prob.id = "modulus_radial_1_2";
    prob.p = make_params(1, 2, 4.0);
    prob.dom = DomainSpec::ball(origin(2), 1.0);
    prob.f = {0.5, 1.0, 2.0, 0.1};
    prob.mode = ModulusMode::Joint;
    prob.exponent = tau;
    auto p = prob.p;
    prob.exp_green = [p](const Point& z, const PoleSet& A) {
        return std::exp(A[0].nu * (phi(p, norm(z)) - phi(p, 1.0)));
    };
    prob.base = [](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::normal_distribution<double> nd;
        Point z(4);
        for (double& x : z)
            x = nd(rng);
        double s = norm(z), rad = std::pow(uni(rng), 0.25) * (1 - 1e-9);
        for (double& x : z)
            x *= rad / s;
        return std::make_pair(z, PoleSet({{Point(4, 0.0), 1.0 + uni(rng)}}));
    };
    prob.perturb = [](const PoleSet& A, double eta, std::mt19937_64& rng) {
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        double nu = A[0].nu;
        bool down = (uni(rng) < 0.5 && nu - eta >= 1.0) || nu + eta > 2.0;
        return PoleSet({{A[0].a, down ? nu - eta : nu + eta}});
    };
    return prob;
}

ModulusProblem disk_modulus_problem(double alpha)
{
    ModulusProblem prob;
    prob.id = "modulus_disk_1_1";
    prob.p = make_params(1, 1, default_R0(2.0));
    prob.dom = DomainSpec::disk(0, 0, 1);
    prob.f = {0.2, 1.0, 2.5, 0.1};
    prob.mode = ModulusMode::Joint;
    prob.exponent = alpha;
    prob.exp_green = [](const Point& z, const PoleSet& A) {
        double g = green_disk_oracle(A, z);
        return at_pole(g) ? 0.0 : std::exp(g);
    };
    prob.base = [](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (;;) {
            std::vector<WeightedPole> poles;
            for (int k = 0; k < 2; ++k) {
                double rad = 0.45 * std::sqrt(uni(rng)), ang = 2 * M_PI * uni(rng);
                poles.push_back({{rad * std::cos(ang), rad * std::sin(ang)}, 1.0 + 0.25 * uni(rng)});
            }
            if (distance(poles[0].a, poles[1].a) < 0.5)
                continue;
            double rad = std::sqrt(uni(rng)) * (1 - 1e-9), ang = 2 * M_PI * uni(rng);
            return std::make_pair(Point{rad * std::cos(ang), rad * std::sin(ang)}, PoleSet(poles));
        }
    };
    prob.perturb = [](const PoleSet& A, double eta, std::mt19937_64& rng) {
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::vector<WeightedPole> poles;
        for (const auto& q : A.poles()) {
            double ang = 2 * M_PI * uni(rng);
            poles.push_back({{q.a[0] + eta * std::cos(ang), q.a[1] + eta * std::sin(ang)}, q.nu});
        }
        return PoleSet(poles);
    };
    return prob;
}

const std::vector<Experiment>& experiments()
{
    static const std::vector<Experiment> list = {
        {"kernel", "Kernel identities", run_kernel},
        {"disk_oracle", "Disk oracle equivalence", run_disk_oracle},
        {"radial", "Radial oracle", run_radial},
        {"residual_mass", "Residual mass", run_residual_mass},
        {"exact_inequalities", "Exact inequalities", run_exact_inequalities},
        {"sandwich", "Sandwich bounds", run_sandwich},
        {"boundary_decay", "Boundary decay", run_boundary_decay},
        {"subextension", "Subextension", run_subextension},
        {"walsh", "Translation inequality", run_walsh},
        {"moduli", "Moduli of continuity", run_moduli},
        {"metric", "Metric layer", run_metric},
        {"lelong", "Lelong numbers", run_lelong},
    };
    return list;
}

const Experiment& find_experiment(const std::string& id)
{
    for (const auto& e : experiments())
        if (e.id == id)
            return e;
    throw std::invalid_argument("unknown experiment: " + id);
}

bool is_gating(const Report& r) { return r.id.rfind("diag_", 0) != 0; }

SuiteResult run_suite(const SuiteConfig& config)
{
    for (const auto& id : config.only)
        find_experiment(id);
    SuiteResult res;
    for (const auto& e : experiments()) {
        if (!config.only.empty() &&
            std::find(config.only.begin(), config.only.end(), e.id) == config.only.end())
            continue;
        for (auto& r : e.run(config)) {
            r.seed = config.seed;
            if (is_gating(r) && !r.pass)
                res.failed.push_back(r.id);
            res.reports.push_back(std::move(r));
        }
    }
    res.status = res.failed.empty() ? 0 : 1;
    if (!config.outdir.empty())
        write_artifacts(config.outdir, res.reports);
    return res;
}

void write_artifacts(const std::string& dir, const std::vector<Report>& reports)
{
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    json all = json::array();
    for (const auto& r : reports) {
        all.push_back(r.to_json());
        if (!r.columns.empty()) {
            std::ofstream csv(fs::path(dir) / (r.id + ".csv"));
            r.write_csv(csv);
        }
    }
    std::ofstream out(fs::path(dir) / "reports.json");
    if (!out)
        throw std::runtime_error("write_artifacts: cannot write to " + dir);
    out << all.dump(2) << '\n';
}

}  // namespace hg
