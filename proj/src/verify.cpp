#include "hg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hg {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(std::uint64_t i, int base)
{
    double inv = 1.0 / base, f = inv, r = 0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

double scale_of(std::initializer_list<double> xs)
{
    double s = 1;
    for (double x : xs)
        if (std::isfinite(x))
            s = std::max(s, std::abs(x));
    return s;
}

struct Bounds {
    Point lo, hi;
};

Bounds pole_box(const PoleSet& A, double margin)
{
    Bounds b{A[0].a, A[0].a};
    for (const auto& q : A.poles())
        for (std::size_t i = 0; i < q.a.size(); ++i) {
            b.lo[i] = std::min(b.lo[i], q.a[i]);
            b.hi[i] = std::max(b.hi[i], q.a[i]);
        }
    for (std::size_t i = 0; i < b.lo.size(); ++i) {
        b.lo[i] -= margin;
        b.hi[i] += margin;
    }
    return b;
}

Point in_box(const Bounds& b, const std::vector<double>& u)
{
    Point z(b.lo.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        z[i] = b.lo[i] + u[i] * (b.hi[i] - b.lo[i]);
    return z;
}

// Uniform point in the ball B(c, R) from a point of the cube.
Point in_ball(const Point& c, double R, const std::vector<double>& u)
{
    const std::size_t d = c.size();
    // Box-Muller on coordinate pairs for the direction, last coordinate for the radius.
    Point g(d);
    for (std::size_t i = 0; i + 1 < d; i += 2) {
        double a = std::clamp(u[i], 1e-12, 1 - 1e-12);
        double rr = std::sqrt(-2 * std::log(a));
        g[i] = rr * std::cos(2 * M_PI * u[i + 1]);
        g[i + 1] = rr * std::sin(2 * M_PI * u[i + 1]);
    }
    double n = norm(g);
    double rad = R * std::pow(u[d], 1.0 / static_cast<double>(d));
    Point z(d);
    for (std::size_t i = 0; i < d; ++i)
        z[i] = c[i] + rad * g[i] / n;
    return z;
}

double sigma_term(const HessianParams& p, const PoleSet& A)
{
    if (A.size() < 2)
        return 0.0;
    double g0 = A.min_weight(), g1 = A.total_weight();
    return -g1 * g1 / g0 * phi(p, min_separation(A));
}

}  // namespace

Halton::Halton(int dim, std::uint64_t skip) : dim_(dim), index_(skip + 1)
{
    if (dim < 1 || dim > static_cast<int>(std::size(kPrimes)))
        throw std::invalid_argument("Halton: dimension out of range");
}

std::vector<double> Halton::next()
{
    std::vector<double> u(dim_);
    for (int i = 0; i < dim_; ++i)
        u[i] = radical_inverse(index_, kPrimes[i]);
    ++index_;
    return u;
}

std::uint64_t halton_skip(std::uint64_t seed)
{
    return std::mt19937_64(seed)() % 100000;
}

Report check_lemma31(const HessianParams& p, const PoleSet& A, double delta, std::size_t samples,
                     std::uint64_t seed)
{
    p.validate();
    if (A.empty())
        throw std::invalid_argument("check_lemma31: empty pole set");
    if (A.dim() != p.n)
        throw std::invalid_argument("check_lemma31: pole dimension differs from n");
    if (!(delta > 0) || (p.logarithmic() && delta >= p.R0))
        throw std::domain_error("check_lemma31: delta outside the admissible range");
    const double g0 = A.min_weight(), g1 = A.total_weight();
    const double sigma = min_separation(A);
    const bool inner = A.size() < 2 || delta <= theta(p, sigma, 1.0 / g1);
    if (A.size() >= 2 && !inner)
        throw std::invalid_argument("check_lemma31: delta exceeds theta(sigma_A, 1/gamma1)");

    const double Phid = phi(p, delta);
    const double s3 = sigma_term(p, A);
    double theta_max = 0;
    for (const auto& q : A.poles())
        theta_max = std::max(theta_max, theta(p, delta, q.nu));
    double margin = std::max(1.0, 2 * theta_max);
    if (p.logarithmic())
        margin = std::min(margin, p.R0 / 4);
    const Bounds box = pole_box(A, margin);
    const int d = 2 * p.n;

    Report rep;
    rep.id = "lemma31";
    rep.seed = seed;
    rep.budget = 1e-12;
    rep.columns = {"which", "violation"};
    double worst[3] = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                       -std::numeric_limits<double>::infinity()};
    std::size_t counts[3] = {0, 0, 0};

    Halton hz(d + 1, halton_skip(seed));
    auto record = [&](int which, double lhs, double rhs, double sc) {
        double v = (lhs - rhs) / sc;
        worst[which] = std::max(worst[which], v);
    };
    auto test_point = [&](const Point& z, bool inside_only) {
        double ph = phi_weight(p, A, z), ps = psi_weight(p, A, z);
        if (at_pole(ph) || at_pole(ps))
            return;
        if (p.logarithmic())
            for (const auto& q : A.poles())
                if (distance(z, q.a) >= p.R0)
                    return;
        bool in = sublevel_contains(p, A, delta, z);
        if (inside_only && !in)
            return;
        double sc = scale_of({ph, ps, Phid, s3});
        if (!in) {
            record(0, ph + g1 / g0 * Phid, ps, sc);
            record(0, ps, ph, sc);
            ++counts[0];
        } else {
            record(1, ph + Phid, ps, sc);
            record(1, ps, ph, sc);
            ++counts[1];
        }
        record(2, ps, ph, sc);
        record(2, ph, ps + s3, sc);
        ++counts[2];
    };
    for (std::size_t i = 0; i < samples; ++i)
        test_point(in_box(box, hz.next()), false);
    // The inner region is small; sample it directly.
    Halton hb(d + 1, halton_skip(seed + 1));
    for (std::size_t i = 0; i < samples; ++i) {
        const auto& q = A[i % A.size()];
        test_point(in_ball(q.a, theta(p, delta, q.nu), hb.next()), true);
    }
    if (counts[0] == 0 || counts[1] == 0)
        throw std::invalid_argument("check_lemma31: empty sample region");

    rep.samples = counts[2];
    rep.max_violation = std::max({worst[0], worst[1], worst[2]});
    for (int k = 0; k < 3; ++k)
        rep.rows.push_back({static_cast<double>(k + 1), worst[k]});
    rep.params = {{"m", p.m}, {"n", p.n}, {"R0", p.R0}, {"delta", delta}, {"poles", A.size()},
                  {"gamma0", g0}, {"gamma1", g1},
                  {"samples_outside", counts[0]}, {"samples_inside", counts[1]},
                  {"worst", {worst[0], worst[1], worst[2]}}};
    rep.finalize();
    return rep;
}

Report check_lemma42(const HessianParams& p, const DomainSpec& dom, const FamilyParams& f,
                     const PoleSet& A, const PoleSet& Ap, double delta, std::size_t samples,
                     std::uint64_t seed)
{
    p.validate();
    f.validate();
    if (!(delta > 0) || delta > f.delta0)
        throw std::domain_error("check_lemma42: delta must lie in (0, delta0]");
    if (!family_check(p, dom, A, f).in_E || !family_check(p, dom, Ap, f).in_E)
        throw std::invalid_argument("check_lemma42: pole sets must lie in the family E");
    const auto L = lipschitz_constants(p, f);
    const double fd = f_mod(p, f.gamma0, delta);
    const double dH = d_hausdorff(A, Ap);
    const int d = 2 * p.n;

    Report rep;
    rep.id = "lemma42";
    rep.seed = seed;
    rep.budget = 1e-12;
    rep.columns = {"which", "violation"};
    double worst6 = -std::numeric_limits<double>::infinity(), worst7 = worst6;
    std::size_t accepted = 0, tries = 0;
    Halton hz(d + 1, halton_skip(seed));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> nd;
    const std::size_t max_tries = 50 * samples + 1000;
    while (accepted < samples && tries < max_tries) {
        ++tries;
        Point z = in_ball(dom.center, dom.kind == DomainSpec::Kind::Rectangle ? 0.5 * dom.diam() : dom.R,
                          hz.next());
        // Half the pairs are local, half are far apart.
        Point zp(z.size());
        if (tries % 2) {
            double len = std::pow(10.0, -6 + 5.5 * uni(rng));
            Point e(z.size());
            for (double& x : e)
                x = nd(rng);
            double en = norm(e);
            for (std::size_t i = 0; i < z.size(); ++i)
                zp[i] = z[i] + len * e[i] / en;
        } else {
            for (std::size_t i = 0; i < z.size(); ++i)
                zp[i] = z[i] + (2 * uni(rng) - 1) * 0.5 * dom.diam();
        }
        if (!dom.contains(z) || !dom.contains(zp))
            continue;
        if (sublevel_contains(p, A, delta, z) || sublevel_contains(p, Ap, delta, zp))
            continue;
        double step = (distance(z, zp) + dH) * fd;
        double ph = phi_weight(p, A, z), php = phi_weight(p, Ap, zp);
        double ps = psi_weight(p, A, z), psp = psi_weight(p, Ap, zp);
        double r6 = ph + L.L * step, r7 = ps + L.Lp * step;
        worst6 = std::max(worst6, (php - r6) / scale_of({php, r6}));
        worst7 = std::max(worst7, (psp - r7) / scale_of({psp, r7}));
        ++accepted;
    }
    if (accepted == 0)
        throw std::invalid_argument("check_lemma42: empty admissible region");
    rep.samples = accepted;
    rep.max_violation = std::max(worst6, worst7);
    rep.rows = {{6, worst6}, {7, worst7}};
    rep.params = {{"m", p.m}, {"n", p.n}, {"R0", p.R0}, {"delta", delta}, {"d_H", dH},
                  {"L", L.L}, {"Lp", L.Lp}, {"f_delta", fd},
                  {"family", {{"delta0", f.delta0}, {"gamma0", f.gamma0}, {"gamma1", f.gamma1}}},
                  {"worst", {worst6, worst7}}};
    rep.finalize();
    return rep;
}

Report check_sandwich(const GreenResult& G, std::size_t samples, std::uint64_t seed, double fault)
{
    const auto& p = G.p;
    const auto& A = G.A;
    const double dA = weighted_distance(p, G.dom, A);
    const double PhidA = phi(p, dA);
    const double s5 = sigma_term(p, A);

    Report rep;
    rep.id = "sandwich";
    rep.seed = seed;
    rep.columns = {"x", "y", "lower", "upper4", "upper5"};
    double worst = -std::numeric_limits<double>::infinity();
    double gap4 = 0;
    std::size_t count = 0;

    auto check = [&](const Point& z, double g, double allowance) {
        g += fault;
        double ps = psi_weight(p, A, z), ph = phi_weight(p, A, z);
        double sc = scale_of({g, ps, ph});
        double lo = ps - g, up4 = g - (ph - PhidA), up5 = g - (ps - PhidA + s5);
        double v = (std::max({lo, up4, up5}) - allowance) / sc;
        if (v > worst) {
            worst = v;
            rep.rows.assign(1, {z[0], z[1], lo, up4, up5});
        }
        gap4 = std::max(gap4, std::abs(up4) / sc);
        ++count;
    };

    if (G.method == GreenMethod::Grid) {
        const GridFunction& Gn = *G.G;
        const Grid& g = Gn.grid();
        rep.budget = std::max(G.tol, 1e-12);
        for (std::size_t k = 0; k < g.kind.size(); ++k) {
            if (g.kind[k] != NodeKind::Interior || Gn.is_singular(k))
                continue;
            Point z = g.point(k);
            double allowance = G.tol + 5 * g.h * (1 + psi_gradient_norm(p, A, z));
            check(z, Gn[k], allowance);
        }
    } else {
        rep.budget = 1e-12;
        const int d = static_cast<int>(G.dom.center.size());
        Halton hz(d + 1, halton_skip(seed));
        std::size_t tries = 0;
        while (count < samples && tries < 20 * samples) {
            ++tries;
            Point z = in_ball(G.dom.center, G.dom.R, hz.next());
            if (G.dom.boundary_distance(z) < 1e-3 * G.dom.R)
                continue;
            bool near = false;
            for (const auto& q : A.poles())
                near = near || distance(z, q.a) < 1e-6;
            if (near)
                continue;
            check(z, G.eval(z), 0.0);
        }
    }
    if (count == 0)
        throw std::invalid_argument("check_sandwich: no sample points");
    rep.samples = count;
    rep.max_violation = worst;
    rep.params = {{"method", G.method == GreenMethod::Grid ? "grid"
                             : G.method == GreenMethod::Radial ? "radial" : "disk_oracle"},
                  {"m", p.m}, {"n", p.n}, {"h", G.h}, {"fault", fault}, {"delta_A", dA},
                  {"upper_gap_max", gap4}};
    rep.finalize();
    return rep;
}

Report residual_mass_check(const GreenResult& G, const std::vector<double>& radii)
{
    if (G.method != GreenMethod::Grid || !G.G)
        throw std::invalid_argument("residual_mass_check: needs a grid carrier");
    const auto& A = G.A;
    if (radii.size() != A.size())
        throw std::invalid_argument("residual_mass_check: one radius per pole");
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = i + 1; j < A.size(); ++j)
            if (distance(A[i].a, A[j].a) <= radii[i] + radii[j])
                throw std::invalid_argument("residual_mass_check: overlapping disks");

    Report rep;
    rep.id = "residual_mass";
    rep.budget = 0;
    rep.columns = {"nu", "flux", "volume", "expected", "allowed"};
    double worst = -std::numeric_limits<double>::infinity();
    std::vector<double> c;
    nlohmann::json masses = nlohmann::json::array();
    for (std::size_t i = 0; i < A.size(); ++i) {
        auto fm = flux_mass(*G.G, A[i].a, radii[i]);
        double expected = 2 * M_PI * A[i].nu;
        double allowed = 0.01 * expected + expected * fm.snap / radii[i];
        worst = std::max(worst, std::abs(fm.flux - expected) - allowed);
        c.push_back(fm.flux / A[i].nu);
        rep.rows.push_back({A[i].nu, fm.flux, fm.volume, expected, allowed});
        masses.push_back({{"nu", A[i].nu}, {"flux", fm.flux}, {"volume", fm.volume},
                          {"gap", fm.gap}, {"snap", fm.snap}});
    }
    // Proportionality across poles: mass_i / mass_j against nu_i / nu_j.
    double ratio_err = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j)
            ratio_err = std::max(ratio_err, std::abs(c[i] / c[j] - 1));
    worst = std::max(worst, ratio_err - 0.01);
    double mean_c = 0;
    for (double x : c)
        mean_c += x / c.size();
    rep.samples = A.size();
    rep.max_violation = worst;
    rep.params = {{"h", G.h}, {"radii", radii}, {"masses", masses}, {"measured_c", mean_c},
                  {"ratio_error", ratio_err}};
    rep.finalize();
    return rep;
}

Report boundary_decay_check(const HessianParams& p, const DomainSpec& dom,
                            const std::vector<PoleSet>& family_sample, const FamilyParams& f,
                            double delta1, const std::vector<double>& shells)
{
    if (dom.kind != DomainSpec::Kind::Disk || p.m != 1 || p.n != 1)
        throw std::invalid_argument("boundary_decay_check: needs m = n = 1 on a disk");
    if (family_sample.empty() || shells.empty())
        throw std::invalid_argument("boundary_decay_check: empty input");
    for (const auto& A : family_sample)
        if (!family_check(p, dom, A, f).in_E)
            throw std::invalid_argument("boundary_decay_check: pole set is not in the family E");
    if (!(delta1 > 0) || !(delta1 < f.delta0))
        throw std::invalid_argument("boundary_decay_check: delta1 must lie in (0, delta0)");

    double C = 0;
    for (const auto& A : family_sample)
        C = std::max(C, minimal_glue_constant(p, dom, A, delta1));

    std::vector<double> order = shells;
    std::sort(order.begin(), order.end());
    const int K = 512;
    Report rep;
    rep.id = "boundary_decay";
    rep.budget = 1e-12;
    rep.columns = {"shell", "sup_abs_G", "C_abs_rho"};
    double worst = -std::numeric_limits<double>::infinity();
    double prev = std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    nlohmann::json sup = nlohmann::json::array();
    for (double t : order) {
        if (!(t > 0 && t < 1))
            throw std::invalid_argument("boundary_decay_check: shells must lie in (0, 1)");
        double s = 0, crho = 0;
        for (const auto& A : family_sample) {
            auto G = disk_oracle_result(p, dom, A);
            for (int k = 0; k < K; ++k) {
                double a = 2 * M_PI * k / K;
                Point z{dom.center[0] + t * dom.R * std::cos(a), dom.center[1] + t * dom.R * std::sin(a)};
                if (sublevel_contains(p, A, delta1, z))
                    continue;
                double g = G.eval(z), rho = dom.rho(z);
                double sc = scale_of({g, C * rho});
                worst = std::max(worst, (C * rho - g) / sc);
                worst = std::max(worst, g / sc);
                s = std::max(s, std::abs(g));
                crho = std::max(crho, C * std::abs(rho));
                ++count;
            }
        }
        // Shells are visited from the inside out, so sup |G| must decrease.
        if (std::isfinite(prev))
            worst = std::max(worst, s - prev);
        prev = s;
        sup.push_back(s);
        rep.rows.push_back({t, s, crho});
    }
    rep.samples = count;
    rep.max_violation = worst;
    rep.params = {{"C", C}, {"delta1", delta1}, {"families", family_sample.size()},
                  {"shells", order}, {"sup_abs_G", sup}};
    rep.finalize();
    return rep;
}

}  // namespace hg
