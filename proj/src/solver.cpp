#include "hg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <random>

#include "hg/parallel.hpp"
#include "stencil.hpp"

namespace hg {

namespace detail {

Stencil build_stencil(const Grid& g)
{
    Stencil S;
    const std::size_t N = g.kind.size();
    S.w.assign(N, {0, 0, 0, 0});
    S.wsum.assign(N, 0);
    for (std::size_t k = 0; k < N; ++k) {
        if (g.kind[k] != NodeKind::Interior)
            continue;
        const auto& t = g.arm[k];
        double ex = t[0], wx = t[1], nn = t[2], sy = t[3];
        S.w[k] = {2 / (ex * (ex + wx)), 2 / (wx * (ex + wx)), 2 / (nn * (nn + sy)), 2 / (sy * (nn + sy))};
        S.wsum[k] = 2 / (ex * wx) + 2 / (nn * sy);
        S.color[(g.col(k) + g.row(k)) % 2].push_back(k);
    }
    return S;
}

SweepStats sor_sweep(const Grid& g, const Stencil& S, std::vector<double>& u,
                     const std::vector<std::array<double, 4>>& bval, double omega,
                     const std::vector<double>* cap, const std::vector<char>* capped,
                     const std::vector<char>* frozen)
{
    SweepStats total;
    std::mutex mu;
    for (int c = 0; c < 2; ++c) {
        const auto& nodes = S.color[c];
        parallel_for(nodes.size(), [&](std::size_t b, std::size_t e, int) {
            SweepStats local;
            for (std::size_t i = b; i < e; ++i) {
                std::size_t k = nodes[i];
                if (frozen && (*frozen)[k])
                    continue;
                double s = 0;
                for (int d = 0; d < 4; ++d)
                    s += S.w[k][d] * arm_value(g, u, bval, k, d);
                double target = s / S.wsum[k];
                double old = u[k];
                double nv = old + omega * (target - old);
                if (cap && (*capped)[k])
                    nv = std::min(nv, (*cap)[k]);
                u[k] = nv;
                double du = nv - old;
                local.max_update = std::max(local.max_update, std::abs(du));
                local.max_increase = std::max(local.max_increase, du);
            }
            std::lock_guard<std::mutex> lock(mu);
            total.max_update = std::max(total.max_update, local.max_update);
            total.max_increase = std::max(total.max_increase, local.max_increase);
        });
    }
    return total;
}

double optimal_omega(const Grid& g)
{
    double L = std::max(g.nx - 1, g.ny - 1) * g.h;
    return 2 / (1 + std::sin(M_PI * g.h / L));
}

}  // namespace detail

double RadialGreen::operator()(double r) const
{
    if (!(r > 0) || r > R)
        throw std::domain_error("green_radial: radius outside (0, R]");
    return nu * (phi(p, r) - phi(p, R));
}

RadialGreen green_radial(const HessianParams& p, double R, double nu)
{
    p.validate();
    if (!(R > 0) || !(nu > 0))
        throw std::invalid_argument("green_radial: R and nu must be positive");
    if (p.logarithmic() && R > p.R0)
        throw std::invalid_argument("green_radial: R exceeds R0");
    return {p, R, nu};
}

RadialTable radial_envelope_iterate(const HessianParams& p, double R, double nu,
                                    const std::vector<double>& mesh)
{
    if (mesh.size() < 64)
        throw std::invalid_argument("radial_envelope_iterate: mesh needs at least 64 points");
    for (double r : mesh)
        if (!(r > 0) || r > R)
            throw std::invalid_argument("radial_envelope_iterate: mesh must lie in (0, R]");
    // Competitors are convex nondecreasing in t = phi(r), vanish at most 0 at t_R and have
    // asymptotic slope at least nu. Their supremum is realized by affine pieces k*t + c,
    // k >= nu, with c pinned by the boundary value.
    const double tR = phi(p, R);
    const int slopes = 64;
    RadialTable tab;
    tab.r = mesh;
    tab.G.resize(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        double t = phi(p, mesh[i]);
        double best = -std::numeric_limits<double>::infinity();
        for (int j = 0; j <= slopes; ++j) {
            double k = nu * (1.0 + 4.0 * j / slopes);
            double c = -k * tR;
            best = std::max(best, k * t + c);
        }
        tab.G[i] = best;
    }
    return tab;
}

namespace {

double disk_kernel(const DomainSpec& disk, const PoleSet& A, const Point& z)
{
    using C = std::complex<double>;
    C w((z[0] - disk.center[0]) / disk.R, (z[1] - disk.center[1]) / disk.R);
    double s = 0;
    for (const auto& q : A.poles()) {
        C b((q.a[0] - disk.center[0]) / disk.R, (q.a[1] - disk.center[1]) / disk.R);
        if (w == b)
            return kPoleSentinel;
        s += q.nu * std::log(std::abs((w - b) / (1.0 - std::conj(b) * w)));
    }
    return s;
}

void require_disk_poles(const DomainSpec& disk, const PoleSet& A)
{
    if (disk.kind != DomainSpec::Kind::Disk)
        throw std::invalid_argument("disk oracle: domain must be a disk");
    if (A.dim() != 1)
        throw std::invalid_argument("disk oracle: poles must lie in C^1");
    for (const auto& q : A.poles())
        if (!(disk.boundary_distance(q.a) > 0))
            throw std::domain_error("disk oracle: pole on or outside the boundary");
}

}  // namespace

double green_disk_oracle(const PoleSet& A, const Point& z)
{
    static const DomainSpec unit = DomainSpec::disk(0, 0, 1);
    require_disk_poles(unit, A);
    if (norm(z) > 1 + 1e-12)
        throw std::domain_error("green_disk_oracle: point outside the closed disk");
    return disk_kernel(unit, A, z);
}

double GreenResult::eval(const Point& z) const
{
    switch (method) {
    case GreenMethod::Radial: {
        double r = distance(z, dom.center);
        if (r == 0)
            return kPoleSentinel;
        return A[0].nu * (phi(p, r) - phi(p, dom.R));
    }
    case GreenMethod::DiskOracle:
        return disk_kernel(dom, A, z);
    case GreenMethod::Grid: {
        double ps = psi_weight(p, A, z);
        if (at_pole(ps))
            return kPoleSentinel;
        return ps + H->interpolate(z);
    }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

GreenResult green_radial(const HessianParams& p, const DomainSpec& ball, const PoleSet& A)
{
    if (ball.kind == DomainSpec::Kind::Rectangle)
        throw std::invalid_argument("green_radial: domain must be a ball or disk");
    if (A.size() != 1 || A[0].a != ball.center)
        throw std::invalid_argument("green_radial: pole must be the single ball center");
    if (ball.dim() != p.n)
        throw std::invalid_argument("green_radial: ball dimension differs from n");
    green_radial(p, ball.R, A[0].nu);
    GreenResult res;
    res.method = GreenMethod::Radial;
    res.p = p;
    res.dom = ball;
    res.A = A;
    return res;
}

GreenResult disk_oracle_result(const HessianParams& p, const DomainSpec& disk, const PoleSet& A)
{
    if (p.m != 1 || p.n != 1)
        throw std::invalid_argument("disk oracle: requires m = n = 1");
    require_disk_poles(disk, A);
    GreenResult res;
    res.method = GreenMethod::DiskOracle;
    res.p = p;
    res.dom = disk;
    res.A = A;
    return res;
}

GreenResult green_grid(const HessianParams& p, const DomainSpec& dom, const PoleSet& A,
                       std::shared_ptr<const Grid> grid, double tol, long max_sweeps)
{
    p.validate();
    if (p.m != 1 || p.n != 1)
        throw std::invalid_argument("green_grid: requires m = n = 1");
    if (!(tol > 0))
        throw std::invalid_argument("green_grid: tol must be positive");
    if (A.dim() != 1)
        throw std::invalid_argument("green_grid: poles must lie in C^1");
    const Grid& g = *grid;
    for (const auto& q : A.poles())
        if (dom.boundary_distance(q.a) < 3 * g.h)
            throw std::domain_error("green_grid: pole closer than 3h to the boundary");

    const std::size_t N = g.kind.size();
    GridFunction psi(grid), H(grid), G(grid);
    for (std::size_t k = 0; k < N; ++k)
        if (g.kind[k] != NodeKind::Exterior)
            psi[k] = psi_weight(p, A, g.point(k));

    std::vector<std::array<double, 4>> bval(N, {0, 0, 0, 0});
    for (std::size_t k = 0; k < N; ++k) {
        if (g.kind[k] == NodeKind::Boundary)
            H[k] = -psi[k];
        if (g.kind[k] != NodeKind::Interior || !g.cut[k])
            continue;
        for (int d = 0; d < 4; ++d)
            if (g.cut[k] >> d & 1u)
                bval[k][d] = -psi_weight(p, A, g.arm_point(k, d));
    }

    auto S = detail::build_stencil(g);
    double omega = detail::optimal_omega(g);
    GreenResult res;
    long sweep = 0;
    double upd = 0;
    for (; sweep < max_sweeps; ++sweep) {
        upd = detail::sor_sweep(g, S, H.values(), bval, omega, nullptr, nullptr).max_update;
        if (upd < tol)
            break;
    }
    if (upd >= tol)
        throw std::runtime_error("green_grid: SOR did not converge within the sweep cap");

    for (std::size_t k = 0; k < N; ++k) {
        if (g.kind[k] == NodeKind::Interior)
            G[k] = at_pole(psi[k]) ? kPoleSentinel : psi[k] + H[k];
        else if (g.kind[k] == NodeKind::Boundary)
            G[k] = 0.0;
    }
    for (const auto& q : A.poles()) {
        std::size_t s = g.nearest_node(q.a);
        G.mark_singular(s, distance(g.point(s), q.a));
        H.mark_singular(s, distance(g.point(s), q.a));
    }

    std::vector<std::array<double, 4>> zero(N, {0, 0, 0, 0});
    double viol = 0;
    for (std::size_t k = 0; k < N; ++k) {
        if (g.kind[k] != NodeKind::Interior || G.is_singular(k))
            continue;
        bool near = false;
        for (int d = 0; d < 4; ++d)
            near = near || (!(g.cut[k] >> d & 1u) && G.is_singular(g.neighbour(k, d)));
        if (near)
            continue;
        viol = std::max(viol, -detail::sw_laplacian(g, S, G.values(), zero, k));
    }
    double bmax = 0;
    for (std::size_t k = 0; k < N; ++k)
        if (g.kind[k] == NodeKind::Boundary)
            bmax = std::max(bmax, std::abs(G[k]));

    res.method = GreenMethod::Grid;
    res.p = p;
    res.dom = dom;
    res.A = A;
    res.G = std::move(G);
    res.H = std::move(H);
    res.tol = tol;
    res.h = g.h;
    res.sweeps = sweep + 1;
    res.max_subharmonic_violation = viol;
    res.boundary_max_abs = bmax;
    return res;
}

namespace {

std::vector<Point> unit_directions(int dim_real)
{
    std::vector<Point> dirs;
    if (dim_real == 2) {
        const int K = 2048;
        for (int k = 0; k < K; ++k) {
            double t = 2 * M_PI * k / K;
            dirs.push_back({std::cos(t), std::sin(t)});
        }
        return dirs;
    }
    std::mt19937_64 rng(77);
    std::normal_distribution<double> nd;
    for (int k = 0; k < 8192; ++k) {
        Point e(dim_real);
        for (double& x : e)
            x = nd(rng);
        double s = norm(e);
        for (double& x : e)
            x /= s;
        dirs.push_back(e);
    }
    return dirs;
}

}  // namespace

double minimal_glue_constant(const HessianParams& p, const DomainSpec& dom, const PoleSet& A,
                             double delta1)
{
    if (!(delta1 > 0))
        throw std::invalid_argument("glue: delta1 must be positive");
    const int dim_real = static_cast<int>(A[0].a.size());
    auto dirs = unit_directions(dim_real);
    double best = 0;
    auto ratio_at = [&](const WeightedPole& q, double rad, const Point& e, bool& ok) {
        Point z(q.a.size());
        for (std::size_t i = 0; i < z.size(); ++i)
            z[i] = q.a[i] + rad * e[i];
        ok = !sublevel_contains_balls(p, A, delta1, z);
        if (!ok)
            return 0.0;
        double r = dom.rho(z);
        if (!(r < 0))
            throw std::domain_error("glue: A_delta1 reaches the boundary");
        return psi_weight(p, A, z) / r;
    };
    for (const auto& q : A.poles()) {
        double rad = theta(p, delta1, q.nu);
        int arg = -1;
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            bool ok;
            double v = ratio_at(q, rad, dirs[i], ok);
            if (ok && v > best) {
                best = v;
                arg = static_cast<int>(i);
            }
        }
        if (dim_real == 2 && arg >= 0) {
            // Golden-section refinement of the sampled maximum on the circle.
            double step = 2 * M_PI / dirs.size();
            double t0 = std::atan2(dirs[arg][1], dirs[arg][0]);
            double lo = t0 - step, hi = t0 + step;
            const double gr = (std::sqrt(5.0) - 1) / 2;
            auto f = [&](double t) {
                bool ok;
                double v = ratio_at(q, rad, {std::cos(t), std::sin(t)}, ok);
                return ok ? v : 0.0;
            };
            for (int it = 0; it < 60; ++it) {
                double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
                if (f(a) > f(b))
                    hi = b;
                else
                    lo = a;
            }
            best = std::max(best, f(0.5 * (lo + hi)));
        }
    }
    return best * (1 + 1e-9);
}

double glued_value(const HessianParams& p, const DomainSpec& dom, const PoleSet& A, double delta1,
                   double C, const Point& z)
{
    double ps = psi_weight(p, A, z);
    if (at_pole(ps) || sublevel_contains(p, A, delta1, z))
        return ps;
    return std::max(C * dom.rho(z), ps);
}

GluedSubsolution glued_subsolution(const HessianParams& p, const DomainSpec& dom, const PoleSet& A,
                                   double delta1, double C, std::shared_ptr<const Grid> grid,
                                   const GreenResult* G)
{
    double dA = weighted_distance(p, dom, A);
    if (!(delta1 < dA))
        throw std::invalid_argument("glued_subsolution: delta1 must be below delta_A");
    GluedSubsolution out;
    out.C_min = minimal_glue_constant(p, dom, A, delta1);
    if (C < out.C_min)
        throw GlueConstantError("glued_subsolution: C too small", out.C_min);
    const Grid& g = *grid;
    out.v = GridFunction(grid);
    for (std::size_t k = 0; k < g.kind.size(); ++k)
        if (g.kind[k] == NodeKind::Interior)
            out.v[k] = glued_value(p, dom, A, delta1, C, g.point(k));
    if (G) {
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < g.kind.size(); ++k) {
            if (g.kind[k] == NodeKind::Exterior || at_pole(out.v[k]))
                continue;
            double gv = G->G ? (*G->G)[k] : G->eval(g.point(k));
            if (at_pole(gv))
                continue;
            worst = std::max(worst, out.v[k] - gv);
        }
        out.excess_over_G = worst;
    }
    return out;
}

}  // namespace hg
