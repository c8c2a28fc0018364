#include <algorithm>
#include <cmath>
#include <limits>

#include "hg/solver.hpp"

namespace hg {

namespace {

struct Worst {
    double value;
    double x, y;
};

}  // namespace

Report walsh_experiment(const HessianParams& p, const DomainSpec& dom, const PoleSet& A,
                        const Point& zeta, std::shared_ptr<const Grid> grid,
                        const std::optional<FamilyParams>& family)
{
    if (p.m != 1 || p.n != 1)
        throw std::invalid_argument("walsh_experiment: requires m = n = 1");
    if (zeta.size() != 2)
        throw std::invalid_argument("walsh_experiment: translation must lie in C^1");
    const FamilyParams f = family ? *family : tight_family(p, dom, A);
    auto fc = family_check(p, dom, A, f);
    if (!fc.in_F)
        throw std::invalid_argument("walsh_experiment: pole set is not in the family F");

    const Grid& g = *grid;
    const std::size_t N = g.kind.size();
    const double r = norm(zeta);
    const double M = dom.lipschitz_M();
    const double delta_glue = 0.5 * fc.delta_A;
    const double C = minimal_glue_constant(p, dom, A, delta_glue);

    const double C0 = std::log(p.R0 / f.delta0) + f.gamma1 * f.gamma1 / f.gamma0 * std::log(p.R0 / f.sigma0);
    const double r0 = schedule_r0(p, f);
    const double C1 = lipschitz_constants(p, f).Lp * r0;
    double delta = 0, eps = 0;
    if (r > 0) {
        auto sch = perturbation_schedule(p, f, C0, C1, r);
        delta = sch.delta;
        eps = sch.eps;
    }
    const double budget_delta = r > 0 ? delta : f.delta0;
    const double budget = 10 * g.h * g.h / (budget_delta * budget_delta);

    GreenResult G = green_grid(p, dom, A, grid, 1e-11);
    const GridFunction& Gn = *G.G;

    // G^zeta on interior nodes whose translate stays in the domain; nan elsewhere.
    GridFunction Gz(grid, std::numeric_limits<double>::quiet_NaN());
    std::vector<char> D(N, 0);
    std::size_t skipped = 0;
    for (std::size_t k = 0; k < N; ++k) {
        if (g.kind[k] != NodeKind::Interior)
            continue;
        Point z = g.point(k);
        Point zs{z[0] + zeta[0], z[1] + zeta[1]};
        if (!dom.contains(zs))
            continue;
        double v = r > 0 ? G.eval(zs) : Gn[k];
        if (std::isnan(v)) {
            ++skipped;
            continue;
        }
        Gz[k] = v;
        D[k] = 1;
    }

    double worst = -std::numeric_limits<double>::infinity();
    std::size_t samples = 0;
    std::vector<Worst> rows;
    for (std::size_t k = 0; k < N; ++k) {
        if (!D[k] || at_pole(Gn[k]) || at_pole(Gz[k]))
            continue;
        Point z = g.point(k);
        if (delta > 0 && sublevel_contains(p, A, delta, z))
            continue;
        double lhs = (1 + eps) * Gz[k] - Gn[k] - 2 * (1 + eps) * C * M * r;
        worst = std::max(worst, lhs);
        rows.push_back({lhs, z[0], z[1]});
        ++samples;
    }
    if (samples == 0)
        throw std::invalid_argument("walsh_experiment: no admissible nodes");
    std::size_t keep = std::min<std::size_t>(rows.size(), 64);
    std::partial_sort(rows.begin(), rows.begin() + keep, rows.end(),
                      [](const Worst& a, const Worst& b) { return a.value > b.value; });
    rows.resize(keep);

    // v^zeta and its maximal subextension w^zeta.
    GridFunction v(grid);
    for (std::size_t k = 0; k < N; ++k) {
        if (!D[k])
            continue;
        Point z = g.point(k);
        double ps = psi_weight(p, A, z);
        if (at_pole(ps))
            throw std::invalid_argument("walsh_experiment: pole lies on a grid node");
        v[k] = (delta > 0 && sublevel_contains(p, A, delta, z)) ? ps : std::max((1 + eps) * Gz[k], ps);
    }
    auto w = subextension(grid, D, v);
    double w_excess = -std::numeric_limits<double>::infinity();
    double w_excess_far = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < N; ++k) {
        if (g.kind[k] != NodeKind::Interior || Gn.is_singular(k))
            continue;
        double e = w.U[k] - Gn[k];
        w_excess = std::max(w_excess, e);
        double dmin = std::numeric_limits<double>::infinity();
        for (const auto& q : A.poles())
            dmin = std::min(dmin, distance(g.point(k), q.a));
        if (dmin >= 3 * g.h)
            w_excess_far = std::max(w_excess_far, e);
    }

    Report rep;
    rep.id = "walsh";
    rep.params = {{"zeta", zeta},
                  {"r", r},
                  {"h", g.h},
                  {"delta", delta},
                  {"eps", eps},
                  {"C", C},
                  {"M", M},
                  {"C0", C0},
                  {"C1", C1},
                  {"r0", r0},
                  {"glue_delta", delta_glue},
                  {"skipped_nodes", skipped},
                  {"subextension_sweeps", w.sweeps},
                  {"w_minus_G_max", w_excess},
                  {"w_minus_G_max_off_pole_cells", w_excess_far}};
    rep.samples = samples;
    rep.max_violation = worst;
    rep.budget = budget;
    rep.columns = {"x", "y", "violation"};
    for (const auto& row : rows)
        rep.rows.push_back({row.x, row.y, row.value});
    rep.finalize();
    return rep;
}

}  // namespace hg
