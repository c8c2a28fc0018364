#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "hg/parallel.hpp"
#include "hg/solver.hpp"
#include "stencil.hpp"

namespace hg {

ObstacleInterface obstacle_interface(const Grid& g, const std::vector<char>& D,
                                     const std::function<double(const Point&)>& level,
                                     const std::function<double(const Point&)>& obstacle)
{
    const std::size_t N = g.kind.size();
    if (D.size() != N)
        throw std::invalid_argument("obstacle_interface: mask does not match the grid");
    ObstacleInterface out;
    out.t.assign(N, {0, 0, 0, 0});
    out.value.assign(N, {0, 0, 0, 0});
    for (std::size_t k = 0; k < N; ++k) {
        if (g.kind[k] != NodeKind::Interior || D[k])
            continue;
        Point zk = g.point(k);
        if (level(zk) < 0)
            continue;
        for (int d = 0; d < 4; ++d) {
            if (g.cut[k] >> d & 1u)
                continue;
            std::size_t j = g.neighbour(k, d);
            if (!D[j] || !(level(g.point(j)) < 0))
                continue;
            double lo = 0, hi = 1;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                Point z{zk[0] + kDx[d] * mid * g.h, zk[1] + kDy[d] * mid * g.h};
                (level(z) < 0 ? hi : lo) = mid;
            }
            double s = std::max(hi, 1e-9);
            out.t[k][d] = s;
            out.value[k][d] = obstacle({zk[0] + kDx[d] * s * g.h, zk[1] + kDy[d] * s * g.h});
        }
    }
    return out;
}

SubextensionResult subextension(std::shared_ptr<const Grid> grid, const std::vector<char>& D,
                                const GridFunction& obstacle, const GridFunction* u0, double tol,
                                long max_sweeps, const ObstacleInterface* iface)
{
    const Grid& g = *grid;
    const std::size_t N = g.kind.size();
    if (D.size() != N || obstacle.values().size() != N)
        throw std::invalid_argument("subextension: mask or obstacle does not match the grid");
    if (iface && (iface->t.size() != N || iface->value.size() != N))
        throw std::invalid_argument("subextension: interface does not match the grid");

    std::vector<char> capped(N, 0);
    std::vector<double> cap(N, std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < N; ++k) {
        if (!D[k] || g.kind[k] != NodeKind::Interior)
            continue;
        if (at_pole(obstacle[k]) || !std::isfinite(obstacle[k]))
            throw std::invalid_argument("subextension: obstacle is singular at a grid node");
        capped[k] = 1;
        cap[k] = obstacle[k];
    }
    if (u0) {
        for (std::size_t k = 0; k < N; ++k) {
            if (g.kind[k] != NodeKind::Interior || at_pole((*u0)[k]))
                continue;
            if ((*u0)[k] > 1e-12 || (capped[k] && (*u0)[k] > cap[k] + 1e-12))
                throw std::invalid_argument("subextension: u0 is not a subsolution of the obstacle");
        }
    }

    // Arms and Shortley-Weller weights, with arms leaving D shortened to the crossing.
    std::vector<std::array<double, 4>> arm(N), w(N);
    std::vector<double> wsum(N, 0);
    std::vector<std::uint8_t> crossing(N, 0);
    std::vector<std::size_t> color[2];
    for (std::size_t k = 0; k < N; ++k) {
        if (g.kind[k] != NodeKind::Interior)
            continue;
        arm[k] = g.arm[k];
        if (iface)
            for (int d = 0; d < 4; ++d)
                if (iface->t[k][d] > 0) {
                    arm[k][d] = iface->t[k][d];
                    crossing[k] |= static_cast<std::uint8_t>(1u << d);
                }
        const auto& t = arm[k];
        w[k] = {2 / (t[0] * (t[0] + t[1])), 2 / (t[1] * (t[0] + t[1])), 2 / (t[2] * (t[2] + t[3])),
                2 / (t[3] * (t[2] + t[3]))};
        wsum[k] = 2 / (t[0] * t[1]) + 2 / (t[2] * t[3]);
        color[(g.col(k) + g.row(k)) % 2].push_back(k);
    }

    SubextensionResult res;
    res.U = GridFunction(grid);
    auto& U = res.U.values();
    for (std::size_t k = 0; k < N; ++k)
        if (g.kind[k] == NodeKind::Interior)
            U[k] = capped[k] ? std::min(cap[k], 0.0) : 0.0;

    const double omega = detail::optimal_omega(g);
    std::mutex mu;
    long sweep = 0;
    detail::SweepStats st;
    for (; sweep < max_sweeps; ++sweep) {
        st = {};
        for (int c = 0; c < 2; ++c) {
            const auto& nodes = color[c];
            parallel_for(nodes.size(), [&](std::size_t b, std::size_t e, int) {
                detail::SweepStats local;
                for (std::size_t i = b; i < e; ++i) {
                    std::size_t k = nodes[i];
                    double old = U[k], nv;
                    if (crossing[k]) {
                        // Exact scalar solve at nodes whose arms end on the obstacle interface.
                        double x = old;
                        for (int it = 0; it < 4; ++it) {
                            double s = 0, diag = wsum[k];
                            for (int d = 0; d < 4; ++d) {
                                std::size_t j = g.neighbour(k, d);
                                if (crossing[k] >> d & 1u) {
                                    double tk = arm[k][d];
                                    if (x + tk * (U[j] - x) < iface->value[k][d]) {
                                        s += w[k][d] * tk * U[j];
                                        diag -= w[k][d] * (1 - tk);
                                    } else {
                                        s += w[k][d] * iface->value[k][d];
                                    }
                                } else if (!(g.cut[k] >> d & 1u)) {
                                    s += w[k][d] * U[j];
                                }
                            }
                            x = s / diag;
                        }
                        nv = x;
                    } else {
                        double s = 0;
                        for (int d = 0; d < 4; ++d)
                            if (!(g.cut[k] >> d & 1u))
                                s += w[k][d] * U[g.neighbour(k, d)];
                        nv = old + omega * (s / wsum[k] - old);
                    }
                    if (capped[k])
                        nv = std::min(nv, cap[k]);
                    U[k] = nv;
                    local.max_update = std::max(local.max_update, std::abs(nv - old));
                    local.max_increase = std::max(local.max_increase, nv - old);
                }
                std::lock_guard<std::mutex> lock(mu);
                st.max_update = std::max(st.max_update, local.max_update);
                st.max_increase = std::max(st.max_increase, local.max_increase);
            });
        }
        res.max_increase = std::max(res.max_increase, st.max_increase);
        if (st.max_update < tol)
            break;
    }
    if (st.max_update >= tol)
        throw std::runtime_error("subextension: iteration did not converge");
    res.sweeps = sweep + 1;
    res.last_update = st.max_update;
    return res;
}

}  // namespace hg
