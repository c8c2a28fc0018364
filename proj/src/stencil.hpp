#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "hg/grid.hpp"

namespace hg::detail {

// Shortley-Weller weights for interior nodes: the five-point stencil with arms shortened
// to the boundary crossing wherever a neighbour is not interior.
struct Stencil {
    std::vector<std::size_t> color[2];
    std::vector<std::array<double, 4>> w;
    std::vector<double> wsum;
};

Stencil build_stencil(const Grid& g);

// Value at the end of arm d of node k: neighbour value or the stored boundary value.
inline double arm_value(const Grid& g, const std::vector<double>& u,
                        const std::vector<std::array<double, 4>>& bval, std::size_t k, int d)
{
    return (g.cut[k] >> d & 1u) ? bval[k][d] : u[g.neighbour(k, d)];
}

inline double sw_laplacian(const Grid& g, const Stencil& S, const std::vector<double>& u,
                           const std::vector<std::array<double, 4>>& bval, std::size_t k)
{
    double s = -S.wsum[k] * u[k];
    for (int d = 0; d < 4; ++d)
        s += S.w[k][d] * arm_value(g, u, bval, k, d);
    return s / (g.h * g.h);
}

struct SweepStats {
    double max_update = 0;
    double max_increase = 0;
};

// One red-black SOR sweep; nodes where cap is given are projected onto u <= cap.
SweepStats sor_sweep(const Grid& g, const Stencil& S, std::vector<double>& u,
                     const std::vector<std::array<double, 4>>& bval, double omega,
                     const std::vector<double>* cap, const std::vector<char>* capped,
                     const std::vector<char>* frozen = nullptr);

double optimal_omega(const Grid& g);

}  // namespace hg::detail
