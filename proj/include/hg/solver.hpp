#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hg/grid.hpp"
#include "hg/kernel.hpp"
#include "hg/poles.hpp"
#include "hg/report.hpp"

namespace hg {

struct RadialGreen {
    HessianParams p;
    double R = 1;
    double nu = 1;

    double operator()(double r) const;
};

RadialGreen green_radial(const HessianParams& p, double R, double nu);

struct RadialTable {
    std::vector<double> r;
    std::vector<double> G;
};

RadialTable radial_envelope_iterate(const HessianParams& p, double R, double nu,
                                    const std::vector<double>& mesh);

// Unit disk, m = n = 1.
double green_disk_oracle(const PoleSet& A, const Point& z);

enum class GreenMethod { Radial, DiskOracle, Grid };

struct GreenResult {
    GreenMethod method = GreenMethod::Grid;
    HessianParams p;
    DomainSpec dom;
    PoleSet A;
    // Grid carrier: G on nodes and its harmonic part H = G - psi.
    std::optional<GridFunction> G;
    std::optional<GridFunction> H;
    double tol = 0;
    double h = 0;
    long sweeps = 0;
    double max_subharmonic_violation = 0;
    double boundary_max_abs = 0;

    // Closed form for oracles; psi plus bilinear interpolation of H on grids.
    double eval(const Point& z) const;
};

GreenResult green_radial(const HessianParams& p, const DomainSpec& ball, const PoleSet& A);
GreenResult disk_oracle_result(const HessianParams& p, const DomainSpec& disk, const PoleSet& A);
GreenResult green_grid(const HessianParams& p, const DomainSpec& dom, const PoleSet& A,
                       std::shared_ptr<const Grid> grid, double tol = 1e-10,
                       long max_sweeps = 1000000);

struct SubextensionResult {
    GridFunction U;
    long sweeps = 0;
    double last_update = 0;
    double max_increase = 0;
};

// Crossings of the boundary of D seen from nodes outside D: arm fraction (units of h, 0 when
// the arm does not cross) and obstacle value at the crossing point.
struct ObstacleInterface {
    std::vector<std::array<double, 4>> t;
    std::vector<std::array<double, 4>> value;
};

// 'level' is negative inside D; crossings are located by bisection along grid arms.
ObstacleInterface obstacle_interface(const Grid& g, const std::vector<char>& D,
                                     const std::function<double(const Point&)>& level,
                                     const std::function<double(const Point&)>& obstacle);

// Largest discrete subharmonic U <= 0 with U <= obstacle on the nodes where D is set. With an
// interface, arms leaving D end at the crossing with value min(obstacle, linear interpolant).
SubextensionResult subextension(std::shared_ptr<const Grid> grid, const std::vector<char>& D,
                                const GridFunction& obstacle, const GridFunction* u0 = nullptr,
                                double tol = 1e-13, long max_sweeps = 2000000,
                                const ObstacleInterface* iface = nullptr);

struct GlueConstantError : std::invalid_argument {
    double minimal;
    GlueConstantError(const std::string& what, double c) : std::invalid_argument(what), minimal(c) {}
};

// Smallest C with C*rho <= psi on the boundary of A_delta1 (sampled, with a 1e-9 relative margin).
double minimal_glue_constant(const HessianParams& p, const DomainSpec& dom, const PoleSet& A,
                             double delta1);

struct GluedSubsolution {
    GridFunction v;
    double C_min = 0;
    // max(v - G) over nodes when a Green carrier is supplied.
    std::optional<double> excess_over_G;
};

GluedSubsolution glued_subsolution(const HessianParams& p, const DomainSpec& dom, const PoleSet& A,
                                   double delta1, double C, std::shared_ptr<const Grid> grid,
                                   const GreenResult* G = nullptr);
// Pointwise form of the same function.
double glued_value(const HessianParams& p, const DomainSpec& dom, const PoleSet& A, double delta1,
                   double C, const Point& z);

Report walsh_experiment(const HessianParams& p, const DomainSpec& dom, const PoleSet& A,
                        const Point& zeta, std::shared_ptr<const Grid> grid,
                        const std::optional<FamilyParams>& family = std::nullopt);

}  // namespace hg
