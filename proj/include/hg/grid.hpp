#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "hg/poles.hpp"

namespace hg {

enum class NodeKind : std::uint8_t { Exterior, Interior, Boundary };

// Neighbour order used by every stencil: east, west, north, south.
inline constexpr int kDx[4] = {1, -1, 0, 0};
inline constexpr int kDy[4] = {0, 0, 1, -1};

struct Grid {
    DomainSpec dom;
    int nx = 0, ny = 0;
    double x0 = 0, y0 = 0, h = 0;
    std::vector<NodeKind> kind;
    // For interior nodes: distance to the next node or to the boundary crossing, in units of h.
    std::vector<std::array<double, 4>> arm;
    // Bit d set when the d-th neighbour of an interior node is not interior.
    std::vector<std::uint8_t> cut;

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    int col(std::size_t k) const { return static_cast<int>(k % nx); }
    int row(std::size_t k) const { return static_cast<int>(k / nx); }
    double x(int i) const { return x0 + i * h; }
    double y(int j) const { return y0 + j * h; }
    Point point(std::size_t k) const { return {x(col(k)), y(row(k))}; }
    std::size_t neighbour(std::size_t k, int d) const
    {
        return index(col(k) + kDx[d], row(k) + kDy[d]);
    }
    // Point where the d-th arm of an interior node ends.
    Point arm_point(std::size_t k, int d) const;
    std::size_t count(NodeKind which) const;
    std::size_t nearest_node(const Point& z) const;
};

std::shared_ptr<const Grid> build_grid(const DomainSpec& dom, int resolution);

class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(std::shared_ptr<const Grid> g, double fill = 0.0);

    const Grid& grid() const { return *grid_; }
    std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
    double operator[](std::size_t k) const { return v_[k]; }
    double& operator[](std::size_t k) { return v_[k]; }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    void mark_singular(std::size_t node, double snap);
    const std::vector<std::size_t>& singular() const { return singular_; }
    const std::vector<double>& snaps() const { return snap_; }
    bool is_singular(std::size_t node) const;

    // Bilinear interpolation; nan when a corner is exterior or singular.
    double interpolate(const Point& z) const;

private:
    std::shared_ptr<const Grid> grid_;
    std::vector<double> v_;
    std::vector<std::size_t> singular_;
    std::vector<double> snap_;
};

GridFunction sample_function(std::shared_ptr<const Grid> g, const std::function<double(const Point&)>& f);

double discrete_laplacian(const GridFunction& f, std::size_t node);

struct FluxMass {
    double flux = 0;
    double volume = 0;
    double gap = 0;
    double snap = 0;
};

FluxMass flux_mass(const GridFunction& f, const Point& center, double radius);

void write_grid_csv(std::ostream& out, const GridFunction& f);
void write_grid_binary(std::ostream& out, const GridFunction& f);
void save_grid(const std::string& path, const GridFunction& f);

}  // namespace hg
