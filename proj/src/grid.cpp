#include "hg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace hg {

Point Grid::arm_point(std::size_t k, int d) const
{
    double t = arm[k][d] * h;
    return {x(col(k)) + kDx[d] * t, y(row(k)) + kDy[d] * t};
}

std::size_t Grid::count(NodeKind which) const
{
    return static_cast<std::size_t>(std::count(kind.begin(), kind.end(), which));
}

std::size_t Grid::nearest_node(const Point& z) const
{
    int i = static_cast<int>(std::lround((z[0] - x0) / h));
    int j = static_cast<int>(std::lround((z[1] - y0) / h));
    i = std::clamp(i, 0, nx - 1);
    j = std::clamp(j, 0, ny - 1);
    return index(i, j);
}

namespace {

double crossing(const DomainSpec& dom, double px, double py, int d, double h)
{
    double ex = kDx[d], ey = kDy[d];
    double t;
    if (dom.kind == DomainSpec::Kind::Rectangle) {
        if (ex > 0)
            t = dom.xmax - px;
        else if (ex < 0)
            t = px - dom.xmin;
        else if (ey > 0)
            t = dom.ymax - py;
        else
            t = py - dom.ymin;
    } else {
        double wx = px - dom.center[0], wy = py - dom.center[1];
        double b = wx * ex + wy * ey;
        double c = wx * wx + wy * wy - dom.R * dom.R;
        t = -b + std::sqrt(std::max(b * b - c, 0.0));
    }
    return std::clamp(t / h, 1e-12, 1.0);
}

}  // namespace

std::shared_ptr<const Grid> build_grid(const DomainSpec& dom, int resolution)
{
    dom.validate();
    if (resolution < 17)
        throw std::invalid_argument("build_grid: resolution must be at least 17");
    if (dom.dim() != 1)
        throw std::invalid_argument("build_grid: grids exist only for domains in C^1");

    auto g = std::make_shared<Grid>();
    g->dom = dom;
    double x1, y1;
    if (dom.kind == DomainSpec::Kind::Rectangle) {
        g->x0 = dom.xmin;
        g->y0 = dom.ymin;
        x1 = dom.xmax;
        y1 = dom.ymax;
    } else {
        g->x0 = dom.center[0] - dom.R;
        g->y0 = dom.center[1] - dom.R;
        x1 = dom.center[0] + dom.R;
        y1 = dom.center[1] + dom.R;
    }
    double span = std::max(x1 - g->x0, y1 - g->y0);
    g->h = span / (resolution - 1);
    g->nx = static_cast<int>(std::lround((x1 - g->x0) / g->h)) + 1;
    g->ny = static_cast<int>(std::lround((y1 - g->y0) / g->h)) + 1;
    if (g->nx < 3 || g->ny < 3)
        throw std::invalid_argument("build_grid: degenerate domain");

    const std::size_t N = static_cast<std::size_t>(g->nx) * g->ny;
    const double snap = 1e-12 * (1 + span);
    std::vector<double> sd(N);
    for (int j = 0; j < g->ny; ++j)
        for (int i = 0; i < g->nx; ++i)
            sd[g->index(i, j)] = dom.signed_distance({g->x(i), g->y(j)});

    g->kind.assign(N, NodeKind::Exterior);
    for (std::size_t k = 0; k < N; ++k)
        if (sd[k] > snap)
            g->kind[k] = NodeKind::Interior;
        else if (sd[k] >= -snap)
            g->kind[k] = NodeKind::Boundary;
    for (int j = 0; j < g->ny; ++j)
        for (int i = 0; i < g->nx; ++i) {
            std::size_t k = g->index(i, j);
            if (g->kind[k] != NodeKind::Exterior)
                continue;
            for (int d = 0; d < 4; ++d) {
                int a = i + kDx[d], b = j + kDy[d];
                if (a >= 0 && a < g->nx && b >= 0 && b < g->ny && sd[g->index(a, b)] > snap)
                    g->kind[k] = NodeKind::Boundary;
            }
        }

    g->arm.assign(N, {1.0, 1.0, 1.0, 1.0});
    g->cut.assign(N, 0);
    for (int j = 0; j < g->ny; ++j)
        for (int i = 0; i < g->nx; ++i) {
            std::size_t k = g->index(i, j);
            if (g->kind[k] != NodeKind::Interior)
                continue;
            if (i == 0 || j == 0 || i == g->nx - 1 || j == g->ny - 1)
                throw std::logic_error("build_grid: interior node on the bounding box");
            for (int d = 0; d < 4; ++d) {
                std::size_t q = g->index(i + kDx[d], j + kDy[d]);
                if (g->kind[q] == NodeKind::Interior)
                    continue;
                g->cut[k] |= static_cast<std::uint8_t>(1u << d);
                g->arm[k][d] = crossing(dom, g->x(i), g->y(j), d, g->h);
            }
        }
    return g;
}

GridFunction::GridFunction(std::shared_ptr<const Grid> g, double fill)
    : grid_(std::move(g)), v_(static_cast<std::size_t>(grid_->nx) * grid_->ny, fill)
{
}

void GridFunction::mark_singular(std::size_t node, double snap)
{
    if (is_singular(node))
        return;
    singular_.push_back(node);
    snap_.push_back(snap);
}

bool GridFunction::is_singular(std::size_t node) const
{
    return at_pole(v_[node]) ||
           std::find(singular_.begin(), singular_.end(), node) != singular_.end();
}

double GridFunction::interpolate(const Point& z) const
{
    const Grid& g = *grid_;
    double fx = (z[0] - g.x0) / g.h, fy = (z[1] - g.y0) / g.h;
    int i = std::clamp(static_cast<int>(std::floor(fx)), 0, g.nx - 2);
    int j = std::clamp(static_cast<int>(std::floor(fy)), 0, g.ny - 2);
    double u = fx - i, w = fy - j;
    if (u < -1e-9 || u > 1 + 1e-9 || w < -1e-9 || w > 1 + 1e-9)
        return std::numeric_limits<double>::quiet_NaN();
    std::size_t c[4] = {g.index(i, j), g.index(i + 1, j), g.index(i, j + 1), g.index(i + 1, j + 1)};
    for (auto k : c)
        if (g.kind[k] == NodeKind::Exterior || at_pole(v_[k]))
            return std::numeric_limits<double>::quiet_NaN();
    return (1 - u) * (1 - w) * v_[c[0]] + u * (1 - w) * v_[c[1]] + (1 - u) * w * v_[c[2]] +
           u * w * v_[c[3]];
}

GridFunction sample_function(std::shared_ptr<const Grid> g, const std::function<double(const Point&)>& f)
{
    GridFunction out(g);
    for (std::size_t k = 0; k < g->kind.size(); ++k)
        if (g->kind[k] != NodeKind::Exterior)
            out[k] = f(g->point(k));
    return out;
}

double discrete_laplacian(const GridFunction& f, std::size_t node)
{
    const Grid& g = f.grid();
    if (g.kind[node] != NodeKind::Interior)
        throw std::invalid_argument("discrete_laplacian: node is not interior");
    if (f.is_singular(node))
        throw std::invalid_argument("discrete_laplacian: singular node");
    double s = -4 * f[node];
    for (int d = 0; d < 4; ++d) {
        std::size_t q = g.neighbour(node, d);
        if (f.is_singular(q))
            throw std::invalid_argument("discrete_laplacian: singular neighbour");
        s += f[q];
    }
    return s / (g.h * g.h);
}

FluxMass flux_mass(const GridFunction& f, const Point& center, double radius)
{
    const Grid& g = f.grid();
    const std::size_t N = g.kind.size();
    std::vector<char> in(N, 0);
    std::vector<std::size_t> disk;
    for (std::size_t k = 0; k < N; ++k) {
        if (g.kind[k] == NodeKind::Exterior)
            continue;
        Point z = g.point(k);
        if (std::hypot(z[0] - center[0], z[1] - center[1]) <= radius) {
            if (g.kind[k] != NodeKind::Interior)
                throw std::invalid_argument("flux_mass: disk is not inside the grid interior");
            in[k] = 1;
            disk.push_back(k);
        }
    }
    if (disk.empty())
        throw std::invalid_argument("flux_mass: disk contains no nodes");

    FluxMass out;
    std::vector<std::size_t> sing;
    for (auto k : disk)
        if (f.is_singular(k))
            sing.push_back(k);
    if (sing.size() > 1)
        throw std::invalid_argument("flux_mass: overlapping singular regions");

    for (auto k : disk)
        for (int d = 0; d < 4; ++d) {
            std::size_t q = g.neighbour(k, d);
            if (in[q])
                continue;
            if (f.is_singular(k) || f.is_singular(q))
                throw std::invalid_argument("flux_mass: singular node on the disk edge");
            out.flux += f[q] - f[k];
        }

    std::vector<char> core(N, 0);
    if (!sing.empty()) {
        std::size_t s = sing[0];
        core[s] = 1;
        for (int d = 0; d < 4; ++d) {
            std::size_t q = g.neighbour(s, d);
            if (!in[q] || f.is_singular(q))
                throw std::invalid_argument("flux_mass: singular node too close to the disk edge");
            core[q] = 1;
        }
        const auto& marks = f.singular();
        auto it = std::find(marks.begin(), marks.end(), s);
        if (it != marks.end())
            out.snap = f.snaps()[static_cast<std::size_t>(it - marks.begin())];
    }
    double h2 = g.h * g.h;
    for (auto k : disk) {
        if (core[k])
            continue;
        out.volume += h2 * discrete_laplacian(f, k);
    }
    for (auto k : disk) {
        if (!core[k] || f.is_singular(k))
            continue;
        for (int d = 0; d < 4; ++d) {
            std::size_t q = g.neighbour(k, d);
            if (!core[q])
                out.volume += f[q] - f[k];
        }
    }
    out.gap = std::abs(out.flux - out.volume);
    return out;
}

namespace {

double export_value(const GridFunction& f, std::size_t k)
{
    if (f.grid().kind[k] == NodeKind::Exterior)
        return std::numeric_limits<double>::quiet_NaN();
    if (at_pole(f[k]))
        return -std::numeric_limits<double>::infinity();
    return f[k];
}

}  // namespace

void write_grid_csv(std::ostream& out, const GridFunction& f)
{
    const Grid& g = f.grid();
    out << "x,y,value\n";
    char buf[96];
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            std::size_t k = g.index(i, j);
            if (g.kind[k] == NodeKind::Exterior)
                continue;
            double v = export_value(f, k);
            if (std::isinf(v))
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,-inf\n", g.x(i), g.y(j));
            else
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.x(i), g.y(j), v);
            out << buf;
        }
}

void write_grid_binary(std::ostream& out, const GridFunction& f)
{
    const Grid& g = f.grid();
    std::int32_t dims[2] = {g.nx, g.ny};
    out.write(reinterpret_cast<const char*>(dims), sizeof dims);
    out.write(reinterpret_cast<const char*>(&g.h), sizeof g.h);
    for (std::size_t k = 0; k < g.kind.size(); ++k) {
        double v = export_value(f, k);
        out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
}

void save_grid(const std::string& path, const GridFunction& f)
{
    bool binary = path.size() > 4 && path.substr(path.size() - 4) == ".bin";
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out)
        throw std::runtime_error("save_grid: cannot write " + path);
    if (binary)
        write_grid_binary(out, f);
    else
        write_grid_csv(out, f);
}

}  // namespace hg
