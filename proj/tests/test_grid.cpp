#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hg/grid.hpp"
#include "hg/solver.hpp"

using namespace hg;
using doctest::Approx;

TEST_CASE("grid classification")
{
    auto disk = build_grid(DomainSpec::disk(0, 0, 1), 65);
    double expected = M_PI * 32 * 32;
    CHECK(std::abs(static_cast<double>(disk->count(NodeKind::Interior)) - expected) <= 0.02 * expected);
    auto rect = build_grid(DomainSpec::rectangle(-1, 1, -1, 1), 65);
    CHECK(rect->count(NodeKind::Interior) == 63u * 63u);
    CHECK_THROWS_AS(build_grid(DomainSpec::disk(0, 0, 1), 16), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(DomainSpec::ball({0, 0, 0, 0}, 1), 65), std::invalid_argument);
}

TEST_CASE("arms end on the boundary")
{
    auto g = build_grid(DomainSpec::disk(0, 0, 1), 65);
    for (std::size_t k = 0; k < g->kind.size(); ++k) {
        if (g->kind[k] != NodeKind::Interior)
            continue;
        for (int d = 0; d < 4; ++d) {
            double a = g->arm[k][d];
            CHECK(a > 0);
            CHECK(a <= 1.0);
            if (g->cut[k] >> d & 1u)
                CHECK(std::abs(norm(g->arm_point(k, d)) - 1.0) < 1e-12);
            else
                CHECK(a == 1.0);
        }
    }
}

TEST_CASE("discrete laplacian of quadratics")
{
    auto g = build_grid(DomainSpec::disk(0, 0, 1), 65);
    auto sq = sample_function(g, [](const Point& z) { return z[0] * z[0] + z[1] * z[1]; });
    auto re = sample_function(g, [](const Point& z) { return z[0] * z[0] - z[1] * z[1]; });
    for (std::size_t k = 0; k < g->kind.size(); ++k) {
        if (g->kind[k] != NodeKind::Interior)
            continue;
        CHECK(discrete_laplacian(sq, k) == Approx(4.0).epsilon(1e-9));
        CHECK(std::abs(discrete_laplacian(re, k)) < 1e-9);
    }
}

TEST_CASE("discrete laplacian of log on an annulus")
{
    auto g = build_grid(DomainSpec::disk(0, 0, 1), 129);
    auto lg = sample_function(g, [](const Point& z) { return std::log(norm(z)); });
    for (std::size_t k = 0; k < g->kind.size(); ++k) {
        if (g->kind[k] != NodeKind::Interior)
            continue;
        double r = norm(g->point(k));
        if (r < 0.25)
            continue;
        // Leading truncation term h^2/12 * (u_xxxx + u_yyyy) is at most h^2 / r^4.
        CHECK(std::abs(discrete_laplacian(lg, k)) <= 1.5 * g->h * g->h / std::pow(r, 4));
    }
}

TEST_CASE("discrete laplacian is linear")
{
    auto g = build_grid(DomainSpec::rectangle(-1, 1, -0.5, 0.5), 33);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-2, 2);
    GridFunction f(g), h(g), c(g);
    for (std::size_t k = 0; k < g->kind.size(); ++k) {
        f[k] = u(rng);
        h[k] = u(rng);
    }
    for (int rep = 0; rep < 20; ++rep) {
        double a = u(rng), b = u(rng);
        for (std::size_t k = 0; k < g->kind.size(); ++k)
            c[k] = a * f[k] + b * h[k];
        for (std::size_t k = 0; k < g->kind.size(); ++k) {
            if (g->kind[k] != NodeKind::Interior)
                continue;
            double lhs = discrete_laplacian(c, k);
            double rhs = a * discrete_laplacian(f, k) + b * discrete_laplacian(h, k);
            CHECK(std::abs(lhs - rhs) <= 1e-9 * (1 + std::abs(rhs)));
        }
    }
}

TEST_CASE("flux mass of sampled green functions")
{
    auto g = build_grid(DomainSpec::disk(0, 0, 1), 257);
    for (double nu : {1.0, 2.0}) {
        PoleSet A({{{0, 0}, nu}});
        auto G = sample_function(g, [&](const Point& z) { return norm(z) < 1 ? green_disk_oracle(A, z) : 0.0; });
        auto m = flux_mass(G, {0, 0}, 0.2);
        CHECK(std::abs(m.flux - 2 * M_PI * nu) <= 0.01 * 2 * M_PI * nu);
    }
    auto harm = sample_function(g, [](const Point& z) { return z[0] * z[0] - z[1] * z[1] + 3 * z[0]; });
    auto m = flux_mass(harm, {0.1, 0.1}, 0.3);
    CHECK(std::abs(m.flux) <= 1e-8 * 3);
}

TEST_CASE("flux and volume forms agree on smooth data")
{
    auto g = build_grid(DomainSpec::disk(0, 0, 1), 129);
    auto f = sample_function(g, [](const Point& z) { return std::exp(z[0]) * std::cos(2 * z[1]) + z[0] * z[0]; });
    auto m = flux_mass(f, {0.2, -0.1}, 0.4);
    CHECK(m.gap <= 5 * g->h * std::max(1.0, std::abs(m.flux)));
    CHECK_THROWS_AS(flux_mass(f, {0.9, 0}, 0.3), std::invalid_argument);
}

TEST_CASE("bilinear interpolation reproduces bilinear data")
{
    auto g = build_grid(DomainSpec::rectangle(0, 1, 0, 1), 33);
    auto f = sample_function(g, [](const Point& z) { return 1 + 2 * z[0] - z[1] + 3 * z[0] * z[1]; });
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        Point z{u(rng), u(rng)};
        CHECK(f.interpolate(z) == Approx(1 + 2 * z[0] - z[1] + 3 * z[0] * z[1]).epsilon(1e-12));
    }
}

TEST_CASE("grid csv export")
{
    auto g = build_grid(DomainSpec::rectangle(-1, 1, -1, 1), 17);
    auto f = sample_function(g, [](const Point& z) { return z[0] + 2 * z[1]; });
    std::stringstream ss;
    write_grid_csv(ss, f);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "x,y,value");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(ss, line)) {
        double x, y, v;
        char c1, c2;
        std::stringstream ls(line);
        ls >> x >> c1 >> y >> c2 >> v;
        CHECK(v == x + 2 * y);
        ++rows;
    }
    CHECK(rows == 17u * 17u);
}
