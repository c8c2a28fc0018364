#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hg/poles.hpp"

using namespace hg;
using doctest::Approx;

namespace {

PoleSet ordered_sequence_set(int j)
{
    double e = std::ldexp(1.0, -j);
    return PoleSet({{{0, 0, e, 0}, 1.0}, {{0.5, 0, e, 0}, 1.0}});
}

PoleSet ordered_limit_set() { return PoleSet({{{0.5, 0, 0, 0}, 1.0}, {{0, 0, 0, 0}, 1.0}}); }

PoleSet random_set(std::mt19937_64& rng, int dim, std::size_t count)
{
    std::uniform_real_distribution<double> x(-1, 1), w(0.5, 3);
    std::vector<WeightedPole> v;
    for (std::size_t k = 0; k < count; ++k) {
        Point a(2 * dim);
        for (double& c : a)
            c = x(rng);
        v.push_back({a, w(rng)});
    }
    return PoleSet(v);
}

}  // namespace

TEST_CASE("pole set construction rejects bad input")
{
    CHECK_THROWS_AS(PoleSet(std::vector<WeightedPole>{}), std::invalid_argument);
    CHECK_THROWS_AS(PoleSet({{{0, 0}, 1}, {{0, 0}, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(PoleSet({{{0, 0}, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(PoleSet({{{0, 0, 0}, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(PoleSet({{{0, 0}, 1}, {{0, 0, 1, 0}, 1}}), std::invalid_argument);
}

TEST_CASE("min_separation")
{
    CHECK(min_separation(PoleSet({{{0, 0, 0, 0}, 1}, {{1, 0, 0, 0}, 1}})) == 0.5);
    CHECK(std::isinf(min_separation(PoleSet({{{0, 0}, 1}}))));
    CHECK(min_separation(PoleSet({{{0, 0}, 1}, {{0.2, 0}, 1}, {{0.9, 0}, 1}})) == Approx(0.1).epsilon(1e-15));
}

TEST_CASE("weighted_distance")
{
    auto ball = DomainSpec::ball({0, 0, 0, 0}, 1.0);
    CHECK(weighted_distance(make_params(1, 2), ball, PoleSet({{{0, 0, 0, 0}, 4}})) == Approx(0.5).epsilon(1e-15));
    auto disk = DomainSpec::disk(0, 0, 1);
    CHECK(weighted_distance(make_params(1, 1, 4.0), disk, PoleSet({{{0.5, 0}, 2}})) ==
          Approx(0.0625).epsilon(1e-14));
    CHECK(weighted_distance(make_params(1, 2), ball, PoleSet({{{0, 0, 0, 0}, 4}, {{0.5, 0, 0, 0}, 1}})) ==
          Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(weighted_distance(make_params(1, 1), disk, PoleSet({{{1.5, 0}, 1}})), std::domain_error);
}

TEST_CASE("phi_weight and psi_weight")
{
    auto p = make_params(1, 2);
    PoleSet one({{{0, 0, 0, 0}, 1}});
    CHECK(phi_weight(p, one, {2, 0, 0, 0}) == Approx(-0.25).epsilon(1e-15));
    PoleSet two({{{0, 0, 0, 0}, 1}, {{3, 0, 0, 0}, 2}});
    CHECK(phi_weight(p, two, {1, 0, 0, 0}) == Approx(-1.0).epsilon(1e-15));
    CHECK(psi_weight(p, two, {1, 0, 0, 0}) == Approx(-1.5).epsilon(1e-15));
    CHECK(at_pole(phi_weight(p, two, {3, 0, 0, 0})));
    CHECK(at_pole(psi_weight(p, two, {0, 0, 0, 0})));
    CHECK(psi_weight(p, one, {0.3, 0.1, -0.2, 0.4}) == phi_weight(p, one, {0.3, 0.1, -0.2, 0.4}));
}

TEST_CASE("sublevel_contains")
{
    auto p = make_params(1, 2);
    PoleSet one({{{0, 0, 0, 0}, 1}});
    CHECK(sublevel_contains(p, one, 0.5, {0.4, 0, 0, 0}));
    CHECK_FALSE(sublevel_contains(p, one, 0.5, {0.5, 0, 0, 0}));
    CHECK_FALSE(sublevel_contains(p, one, 0.5, {0.6, 0, 0, 0}));
}

TEST_CASE("psi below phi and sublevel characterizations agree")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> x(-1.5, 1.5), dl(0.01, 0.6);
    const HessianParams ps[] = {make_params(1, 2), make_params(2, 3), make_params(1, 1, 8.0)};
    for (const auto& p : ps) {
        int dim = p.n == 3 ? 3 : p.n;
        for (int rep = 0; rep < 5; ++rep) {
            auto A = random_set(rng, dim, 3);
            for (int i = 0; i < 2000; ++i) {
                Point z(2 * dim);
                for (double& c : z)
                    c = x(rng);
                CHECK(psi_weight(p, A, z) <= phi_weight(p, A, z));
                double delta = dl(rng);
                CHECK(sublevel_contains(p, A, delta, z) == sublevel_contains_balls(p, A, delta, z));
            }
        }
    }
}

TEST_CASE("d_hausdorff examples")
{
    PoleSet A({{{0, 0}, 1}, {{0.5, 0.5}, 2}});
    CHECK(d_hausdorff(A, A) == 0);
    CHECK(d_hausdorff(PoleSet({{{0, 0}, 1}}), PoleSet({{{0, 0}, 1.5}})) == 0.5);
    PoleSet rev({{{0.5, 0.5}, 2}, {{0, 0}, 1}});
    CHECK(d_hausdorff(A, rev) == 0);
}

TEST_CASE("ordered sequence separates the two distances")
{
    auto L = ordered_limit_set();
    for (int j = 1; j <= 10; ++j) {
        auto Aj = ordered_sequence_set(j);
        CHECK(d_hausdorff(Aj, L) == std::ldexp(1.0, -j));
        CHECK(d_lelong(Aj, L) == 1.0 + std::ldexp(1.0, 1 - j));
    }
}

TEST_CASE("d_lelong examples")
{
    PoleSet A({{{0, 0}, 1}, {{0.5, 0.5}, 2}});
    CHECK(d_lelong(A, A) == 0);
    CHECK(d_lelong(PoleSet({{{0, 0}, 1}}), PoleSet({{{0.3, 0}, 1.2}})) == Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(d_lelong(A, PoleSet({{{0, 0}, 1}})), std::invalid_argument);
}

TEST_CASE("d_hausdorff metric axioms and comparison with d_lelong")
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> cnt(1, 4);
    for (int i = 0; i < 1000; ++i) {
        auto A = random_set(rng, 1, cnt(rng));
        auto B = random_set(rng, 1, cnt(rng));
        auto C = random_set(rng, 1, cnt(rng));
        double ab = d_hausdorff(A, B);
        CHECK(ab > 0);
        CHECK(ab == d_hausdorff(B, A));
        CHECK(d_hausdorff(A, A) == 0);
        CHECK(d_hausdorff(A, C) <= ab + d_hausdorff(B, C) + 1e-12);
        if (A.size() == B.size())
            CHECK(ab <= d_lelong(A, B) + 1e-12);
    }
    for (int i = 0; i < 200; ++i) {
        auto A = random_set(rng, 2, 3);
        auto B = random_set(rng, 2, 3);
        CHECK(d_hausdorff(A, B) <= d_lelong(A, B) + 1e-12);
    }
}

TEST_CASE("family_check")
{
    auto p = make_params(1, 1, 4.0);
    auto disk = DomainSpec::disk(0, 0, 1);
    PoleSet A({{{-0.3, 0}, 1}, {{0.3, 0}, 1}});
    auto c = family_check(p, disk, A, {0.01, 1.0, 2.0, 0.2});
    CHECK(c.delta_A == Approx(0.7).epsilon(1e-14));
    CHECK(c.sigma_A == Approx(0.3).epsilon(1e-14));
    CHECK(c.in_E);
    CHECK(c.in_F);
    CHECK(c.card_bound_ok);

    auto e = family_check(p, disk, A, {0.01, 0.5, 1.5, 0.2});
    CHECK_FALSE(e.in_E);
    CHECK_FALSE(e.in_F);

    PoleSet three({{{-0.3, 0}, 1}, {{0.3, 0}, 1}, {{0, 0.3}, 1}});
    auto t = family_check(p, disk, three, {0.01, 1.0, 2.0, 0.01});
    CHECK_FALSE(t.in_E);
    CHECK(t.card_bound_ok);

    auto out = family_check(p, disk, PoleSet({{{1.2, 0}, 1}}), {0.01, 1.0, 2.0, 0.01});
    CHECK_FALSE(out.in_E);
}

TEST_CASE("pole files round trip")
{
    std::mt19937_64 rng(5);
    for (int dim = 1; dim <= 3; ++dim) {
        auto A = random_set(rng, dim, 4);
        std::stringstream csv, json;
        write_poles_csv(csv, A);
        write_poles_json(json, A);
        CHECK(d_hausdorff(A, read_poles_csv(csv)) == 0);
        CHECK(d_hausdorff(A, read_poles_json(json)) == 0);
    }
    auto B = parse_poles_arg("inline:0.1,0.2,1;-0.3,0,2");
    CHECK(B.size() == 2);
    CHECK(B[1].nu == 2);
    std::stringstream bad("0.1,x,1\n");
    CHECK_THROWS_AS(read_poles_csv(bad), std::invalid_argument);
}
