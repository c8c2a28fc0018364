#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "hg/suite.hpp"
#include "hg/verify.hpp"

using namespace hg;
using doctest::Approx;

namespace {

Point origin(int n) { return Point(2 * n, 0.0); }

}  // namespace

TEST_CASE("halton sequence")
{
    Halton h(3);
    auto a = h.next(), b = h.next(), c = h.next();
    CHECK(a[0] == 0.5);
    CHECK(a[1] == Approx(1.0 / 3).epsilon(1e-15));
    CHECK(a[2] == Approx(1.0 / 5).epsilon(1e-15));
    CHECK(b[0] == 0.25);
    CHECK(b[1] == Approx(2.0 / 3).epsilon(1e-15));
    CHECK(c[0] == 0.75);
    CHECK(c[1] == Approx(1.0 / 9).epsilon(1e-15));

    Halton s(2, halton_skip(42)), t(2, halton_skip(42));
    double mean = 0;
    for (int i = 0; i < 4096; ++i) {
        auto u = s.next();
        CHECK(u == t.next());
        CHECK(u[0] >= 0);
        CHECK(u[0] < 1);
        mean += u[0] / 4096;
    }
    CHECK(mean == Approx(0.5).epsilon(1e-2));
    CHECK_THROWS_AS(Halton(0), std::invalid_argument);
}

TEST_CASE("report pass flag")
{
    Report r;
    r.max_violation = 0.1;
    r.budget = 0.1;
    r.finalize();
    CHECK(r.pass);
    r.max_violation = 0.2;
    r.finalize();
    CHECK_FALSE(r.pass);
    r.max_violation = NAN;
    r.finalize();
    CHECK_FALSE(r.pass);
    r.max_violation = 0;
    r.M = INFINITY;
    r.finalize();
    CHECK_FALSE(r.pass);
    auto j = r.to_json();
    for (const char* key : {"id", "params", "seed", "samples", "max_violation", "budget", "fitted", "pass"})
        CHECK(j.contains(key));
}

TEST_CASE("pointwise weight inequalities")
{
    auto p = make_params(1, 2);
    PoleSet two({{{0, 0, 0, 0}, 1}, {{1, 0, 0, 0}, 1}});
    auto r = check_lemma31(p, two, 0.05, 10000, 1);
    CHECK(r.pass);
    CHECK(r.samples >= 10000);

    PoleSet one({{{0.2, 0, 0, -0.1}, 1.7}});
    CHECK(check_lemma31(p, one, 0.3, 2000, 2).pass);

    auto q = make_params(1, 1, 4.0);
    PoleSet planar({{{-0.3, 0}, 1}, {{0.3, 0}, 1}});
    CHECK(check_lemma31(q, planar, 0.01, 10000, 3).pass);

    CHECK_THROWS_AS(check_lemma31(p, two, 0.4, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(check_lemma31(q, planar, 5.0, 100, 1), std::domain_error);
}

TEST_CASE("lipschitz inequalities for the weights")
{
    auto p = make_params(1, 2);
    auto ball = DomainSpec::ball(origin(2), 1.0);
    FamilyParams f{0.1, 1.0, 2.0, 0.1};
    PoleSet A({{origin(2), 1}});
    PoleSet Ap({{{0.01, 0, 0, 0}, 1}});
    CHECK(check_lemma42(p, ball, f, A, Ap, 0.1, 10000, 4).pass);
    CHECK(check_lemma42(p, ball, f, A, A, 0.05, 2000, 5).pass);

    auto q = make_params(1, 1, 4.0);
    auto disk = DomainSpec::disk(0, 0, 1);
    PoleSet B({{{-0.3, 0}, 1}, {{0.3, 0}, 0.9}});
    PoleSet Bp({{{-0.29, 0.01}, 1}, {{0.3, 0}, 0.95}});
    FamilyParams g{0.1, 0.5, 2.0, 0.1};
    CHECK(check_lemma42(q, disk, g, B, Bp, 0.1, 10000, 6).pass);

    CHECK_THROWS_AS(check_lemma42(p, ball, f, A, Ap, 0.2, 100, 1), std::domain_error);
    PoleSet heavy({{origin(2), 3}});
    CHECK_THROWS_AS(check_lemma42(p, ball, f, A, heavy, 0.1, 100, 1), std::invalid_argument);
}

TEST_CASE("sandwich checks and injected fault")
{
    auto p = make_params(1, 1, 5.0);
    auto disk = DomainSpec::disk(0, 0, 1);
    auto G = disk_oracle_result(p, disk, PoleSet({{{-0.3, 0}, 1}, {{0.4, 0}, 2}}));
    CHECK(check_sandwich(G, 10000, 7).pass);
    CHECK_FALSE(check_sandwich(G, 2000, 7, 0.1).pass);

    auto q = make_params(1, 2, 5.0);
    auto ball = DomainSpec::ball(origin(2), 1.0);
    auto R = green_radial(q, ball, PoleSet({{origin(2), 1.5}}));
    auto rr = check_sandwich(R, 2000, 8);
    CHECK(rr.pass);
    CHECK(rr.params.at("upper_gap_max").get<double>() <= 1e-12);
    CHECK_FALSE(check_sandwich(R, 2000, 8, 0.1).pass);
}

TEST_CASE("residual mass on the grid")
{
    auto p = make_params(1, 1, 5.0);
    auto disk = DomainSpec::disk(0, 0, 1);
    auto grid = build_grid(disk, 257);
    auto G = green_grid(p, disk, PoleSet({{{0, 0}, 1}}), grid, 1e-11);
    auto r = residual_mass_check(G, {0.2});
    CHECK(r.pass);
    CHECK(r.params.at("measured_c").get<double>() == Approx(2 * M_PI).epsilon(0.01));
    CHECK_THROWS_AS(residual_mass_check(disk_oracle_result(p, disk, PoleSet({{{0, 0}, 1}})), {0.2}),
                    std::invalid_argument);
}

TEST_CASE("boundary decay")
{
    auto p = make_params(1, 1, 5.0);
    auto disk = DomainSpec::disk(0, 0, 1);
    FamilyParams f{0.1, 1.0, 3.0, 0.1};
    std::vector<PoleSet> fam{PoleSet({{{-0.3, 0}, 1}, {{0.3, 0}, 1.2}}), PoleSet({{{0, 0.4}, 1.4}, {{0.1, -0.2}, 1}}),
                             PoleSet({{{0.5, 0.1}, 1}})};
    auto r = boundary_decay_check(p, disk, fam, f, 0.05, {0.9, 0.95, 0.99});
    CHECK(r.pass);
    auto one = boundary_decay_check(p, disk, fam, f, 0.05, {0.999});
    CHECK(one.pass);
    std::vector<PoleSet> bad{PoleSet({{{0.98, 0}, 1}})};
    CHECK_THROWS_AS(boundary_decay_check(p, disk, bad, f, 0.05, {0.9}), std::invalid_argument);
}

TEST_CASE("modulus fit")
{
    auto prob = radial_modulus_problem(0.6);
    double r1 = schedule_r0(prob.p, prob.f);
    auto r = modulus_fit(prob, r1, 8, 200, 11);
    CHECK(r.pass);
    REQUIRE(r.M.has_value());
    CHECK(std::isfinite(*r.M));
    REQUIRE(r.slope.has_value());
    CHECK(*r.slope <= 0.05);
    CHECK(r.rows.size() == 8);
    CHECK_THROWS_AS(modulus_fit(prob, 2 * r1, 8, 200, 11), std::domain_error);

    auto disk = disk_modulus_problem(0.5);
    auto d = modulus_fit(disk, std::min(0.1, schedule_r0(disk.p, disk.f)), 8, 200, 12);
    CHECK(d.pass);
}

TEST_CASE("reports are reproducible")
{
    auto p = make_params(1, 2);
    PoleSet two({{{0, 0, 0, 0}, 1}, {{1, 0, 0, 0}, 1}});
    auto a = check_lemma31(p, two, 0.05, 3000, 99);
    auto b = check_lemma31(p, two, 0.05, 3000, 99);
    CHECK(a.to_json().dump() == b.to_json().dump());

    SuiteConfig cfg;
    cfg.only = {"metric", "kernel"};
    auto x = run_suite(cfg), y = run_suite(cfg);
    REQUIRE(x.reports.size() == y.reports.size());
    for (std::size_t i = 0; i < x.reports.size(); ++i)
        CHECK(x.reports[i].to_json().dump() == y.reports[i].to_json().dump());
    CHECK(x.reports.front().id.rfind("kernel", 0) == 0);
}

TEST_CASE("suite status and artifacts")
{
    SuiteConfig cfg;
    cfg.only = {"kernel"};
    auto r = run_suite(cfg);
    CHECK(r.status == 0);
    CHECK(r.failed.empty());

    SuiteConfig bad;
    bad.only = {"sandwich"};
    bad.fault_selftest = true;
    auto s = run_suite(bad);
    CHECK(s.status != 0);
    CHECK(std::find(s.failed.begin(), s.failed.end(), "sandwich_corrupted") != s.failed.end());

    Report diag;
    diag.id = "diag_probe";
    CHECK_FALSE(is_gating(diag));
    CHECK(is_gating(r.reports.front()));
    CHECK_THROWS(find_experiment("nonexistent"));

    auto dir = std::filesystem::temp_directory_path() / "hg_suite_artifacts";
    std::filesystem::remove_all(dir);
    write_artifacts(dir.string(), r.reports);
    CHECK(std::filesystem::exists(dir / "reports.json"));
    for (const auto& rep : r.reports)
        CHECK(std::filesystem::exists(dir / (rep.id + ".csv")) == !rep.columns.empty());
    std::filesystem::remove_all(dir);
}
