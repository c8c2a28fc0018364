#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hg/report.hpp"
#include "hg/verify.hpp"

namespace hg {

struct SuiteConfig {
    // Experiment ids to run, in any order; empty selects all of them.
    std::vector<std::string> only;
    std::uint64_t seed = 20240607;
    // Adds a sandwich check on a carrier corrupted by +0.1; its gate must fail.
    bool fault_selftest = false;
    // Artifacts (reports.json and one CSV per report) are written here when non-empty.
    std::string outdir;
};

struct Experiment {
    std::string id;
    std::string title;
    std::function<std::vector<Report>(const SuiteConfig&)> run;
};

// Experiments in their canonical order.
const std::vector<Experiment>& experiments();
const Experiment& find_experiment(const std::string& id);

// Reports whose id starts with "diag_" are recorded but never gate.
bool is_gating(const Report& r);

struct SuiteResult {
    std::vector<Report> reports;
    std::vector<std::string> failed;
    int status = 0;
};

SuiteResult run_suite(const SuiteConfig& config);

// Modulus problems used by the suite: single centered pole of weight in [1, 2] in the unit
// ball of C^2 (m = 1, n = 2), and two poles in the unit disk (m = n = 1).
ModulusProblem radial_modulus_problem(double tau);
ModulusProblem disk_modulus_problem(double alpha);

void write_artifacts(const std::string& dir, const std::vector<Report>& reports);

}  // namespace hg
