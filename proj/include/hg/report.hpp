#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace hg {

struct Report {
    std::string id;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    double max_violation = 0;
    double budget = 0;
    std::optional<double> M;
    std::optional<double> slope;
    bool pass = false;
    // Per-sample extremes, written as CSV.
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    // pass <=> max_violation <= budget, and a fitted M (when present) is finite.
    void finalize();
    nlohmann::json to_json() const;
    void write_csv(std::ostream& out) const;
};

}  // namespace hg
