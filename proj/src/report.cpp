#include "hg/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace hg {

void Report::finalize()
{
    pass = std::isfinite(max_violation) && max_violation <= budget;
    if (M && !std::isfinite(*M))
        pass = false;
}

nlohmann::json Report::to_json() const
{
    nlohmann::json j;
    j["id"] = id;
    j["params"] = params;
    j["seed"] = seed;
    j["samples"] = samples;
    j["max_violation"] = max_violation;
    j["budget"] = budget;
    nlohmann::json fitted = nlohmann::json::object();
    fitted["M"] = M ? nlohmann::json(*M) : nlohmann::json();
    fitted["slope"] = slope ? nlohmann::json(*slope) : nlohmann::json();
    j["fitted"] = fitted;
    j["pass"] = pass;
    return j;
}

void Report::write_csv(std::ostream& out) const
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << columns[i];
    out << '\n';
    char buf[40];
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", r[i]);
            out << (i ? "," : "") << buf;
        }
        out << '\n';
    }
}

}  // namespace hg
