#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hg/poles.hpp"

namespace hg {

namespace {

std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double(const std::string& s, std::size_t line)
{
    const char* b = s.c_str();
    while (*b == ' ' || *b == '\t')
        ++b;
    char* e = nullptr;
    errno = 0;
    double v = std::strtod(b, &e);
    while (e && (*e == ' ' || *e == '\t' || *e == '\r'))
        ++e;
    if (e == b || (e && *e != '\0') || errno == ERANGE)
        throw std::invalid_argument("poles: bad number '" + s + "' on line " + std::to_string(line));
    return v;
}

WeightedPole pole_from_fields(const std::vector<double>& v, std::size_t line)
{
    if (v.size() < 3 || v.size() % 2 == 0)
        throw std::invalid_argument("poles: row " + std::to_string(line) +
                                    " needs 2n coordinates and a weight");
    return {Point(v.begin(), v.end() - 1), v.back()};
}

std::vector<double> split_numbers(const std::string& row, char sep, std::size_t line)
{
    std::vector<double> v;
    std::stringstream ss(row);
    std::string cell;
    while (std::getline(ss, cell, sep))
        v.push_back(parse_double(cell, line));
    return v;
}

std::string lower_ext(const std::string& path)
{
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos)
        return {};
    std::string e = path.substr(dot + 1);
    for (auto& c : e)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return e;
}

}  // namespace

PoleSet read_poles_csv(std::istream& in)
{
    std::vector<WeightedPole> poles;
    std::string row;
    std::size_t line = 0;
    while (std::getline(in, row)) {
        ++line;
        auto first = row.find_first_not_of(" \t\r");
        if (first == std::string::npos || row[first] == '#')
            continue;
        poles.push_back(pole_from_fields(split_numbers(row, ',', line), line));
    }
    return PoleSet(std::move(poles));
}

void write_poles_csv(std::ostream& out, const PoleSet& A)
{
    for (const auto& q : A.poles()) {
        for (double x : q.a)
            out << fmt17(x) << ',';
        out << fmt17(q.nu) << '\n';
    }
}

PoleSet read_poles_json(std::istream& in)
{
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("poles: invalid JSON: ") + e.what());
    }
    if (!j.is_array())
        throw std::invalid_argument("poles: JSON root must be an array");
    std::vector<WeightedPole> poles;
    for (const auto& e : j) {
        if (!e.is_object() || !e.contains("position") || !e.contains("weight"))
            throw std::invalid_argument("poles: entries need position and weight");
        poles.push_back({e.at("position").get<std::vector<double>>(), e.at("weight").get<double>()});
    }
    return PoleSet(std::move(poles));
}

void write_poles_json(std::ostream& out, const PoleSet& A)
{
    // Numbers are emitted by hand so every double keeps 17 significant digits.
    out << "[\n";
    for (std::size_t k = 0; k < A.size(); ++k) {
        out << "  {\"position\": [";
        for (std::size_t i = 0; i < A[k].a.size(); ++i)
            out << (i ? ", " : "") << fmt17(A[k].a[i]);
        out << "], \"weight\": " << fmt17(A[k].nu) << "}" << (k + 1 < A.size() ? "," : "") << "\n";
    }
    out << "]\n";
}

PoleSet load_poles(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("poles: cannot open " + path);
    return lower_ext(path) == "json" ? read_poles_json(in) : read_poles_csv(in);
}

void save_poles(const std::string& path, const PoleSet& A)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("poles: cannot write " + path);
    if (lower_ext(path) == "json")
        write_poles_json(out, A);
    else
        write_poles_csv(out, A);
}

PoleSet parse_poles_arg(const std::string& arg)
{
    const std::string tag = "inline:";
    if (arg.rfind(tag, 0) != 0)
        return load_poles(arg);
    std::vector<WeightedPole> poles;
    std::stringstream ss(arg.substr(tag.size()));
    std::string row;
    std::size_t k = 0;
    while (std::getline(ss, row, ';')) {
        ++k;
        poles.push_back(pole_from_fields(split_numbers(row, ',', k), k));
    }
    return PoleSet(std::move(poles));
}

}  // namespace hg
