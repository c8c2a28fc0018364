#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hgtool {

namespace {

constexpr double kW = 640, kH = 480, kPad = 48;

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    return out;
}

double to_number(const std::string& s)
{
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    return std::stod(s);
}

std::size_t column(const CsvTable& t, const std::string& name)
{
    auto it = std::find(t.header.begin(), t.header.end(), name);
    if (it == t.header.end())
        throw std::invalid_argument("svg: missing column " + name);
    return static_cast<std::size_t>(it - t.header.begin());
}

std::string colour(double u)
{
    u = std::clamp(u, 0.0, 1.0);
    int r = static_cast<int>(255 * std::min(1.0, 2 * u));
    int b = static_cast<int>(255 * std::min(1.0, 2 * (1 - u)));
    int g = static_cast<int>(255 * (1 - std::abs(2 * u - 1)) * 0.8);
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

std::string header()
{
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" viewBox=\"0 0 %g %g\">\n",
                  kW, kH, kW, kH);
    return std::string(buf) + "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

CsvTable parse_csv(const std::string& text)
{
    CsvTable t;
    std::stringstream ss(text);
    std::string line;
    bool first = true;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        auto cells = split(line);
        if (first) {
            t.header = cells;
            first = false;
            continue;
        }
        std::vector<double> row;
        for (const auto& c : cells)
            row.push_back(to_number(c));
        t.rows.push_back(row);
    }
    return t;
}

std::string svg_heatmap(const CsvTable& t)
{
    std::size_t cx = column(t, "x"), cy = column(t, "y"), cv = column(t, "value");
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY, v0 = INFINITY, v1 = -INFINITY;
    std::vector<double> xs;
    for (const auto& r : t.rows) {
        x0 = std::min(x0, r[cx]);
        x1 = std::max(x1, r[cx]);
        y0 = std::min(y0, r[cy]);
        y1 = std::max(y1, r[cy]);
        xs.push_back(r[cx]);
        if (std::isfinite(r[cv])) {
            v0 = std::min(v0, r[cv]);
            v1 = std::max(v1, r[cv]);
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    double dx = xs.size() > 1 ? xs[1] - xs[0] : 1.0;
    double span = std::max(x1 - x0, y1 - y0) + dx;
    double s = (std::min(kW, kH) - 2 * kPad) / span;
    std::string out = header();
    char buf[200];
    for (const auto& r : t.rows) {
        double u = std::isfinite(r[cv]) && v1 > v0 ? (r[cv] - v0) / (v1 - v0) : 0.0;
        std::string fill = std::isfinite(r[cv]) ? colour(u) : "#888888";
        std::snprintf(buf, sizeof buf, "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" fill=\"%s\"/>\n",
                      kPad + (r[cx] - x0) * s, kPad + (y1 - r[cy]) * s, dx * s + 0.05, dx * s + 0.05,
                      fill.c_str());
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"12\">min %.4g  max %.4g</text>\n",
                  kPad, kH - 12, v0, v1);
    out += buf;
    return out + "</svg>\n";
}

std::string svg_lines(const CsvTable& t, const std::string& x, const std::vector<std::string>& ys,
                      bool logx, bool logy)
{
    std::size_t cx = column(t, x);
    auto fx = [&](double v) { return logx ? std::log10(v) : v; };
    auto fy = [&](double v) { return logy ? std::log10(v) : v; };
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& name : ys) {
        std::size_t c = column(t, name);
        for (const auto& r : t.rows) {
            double a = fx(r[cx]), b = fy(r[c]);
            if (!std::isfinite(a) || !std::isfinite(b))
                continue;
            x0 = std::min(x0, a);
            x1 = std::max(x1, a);
            y0 = std::min(y0, b);
            y1 = std::max(y1, b);
        }
    }
    if (!(x1 > x0))
        x1 = x0 + 1;
    if (!(y1 > y0))
        y1 = y0 + 1;
    auto px = [&](double a) { return kPad + (a - x0) / (x1 - x0) * (kW - 2 * kPad); };
    auto py = [&](double b) { return kH - kPad - (b - y0) / (y1 - y0) * (kH - 2 * kPad); };
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::string out = header();
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n", kPad,
                  kPad, kW - 2 * kPad, kH - 2 * kPad);
    out += buf;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        std::size_t c = column(t, ys[i]);
        out += "<polyline fill=\"none\" stroke=\"" + std::string(palette[i % 5]) + "\" points=\"";
        for (const auto& r : t.rows) {
            double a = fx(r[cx]), b = fy(r[c]);
            if (!std::isfinite(a) || !std::isfinite(b))
                continue;
            std::snprintf(buf, sizeof buf, "%.3f,%.3f ", px(a), py(b));
            out += buf;
        }
        out += "\"/>\n";
        std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"12\" fill=\"%s\">%s</text>\n",
                      kPad + 8, kPad + 16 + 14.0 * i, palette[i % 5], ys[i].c_str());
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"12\">%s%s</text>\n", kW / 2, kH - 12,
                  logx ? "log10 " : "", x.c_str());
    out += buf;
    return out + "</svg>\n";
}

}  // namespace hgtool
