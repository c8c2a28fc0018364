#pragma once

#include <string>
#include <vector>

namespace hgtool {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable parse_csv(const std::string& text);

// Heatmap of an x,y,value grid CSV. Non-finite values are drawn in grey.
std::string svg_heatmap(const CsvTable& t);

// One polyline per y column against column x; logarithmic axes when requested.
std::string svg_lines(const CsvTable& t, const std::string& x, const std::vector<std::string>& ys,
                      bool logx, bool logy);

}  // namespace hgtool
