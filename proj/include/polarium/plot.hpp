#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace polarium {

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t column_index(std::string_view name) const;  // throws if absent
};

CsvTable parse_csv(const std::string& text);

// Renders BER/BLER-vs-Eb/N0 curves from simulation CSVs into a standalone
// SVG: log-scale y, one polyline per (decoder, code, metric), legend from the
// CSV metadata columns. Throws when no plottable rows exist.
std::string render_error_rate_svg(const std::vector<CsvTable>& tables,
                                  const std::string& title = "");

}  // namespace polarium
