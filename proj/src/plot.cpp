#include "polarium/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace polarium {

namespace {

std::vector<std::string> split_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    out.push_back(field);
    return out;
}

double parse_number(const std::string& text, std::size_t line_no)
{
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        throw std::runtime_error("CSV line " + std::to_string(line_no) +
                                 ": not a number: " + text);
    return v;
}

struct Series {
    std::string label;
    bool dashed = false;  // BER curves
    std::vector<std::pair<double, double>> points;  // (ebn0_db, rate)
};

std::string fmt(const char* format, double a, double b = 0.0)
{
    char buf[128];
    std::snprintf(buf, sizeof(buf), format, a, b);
    return buf;
}

const char* palette(std::size_t i)
{
    static const char* colors[] = {"#1f6fb2", "#d1495b", "#2e8b57", "#8d5a97",
                                   "#e1843c", "#3b8ea5", "#7a6a28", "#b5446e"};
    return colors[i % (sizeof(colors) / sizeof(colors[0]))];
}

}  // namespace

std::size_t CsvTable::column_index(std::string_view name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name)
            return i;
    throw std::runtime_error("CSV is missing column: " + std::string(name));
}

CsvTable parse_csv(const std::string& text)
{
    CsvTable table;
    std::size_t pos = 0, line_no = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos)
            end = text.size();
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        auto fields = split_line(line);
        if (table.columns.empty()) {
            table.columns = std::move(fields);
        } else {
            if (fields.size() != table.columns.size())
                throw std::runtime_error("CSV line " + std::to_string(line_no) +
                                         ": expected " + std::to_string(table.columns.size()) +
                                         " fields, got " + std::to_string(fields.size()));
            table.rows.push_back(std::move(fields));
        }
    }
    return table;
}

std::string render_error_rate_svg(const std::vector<CsvTable>& tables, const std::string& title)
{
    std::vector<Series> series;
    for (const auto& table : tables) {
        if (table.columns.empty())
            throw std::runtime_error("empty CSV");
        const std::size_t c_dec = table.column_index("decoder");
        const std::size_t c_n = table.column_index("N");
        const std::size_t c_k = table.column_index("k");
        const std::size_t c_con = table.column_index("construction");
        const std::size_t c_list = table.column_index("list");
        const std::size_t c_ebn0 = table.column_index("ebn0_db");
        const std::size_t c_ber = table.column_index("ber");
        const std::size_t c_bler = table.column_index("bler");

        std::map<std::string, std::pair<Series, Series>> groups;  // key -> (bler, ber)
        std::size_t line_no = 1;
        for (const auto& row : table.rows) {
            ++line_no;
            std::string key = row[c_dec] + "|" + row[c_n] + "|" + row[c_k] + "|" +
                              row[c_con] + "|" + row[c_list];
            auto it = groups.find(key);
            if (it == groups.end()) {
                std::string label = row[c_dec];
                if (row[c_list] != "1")
                    label += " L=" + row[c_list];
                label += " P(" + row[c_n] + "," + row[c_k] + ")";
                if (row[c_con] == "rm_polar")
                    label += " RM";
                Series bler_series{label + " BLER", false, {}};
                Series ber_series{label + " BER", true, {}};
                it = groups.emplace(key, std::make_pair(bler_series, ber_series)).first;
            }
            const double x = parse_number(row[c_ebn0], line_no);
            const double bler = parse_number(row[c_bler], line_no);
            const double ber = parse_number(row[c_ber], line_no);
            if (bler > 0.0 && std::isfinite(bler))
                it->second.first.points.emplace_back(x, bler);
            if (ber > 0.0 && std::isfinite(ber))
                it->second.second.points.emplace_back(x, ber);
        }
        for (auto& [key, pair] : groups) {
            if (!pair.first.points.empty())
                series.push_back(std::move(pair.first));
            if (!pair.second.points.empty())
                series.push_back(std::move(pair.second));
        }
    }
    if (series.empty())
        throw std::runtime_error("no plottable data (every rate is zero or the CSV is empty)");

    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const auto& s : series) {
        for (auto [x, y] : s.points) {
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    if (x_max - x_min < 1e-9) {
        x_min -= 0.5;
        x_max += 0.5;
    }
    int e_min = static_cast<int>(std::floor(std::log10(y_min)));
    int e_max = static_cast<int>(std::ceil(std::log10(y_max)));
    if (e_max <= e_min)
        e_max = e_min + 1;

    const double width = 920, height = 620;
    const double ml = 80, mr = 250, mt = 50, mb = 60;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
    auto sy = [&](double y) {
        const double ly = std::log10(y);
        return mt + (e_max - ly) / (e_max - e_min) * ph;
    };

    std::string svg;
    svg += fmt("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" ",
               width, height);
    svg += fmt("viewBox=\"0 0 %.0f %.0f\">\n", width, height);
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    if (!title.empty())
        svg += fmt("<text x=\"%.1f\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">",
                   ml + pw / 2) + title + "</text>\n";

    // Decade grid and y labels.
    for (int e = e_min; e <= e_max; ++e) {
        const double y = sy(std::pow(10.0, e));
        svg += fmt("<line x1=\"%.1f\" y1=\"%.1f\" ", ml, y);
        svg += fmt("x2=\"%.1f\" y2=\"%.1f\" stroke=\"#dddddd\"/>\n", ml + pw, y);
        svg += fmt("<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">", ml - 8, y + 4);
        svg += "1e" + std::to_string(e) + "</text>\n";
    }
    // X ticks at a readable step.
    double x_step = 0.25;
    for (double c : {0.25, 0.5, 1.0, 2.0, 5.0}) {
        x_step = c;
        if ((x_max - x_min) / c <= 10.0)
            break;
    }
    const double tick0 = std::ceil(x_min / x_step - 1e-9) * x_step;
    for (double x = tick0; x <= x_max + 1e-9; x += x_step) {
        const double px = sx(x);
        svg += fmt("<line x1=\"%.1f\" y1=\"%.1f\" ", px, mt);
        svg += fmt("x2=\"%.1f\" y2=\"%.1f\" stroke=\"#eeeeee\"/>\n", px, mt + ph);
        svg += fmt("<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">", px, mt + ph + 18);
        svg += fmt("%.2f", x) + "</text>\n";
    }
    // Frame and axis titles.
    svg += fmt("<rect x=\"%.1f\" y=\"%.1f\" ", ml, mt);
    svg += fmt("width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"black\"/>\n", pw, ph);
    svg += fmt("<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">Eb/N0 [dB]</text>\n",
               ml + pw / 2, height - 16);
    svg += fmt("<text x=\"18\" y=\"%.1f\" text-anchor=\"middle\" "
               "transform=\"rotate(-90 18 %.1f)\">error rate</text>\n",
               mt + ph / 2, mt + ph / 2);

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        auto pts = s.points;
        std::sort(pts.begin(), pts.end());
        std::string poly = "<polyline fill=\"none\" stroke=\"";
        poly += palette(i);
        poly += "\" stroke-width=\"1.6\"";
        if (s.dashed)
            poly += " stroke-dasharray=\"6 4\"";
        poly += " points=\"";
        for (auto [x, y] : pts)
            poly += fmt("%.2f,%.2f ", sx(x), sy(y));
        poly += "\"/>\n";
        svg += poly;
        for (auto [x, y] : pts)
            svg += fmt("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"", sx(x), sy(y)) +
                   palette(i) + "\"/>\n";
        // Legend entry.
        const double ly = mt + 14 + 20.0 * static_cast<double>(i);
        svg += fmt("<line x1=\"%.1f\" y1=\"%.1f\" ", ml + pw + 14, ly - 4);
        svg += fmt("x2=\"%.1f\" y2=\"%.1f\" stroke=\"", ml + pw + 44, ly - 4) + palette(i);
        svg += std::string("\" stroke-width=\"1.6\"") +
               (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
        svg += fmt("<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\">", ml + pw + 50, ly) +
               s.label + "</text>\n";
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

}  // namespace polarium
