#include "qnd/csv.hpp"

#include <fmt/format.h>

#include <cmath>

namespace qnd::csv {

std::string format_number(double x)
{
    if (x == 0.0) return "0";
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    const double a = std::abs(x);
    if (a < 1e-3 || a >= 1e6) return fmt::format("{:.11e}", x);
    return fmt::format("{:.12g}", x);
}

void Writer::row(std::initializer_list<Cell> cells)
{
    bool first = true;
    for (const Cell& c : cells) {
        if (!first) os_ << ',';
        os_ << c.text();
        first = false;
    }
    os_ << '\n';
}

void Writer::row(const std::vector<Cell>& cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os_ << ',';
        os_ << cells[i].text();
    }
    os_ << '\n';
}

} // namespace qnd::csv
