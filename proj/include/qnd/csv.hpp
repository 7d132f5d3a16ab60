#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace qnd::csv {

/// Locale-independent number formatting: '.' decimal separator, scientific
/// notation when |x| lies outside [1e-3, 1e6), 12 significant digits otherwise.
std::string format_number(double x);

/// A cell is either a preformatted string or a number.
class Cell {
public:
    Cell(double v) : text_(format_number(v)) {}
    Cell(int v) : text_(std::to_string(v)) {}
    Cell(long v) : text_(std::to_string(v)) {}
    Cell(long long v) : text_(std::to_string(v)) {}
    Cell(unsigned long v) : text_(std::to_string(v)) {}
    Cell(unsigned long long v) : text_(std::to_string(v)) {}
    Cell(bool v) : text_(v ? "true" : "false") {}
    Cell(const char* s) : text_(s) {}
    Cell(std::string s) : text_(std::move(s)) {}
    Cell(std::string_view s) : text_(s) {}

    const std::string& text() const { return text_; }

private:
    std::string text_;
};

class Writer {
public:
    explicit Writer(std::ostream& os) : os_(os) {}

    void row(std::initializer_list<Cell> cells);
    void row(const std::vector<Cell>& cells);

private:
    std::ostream& os_;
};

} // namespace qnd::csv
