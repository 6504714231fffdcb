/// @file report.hpp
/// @brief CSV tables and self-contained SVG line plots.
#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace abw::report {

/// Number with 12 significant digits; inf, -inf and nan spelled out.
std::string format_number(double v);

/// RFC-4180 field quoting.
std::string quote_field(const std::string& s);

/// A CSV cell: text or number.
using Cell = std::variant<std::string, double>;

/// Writes rows of cells with a header row and LF line endings.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(std::vector<Cell> row);
    std::size_t rows() const { return rows_.size(); }

    void write(std::ostream& out) const;
    /// Writes to a file; throws std::runtime_error if it cannot be opened.
    void write_file(const std::string& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<Cell>> rows_;
};

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
};

/// Line plot with linear axes, ticks and a legend.
struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::vector<double> vertical_markers;  ///< dashed vertical reference lines
    int width = 720;
    int height = 480;

    /// Renders the plot as a standalone SVG document.
    std::string render() const;
    void write_file(const std::string& path) const;
};

}  // namespace abw::report
