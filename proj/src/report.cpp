#include "abw/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace abw::report {

std::string format_number(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (v == 0.0) {
        return "0";
    }
    return fmt::format("{:.12g}", v);
}

std::string quote_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    out += '"';
    return out;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvWriter::add_row(std::vector<Cell> row)
{
    if (row.size() != header_.size()) {
        throw std::invalid_argument("CsvWriter: row width differs from header");
    }
    rows_.push_back(std::move(row));
}

void CsvWriter::write(std::ostream& out) const
{
    for (std::size_t i = 0; i < header_.size(); ++i) {
        out << (i ? "," : "") << quote_field(header_[i]);
    }
    out << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out << ',';
            }
            if (const auto* s = std::get_if<std::string>(&row[i])) {
                out << quote_field(*s);
            } else {
                out << format_number(std::get<double>(row[i]));
            }
        }
        out << '\n';
    }
}

void CsvWriter::write_file(const std::string& path) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    write(out);
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf",
                                    "#7f7f7f", "#bcbd22"};
constexpr std::size_t kMaxPoints = 1500;

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += ch;
        }
    }
    return out;
}

double nice_step(double span, int target)
{
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    const double nice = r < 1.5 ? 1.0 : r < 3.0 ? 2.0 : r < 7.0 ? 5.0 : 10.0;
    return nice * mag;
}

std::string tick_label(double v, double step)
{
    if (std::abs(v) < 1e-12 * step) {
        v = 0.0;
    }
    return fmt::format("{:g}", v);
}

}  // namespace

std::string LinePlot::render() const
{
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double ymin = xmin;
    double ymax = -xmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
                xmin = std::min(xmin, s.x[i]);
                xmax = std::max(xmax, s.x[i]);
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = 0.0;
        xmax = 1.0;
        ymin = 0.0;
        ymax = 1.0;
    }
    if (xmax <= xmin) {
        xmax = xmin + 1.0;
    }
    if (ymax <= ymin) {
        ymax = ymin + 1.0;
    }
    const double xstep = nice_step(xmax - xmin, 6);
    const double ystep = nice_step(ymax - ymin, 6);
    xmin = std::floor(xmin / xstep) * xstep;
    xmax = std::ceil(xmax / xstep) * xstep;
    ymin = std::floor(ymin / ystep) * ystep;
    ymax = std::ceil(ymax / ystep) * ystep;

    const double left = 70.0;
    const double right = 20.0;
    const double top = 40.0;
    const double bottom = 55.0;
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

    std::string out;
    out += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
        "viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"12\">\n",
        width, height, width, height);
    out += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", width, height);
    out += fmt::format("<text x=\"{:.1f}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                       left + pw / 2, xml_escape(title));

    for (double t = xmin; t <= xmax + 0.5 * xstep; t += xstep) {
        const double px = sx(t);
        out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" "
                           "stroke=\"#e0e0e0\"/>\n",
                           px, top, top + ph);
        out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", px,
                           top + ph + 18, tick_label(t, xstep));
    }
    for (double t = ymin; t <= ymax + 0.5 * ystep; t += ystep) {
        const double py = sy(t);
        out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" "
                           "stroke=\"#e0e0e0\"/>\n",
                           left, py, left + pw);
        out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n",
                           left - 6, py + 4, tick_label(t, ystep));
    }
    out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" "
                       "fill=\"none\" stroke=\"black\"/>\n",
                       left, top, pw, ph);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                       left + pw / 2, static_cast<double>(height) - 12, xml_escape(x_label));
    out += fmt::format("<text x=\"16\" y=\"{0:.2f}\" text-anchor=\"middle\" "
                       "transform=\"rotate(-90 16 {0:.2f})\">{1}</text>\n",
                       top + ph / 2, xml_escape(y_label));

    for (double m : vertical_markers) {
        if (m >= xmin && m <= xmax) {
            out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" "
                               "stroke=\"red\" stroke-dasharray=\"6,4\"/>\n",
                               sx(m), top, top + ph);
        }
    }

    for (std::size_t k = 0; k < series.size(); ++k) {
        const Series& s = series[k];
        const std::size_t n = std::min(s.x.size(), s.y.size());
        const std::size_t stride = std::max<std::size_t>(1, n / kMaxPoints);
        std::string pts;
        for (std::size_t i = 0; i < n; i += stride) {
            const std::size_t j = (i + stride >= n) ? n - 1 : i;
            if (!std::isfinite(s.x[j]) || !std::isfinite(s.y[j])) {
                continue;
            }
            pts += fmt::format("{:.2f},{:.2f} ", sx(s.x[j]), sy(std::clamp(s.y[j], ymin, ymax)));
            if (j == n - 1) {
                break;
            }
        }
        const char* color = kPalette[k % std::size(kPalette)];
        out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.6\"{} points=\"{}\"/>\n",
                           color, s.dashed ? " stroke-dasharray=\"5,3\"" : "", pts);
        const double ly = top + 14.0 + 16.0 * static_cast<double>(k);
        out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
                           "stroke=\"{}\" stroke-width=\"2\"{}/>\n",
                           left + pw - 150, ly, left + pw - 125, ly, color,
                           s.dashed ? " stroke-dasharray=\"5,3\"" : "");
        out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", left + pw - 120, ly + 4,
                           xml_escape(s.label));
    }
    out += "</svg>\n";
    return out;
}

void LinePlot::write_file(const std::string& path) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << render();
}

}  // namespace abw::report
