#pragma once
/// Output plumbing: number formatting, CSV tables, atomic file writes and a
/// small log-log SVG chart.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "massmeter/error.hpp"

namespace massmeter::report {

/// Shortest round-trip decimal form of x; "nan"/"inf" spelled out.
inline std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

/// Writes through a sibling temp file and renames it into place.
inline void write_atomic(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

/// Fixed-column CSV builder. Cells are written verbatim, so callers must not
/// pass text containing commas or quotes.
class Csv {
public:
    explicit Csv(std::vector<std::string> header) : columns_(header.size()) { row_strings(header); }

    Csv& cell(const std::string& s) {
        pending_.push_back(s);
        return *this;
    }
    Csv& cell(double x) { return cell(fmt(x)); }
    Csv& cell(int x) { return cell(std::to_string(x)); }

    void end_row() {
        if (pending_.size() != columns_) throw Error("csv row has wrong column count");
        row_strings(pending_);
        pending_.clear();
    }

    [[nodiscard]] std::string str() const { return out_.str(); }
    [[nodiscard]] std::size_t rows() const { return rows_; }

private:
    std::size_t columns_;
    std::size_t rows_ = 0;
    std::vector<std::string> pending_;
    std::ostringstream out_;

    void row_strings(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
        ++rows_;
    }
};

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::optional<std::pair<double, double>> line; // y = c * x^p as (p, c)
};

/// Log-log scatter chart, one colour per series, optional fitted power law.
/// Non-positive values are skipped.
inline std::string svg_loglog(const std::vector<Series>& series, const std::string& title,
                              const std::string& xlabel, const std::string& ylabel) {
    constexpr double W = 640, H = 440, L = 70, R = 20, T = 40, B = 60;
    static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0) || !(s.y[i] > 0)) continue;
            xmin = std::min(xmin, std::log10(s.x[i]));
            xmax = std::max(xmax, std::log10(s.x[i]));
            ymin = std::min(ymin, std::log10(s.y[i]));
            ymax = std::max(ymax, std::log10(s.y[i]));
        }
    if (!(xmin <= xmax)) { xmin = 0; xmax = 1; }
    if (!(ymin <= ymax)) { ymin = 0; ymax = 1; }
    xmin = std::floor(xmin * 4) / 4 - 0.05;
    xmax = std::ceil(xmax * 4) / 4 + 0.05;
    ymin = std::floor(ymin) - 0.05;
    ymax = std::ceil(ymax) + 0.05;
    auto px = [&](double lx) { return L + (lx - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double ly) { return H - B - (ly - ymin) / (ymax - ymin) * (H - T - B); };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<clipPath id=\"plot\"><rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
      << H - T - B << "\"/></clipPath>\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int d = static_cast<int>(std::ceil(ymin)); d <= static_cast<int>(std::floor(ymax)); ++d)
        o << "<text x=\"" << L - 6 << "\" y=\"" << py(d) + 4 << "\" text-anchor=\"end\">1e" << d << "</text>\n";
    for (double d = std::ceil(xmin * 4) / 4; d <= xmax; d += 0.25)
        o << "<text x=\"" << px(d) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << fmt(std::round(std::pow(10.0, d) * 1e4) / 1e4)
          << "</text>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    o << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << H / 2 << ")\">"
      << ylabel << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* c = colours[k % 6];
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0) || !(s.y[i] > 0)) continue;
            o << "<circle cx=\"" << px(std::log10(s.x[i])) << "\" cy=\"" << py(std::log10(s.y[i]))
              << "\" r=\"4\" fill=\"" << c << "\"/>\n";
        }
        if (s.line) {
            const auto [p, cst] = *s.line;
            const double y0 = std::log10(cst) + p * xmin;
            const double y1 = std::log10(cst) + p * xmax;
            o << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(y0) << "\" x2=\"" << px(xmax) << "\" y2=\"" << py(y1)
              << "\" stroke=\"" << c << "\" stroke-dasharray=\"5,3\" clip-path=\"url(#plot)\"/>\n";
        }
        o << "<text x=\"" << L + 10 << "\" y=\"" << T + 16 + 16 * static_cast<double>(k) << "\" fill=\"" << c << "\">"
          << s.name << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

} // namespace massmeter::report
