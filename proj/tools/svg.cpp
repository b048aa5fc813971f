//
//  svg.cpp
//  onsetlab
//

#include "svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace onsetlab::svg {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

const char* color(std::size_t i) {
    return kPalette[i % (sizeof kPalette / sizeof kPalette[0])];
}

// White (0) to dark blue (1).
std::string shade(double v) {
    v = std::clamp(std::isfinite(v) ? v : 0.0, 0.0, 1.0);
    const auto r = static_cast<int>(std::lround(255 - v * (255 - 8)));
    const auto g = static_cast<int>(std::lround(255 - v * (255 - 48)));
    const auto b = static_cast<int>(std::lround(255 - v * (255 - 107)));
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

void open(std::ostringstream& s, double width, double height, const std::string& title) {
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\" viewBox=\"0 0 " << num(width) << " " << num(height)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << num(width / 2) << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(title) << "</text>\n";
}

}  // namespace

std::string heatmap(const std::string& title, const std::vector<std::string>& labels,
                    const FrameMatrix<double>& values) {
    const std::size_t n = labels.size();
    const double cell = n > 16 ? 18.0 : 32.0;
    const double left = 90.0;
    const double top = 90.0;
    const double width = left + cell * static_cast<double>(n) + 70.0;
    const double height = top + cell * static_cast<double>(n) + 20.0;
    std::ostringstream s;
    open(s, width, height, title);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = top + cell * static_cast<double>(i);
        const double x = left + cell * static_cast<double>(i);
        s << "<text x=\"" << num(left - 4) << "\" y=\"" << num(y + cell * 0.65)
          << "\" text-anchor=\"end\">" << escape(labels[i]) << "</text>\n";
        s << "<text transform=\"translate(" << num(x + cell * 0.65) << "," << num(top - 4)
          << ") rotate(-60)\">" << escape(labels[i]) << "</text>\n";
        for (std::size_t j = 0; j < n; ++j) {
            const double v = values(i, j);
            s << "<rect x=\"" << num(left + cell * static_cast<double>(j)) << "\" y=\"" << num(y)
              << "\" width=\"" << num(cell) << "\" height=\"" << num(cell) << "\" fill=\""
              << shade(v) << "\"><title>" << escape(labels[i]) << " / " << escape(labels[j])
              << ": " << num(v) << "</title></rect>\n";
        }
    }
    // Legend bar.
    const double lx = left + cell * static_cast<double>(n) + 20.0;
    const double lh = cell * static_cast<double>(n);
    for (int k = 0; k < 20; ++k) {
        const double v = 1.0 - k / 19.0;
        s << "<rect x=\"" << num(lx) << "\" y=\"" << num(top + lh * k / 20.0) << "\" width=\"12\" height=\""
          << num(lh / 20.0 + 0.5) << "\" fill=\"" << shade(v) << "\"/>\n";
    }
    s << "<text x=\"" << num(lx + 16) << "\" y=\"" << num(top + 8) << "\">1</text>\n";
    s << "<text x=\"" << num(lx + 16) << "\" y=\"" << num(top + lh) << "\">0</text>\n";
    s << "</svg>\n";
    return s.str();
}

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series) {
    const double width = 520.0;
    const double height = 340.0;
    const double left = 70.0, right = 130.0, top = 35.0, bottom = 50.0;
    double xmin = INFINITY, xmax = -INFINITY, ymin = 0.0, ymax = -INFINITY;
    for (const auto& sr : series) {
        for (double v : sr.x) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (double v : sr.y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (!(xmax > xmin)) {
        xmin = std::isfinite(xmin) ? xmin - 1.0 : 0.0;
        xmax = xmin + 2.0;
    }
    if (!(ymax > ymin)) {
        ymax = ymin + 1.0;
    }
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::ostringstream s;
    open(s, width, height, title);
    s << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\""
      << num(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = xmin + (xmax - xmin) * k / 4.0;
        const double yv = ymin + (ymax - ymin) * k / 4.0;
        s << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(top + ph + 16)
          << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
        s << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">"
          << tick_label(yv) << "</text>\n";
        s << "<line x1=\"" << num(left) << "\" x2=\"" << num(left + pw) << "\" y1=\"" << num(py(yv))
          << "\" y2=\"" << num(py(yv)) << "\" stroke=\"#ddd\"/>\n";
    }
    s << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(height - 12) << "\" text-anchor=\"middle\">"
      << escape(x_label) << "</text>\n";
    s << "<text transform=\"translate(16," << num(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(y_label) << "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& sr = series[i];
        s << "<polyline fill=\"none\" stroke=\"" << color(i) << "\" stroke-width=\"2\" points=\"";
        for (std::size_t k = 0; k < std::min(sr.x.size(), sr.y.size()); ++k) {
            s << (k ? " " : "") << num(px(sr.x[k])) << "," << num(py(sr.y[k]));
        }
        s << "\"/>\n";
        for (std::size_t k = 0; k < std::min(sr.x.size(), sr.y.size()); ++k) {
            s << "<circle cx=\"" << num(px(sr.x[k])) << "\" cy=\"" << num(py(sr.y[k])) << "\" r=\"3\" fill=\""
              << color(i) << "\"/>\n";
        }
        const double ly = top + 14.0 * static_cast<double>(i) + 6.0;
        s << "<line x1=\"" << num(left + pw + 10) << "\" x2=\"" << num(left + pw + 28) << "\" y1=\"" << num(ly)
          << "\" y2=\"" << num(ly) << "\" stroke=\"" << color(i) << "\" stroke-width=\"2\"/>\n";
        s << "<text x=\"" << num(left + pw + 32) << "\" y=\"" << num(ly + 4) << "\">" << escape(sr.name)
          << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

std::string radar(const std::string& title, const std::vector<std::string>& axes,
                  const std::vector<RadarSeries>& series) {
    const double width = 460.0;
    const double height = 400.0;
    const double cx = 200.0, cy = 215.0, radius = 140.0;
    const std::size_t n = axes.size();
    auto point = [&](std::size_t k, double v) {
        const double angle = -std::numbers::pi / 2 + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        return std::pair{cx + radius * v * std::cos(angle), cy + radius * v * std::sin(angle)};
    };
    std::ostringstream s;
    open(s, width, height, title);
    for (double ring : {0.25, 0.5, 0.75, 1.0}) {
        s << "<polygon fill=\"none\" stroke=\"#ddd\" points=\"";
        for (std::size_t k = 0; k < n; ++k) {
            const auto [x, y] = point(k, ring);
            s << (k ? " " : "") << num(x) << "," << num(y);
        }
        s << "\"/>\n";
    }
    for (std::size_t k = 0; k < n; ++k) {
        const auto [x, y] = point(k, 1.0);
        const auto [tx, ty] = point(k, 1.12);
        s << "<line x1=\"" << num(cx) << "\" y1=\"" << num(cy) << "\" x2=\"" << num(x) << "\" y2=\"" << num(y)
          << "\" stroke=\"#bbb\"/>\n";
        s << "<text x=\"" << num(tx) << "\" y=\"" << num(ty + 4) << "\" text-anchor=\"middle\">"
          << escape(axes[k]) << "</text>\n";
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
        s << "<polygon fill=\"" << color(i) << "\" fill-opacity=\"0.12\" stroke=\"" << color(i)
          << "\" stroke-width=\"2\" points=\"";
        bool first = true;
        for (std::size_t k = 0; k < n && k < series[i].values.size(); ++k) {
            if (!series[i].values[k]) {
                continue;
            }
            const auto [x, y] = point(k, std::clamp(*series[i].values[k], 0.0, 1.0));
            s << (first ? "" : " ") << num(x) << "," << num(y);
            first = false;
        }
        s << "\"/>\n";
        const double ly = 40.0 + 14.0 * static_cast<double>(i);
        s << "<rect x=\"370\" y=\"" << num(ly - 8) << "\" width=\"10\" height=\"10\" fill=\"" << color(i)
          << "\"/>\n";
        s << "<text x=\"384\" y=\"" << num(ly + 1) << "\">" << escape(series[i].name) << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace onsetlab::svg
