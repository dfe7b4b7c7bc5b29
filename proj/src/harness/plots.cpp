#include "swarm/harness/plots.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "swarm/common.hpp"

namespace swarm::harness {

namespace {

constexpr int kW = 720, kH = 420, kPad = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::ofstream open_svg(const std::string& path, const std::string& title, int w = kW,
                       int h = kH) {
    std::ofstream out(path);
    if (!out) throw ContractError("cannot write plot: " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
        << "' viewBox='0 0 " << w << " " << h << "'>\n"
        << "<rect width='100%' height='100%' fill='white'/>\n"
        << "<text x='" << w / 2 << "' y='24' text-anchor='middle' font-size='16' "
        << "font-family='sans-serif'>" << title << "</text>\n";
    return out;
}

}  // namespace

void svg_line_chart(const std::string& path, const std::string& title,
                    const std::vector<Series>& series) {
    auto out = open_svg(path, title);
    double lo = 0.0, hi = 1.0;
    size_t n = 1;
    bool first = true;
    for (const auto& s : series)
        for (double v : s.values) {
            if (!std::isfinite(v)) continue;
            if (first) {
                lo = hi = v;
                first = false;
            }
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    for (const auto& s : series) n = std::max(n, s.values.size());
    if (hi == lo) hi = lo + 1.0;

    auto px = [&](size_t i) {
        return kPad + (kW - 2 * kPad) * static_cast<double>(i) /
                          std::max<size_t>(1, n - 1);
    };
    auto py = [&](double v) { return kH - kPad - (kH - 2 * kPad) * (v - lo) / (hi - lo); };

    out << "<line x1='" << kPad << "' y1='" << kH - kPad << "' x2='" << kW - kPad << "' y2='"
        << kH - kPad << "' stroke='black'/>\n"
        << "<line x1='" << kPad << "' y1='" << kPad << "' x2='" << kPad << "' y2='" << kH - kPad
        << "' stroke='black'/>\n";
    out << "<text x='12' y='" << py(hi) << "' font-size='11' font-family='sans-serif'>" << hi
        << "</text>\n<text x='12' y='" << py(lo) << "' font-size='11' font-family='sans-serif'>"
        << lo << "</text>\n";

    int ci = 0;
    for (const auto& s : series) {
        out << "<polyline fill='none' stroke='" << kPalette[ci % 6] << "' stroke-width='1.5' points='";
        for (size_t i = 0; i < s.values.size(); ++i) {
            if (!std::isfinite(s.values[i])) continue;
            out << px(i) << "," << py(s.values[i]) << " ";
        }
        out << "'/>\n";
        out << "<text x='" << kW - kPad + 4 << "' y='" << kPad + 16 * ci
            << "' font-size='11' fill='" << kPalette[ci % 6]
            << "' font-family='sans-serif'>" << s.name << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

void svg_bar_chart(const std::string& path, const std::string& title,
                   const std::vector<std::string>& labels, const std::vector<double>& values) {
    auto out = open_svg(path, title);
    double hi = 1.0, lo = 0.0;
    for (double v : values) {
        hi = std::max(hi, v);
        lo = std::min(lo, v);
    }
    auto py = [&](double v) { return kH - kPad - (kH - 2 * kPad) * (v - lo) / (hi - lo); };
    const double band = (kW - 2.0 * kPad) / std::max<size_t>(1, values.size());
    for (size_t i = 0; i < values.size(); ++i) {
        double x = kPad + band * i + band * 0.15;
        double y0 = py(std::max(0.0, lo));
        double y1 = py(values[i]);
        out << "<rect x='" << x << "' y='" << std::min(y0, y1) << "' width='" << band * 0.7
            << "' height='" << std::abs(y0 - y1) << "' fill='" << kPalette[i % 6] << "'/>\n";
        if (i < labels.size())
            out << "<text x='" << x + band * 0.35 << "' y='" << kH - kPad + 16
                << "' text-anchor='middle' font-size='11' font-family='sans-serif'>" << labels[i]
                << "</text>\n";
        out << "<text x='" << x + band * 0.35 << "' y='" << std::min(y0, y1) - 4
            << "' text-anchor='middle' font-size='10' font-family='sans-serif'>" << values[i]
            << "</text>\n";
    }
    out << "</svg>\n";
}

void svg_heatmap(const std::string& path, const std::string& title, const nn::MatrixXd& values,
                 double vmin, double vmax) {
    const int n = static_cast<int>(values.rows());
    const int cell = std::max(12, 320 / std::max(1, n));
    const int w = 2 * kPad + cell * n, h = 2 * kPad + cell * n;
    auto out = open_svg(path, title, w, h);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < static_cast<int>(values.cols()); ++c) {
            double v = (values(r, c) - vmin) / (vmax - vmin);
            v = std::clamp(v, 0.0, 1.0);
            // blue -> white -> red
            int red = static_cast<int>(255 * std::min(1.0, 2 * v));
            int blue = static_cast<int>(255 * std::min(1.0, 2 * (1 - v)));
            int green = static_cast<int>(255 * (1.0 - 2 * std::abs(v - 0.5)));
            out << "<rect x='" << kPad + c * cell << "' y='" << kPad + r * cell << "' width='"
                << cell << "' height='" << cell << "' fill='rgb(" << red << "," << green << ","
                << blue << ")'/>\n";
        }
    }
    out << "</svg>\n";
}

}  // namespace swarm::harness
