// Copyright 2026 The vqopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "vqopt/errors.hpp"
#include "vqopt/pauli.hpp"

namespace vqopt::app {

namespace {

constexpr const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Frame {
    double x0, x1, y0, y1;    // data range
    double left, top, w, h;   // pixel box
    double px(double x) const { return left + (x - x0) / (x1 - x0) * w; }
    double py(double y) const { return top + h - (y - y0) / (y1 - y0) * h; }
};

void axes(std::ostream &out, const Frame &f, const std::string &x_label,
          const std::string &y_label) {
    out << "<rect x=\"" << num(f.left) << "\" y=\"" << num(f.top) << "\" width=\"" << num(f.w)
        << "\" height=\"" << num(f.h) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = f.x0 + (f.x1 - f.x0) * k / 4.0;
        const double yv = f.y0 + (f.y1 - f.y0) * k / 4.0;
        out << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << num(f.top + f.h + 16)
            << "\" font-size=\"11\" text-anchor=\"middle\">" << tick(xv) << "</text>\n";
        out << "<text x=\"" << num(f.left - 6) << "\" y=\"" << num(f.py(yv) + 4)
            << "\" font-size=\"11\" text-anchor=\"end\">" << tick(yv) << "</text>\n";
    }
    if (!x_label.empty()) {
        out << "<text x=\"" << num(f.left + f.w / 2) << "\" y=\"" << num(f.top + f.h + 34)
            << "\" font-size=\"12\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
    }
    if (!y_label.empty()) {
        out << "<text x=\"14\" y=\"" << num(f.top + f.h / 2)
            << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
            << num(f.top + f.h / 2) << ")\">" << escape(y_label) << "</text>\n";
    }
}

} // namespace

std::vector<SummaryRow> read_summary_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line != "partial_evals,mean,min,max,trials") {
        throw InputError("summary CSV must start with partial_evals,mean,min,max,trials");
    }
    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream cells(line);
        std::string c[5];
        for (auto &cell : c) {
            std::getline(cells, cell, ',');
        }
        SummaryRow r;
        r.evals = parse_real(c[0]);
        r.mean = parse_real(c[1]);
        r.min = parse_real(c[2]);
        r.max = parse_real(c[3]);
        r.count = static_cast<std::size_t>(std::stoul(c[4]));
        rows.push_back(r);
    }
    return rows;
}

void write_svg_plot(std::ostream &out, const std::string &y_label,
                    const std::vector<PlotSeries> &series) {
    Frame f{0.0, 1.0, 0.0, 1.0, 70.0, 20.0, 560.0, 320.0};
    bool any = false;
    for (const auto &s : series) {
        for (const auto &r : s.rows) {
            if (r.count == 0 || !std::isfinite(r.min) || !std::isfinite(r.max)) {
                continue;
            }
            if (!any) {
                f.x0 = f.x1 = r.evals;
                f.y0 = r.min;
                f.y1 = r.max;
                any = true;
            }
            f.x0 = std::min(f.x0, r.evals);
            f.x1 = std::max(f.x1, r.evals);
            f.y0 = std::min(f.y0, r.min);
            f.y1 = std::max(f.y1, r.max);
        }
    }
    if (f.x1 <= f.x0) {
        f.x1 = f.x0 + 1.0;
    }
    if (f.y1 <= f.y0) {
        f.y0 -= 0.5;
        f.y1 += 0.5;
    }
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"660\" height=\"400\" "
           "font-family=\"sans-serif\">\n"
        << "<rect width=\"660\" height=\"400\" fill=\"white\"/>\n";
    axes(out, f, "partial derivative evaluations", y_label);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char *color = kPalette[k % std::size(kPalette)];
        std::vector<const SummaryRow *> rows;
        for (const auto &r : series[k].rows) {
            if (r.count > 0 && std::isfinite(r.min) && std::isfinite(r.max)) {
                rows.push_back(&r);
            }
        }
        if (rows.empty()) {
            continue;
        }
        out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
        for (const auto *r : rows) {
            out << num(f.px(r->evals)) << ',' << num(f.py(r->max)) << ' ';
        }
        for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
            out << num(f.px((*it)->evals)) << ',' << num(f.py((*it)->min)) << ' ';
        }
        out << "\"/>\n<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (const auto *r : rows) {
            out << num(f.px(r->evals)) << ',' << num(f.py(r->mean)) << ' ';
        }
        out << "\"/>\n";
        const double ly = f.top + 14.0 + 16.0 * static_cast<double>(k);
        out << "<line x1=\"" << num(f.left + f.w - 110) << "\" y1=\"" << num(ly - 4)
            << "\" x2=\"" << num(f.left + f.w - 90) << "\" y2=\"" << num(ly - 4)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << num(f.left + f.w - 84) << "\" y=\"" << num(ly)
            << "\" font-size=\"11\">" << escape(series[k].label) << "</text>\n";
    }
    out << "</svg>\n";
}

Histogram make_histogram(std::string title, const std::vector<double> &samples,
                         std::size_t bins) {
    if (bins == 0) {
        throw InputError("histogram needs at least one bin");
    }
    Histogram h{std::move(title), 0.0, 0.0, std::vector<std::size_t>(bins, 0)};
    if (samples.empty()) {
        return h;
    }
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    h.lo = *lo;
    h.hi = *hi > *lo ? *hi : *lo + 1e-12;
    const double width = (h.hi - h.lo) / static_cast<double>(bins);
    for (double v : samples) {
        const auto b = static_cast<std::size_t>((v - h.lo) / width);
        ++h.counts[std::min(b, bins - 1)];
    }
    return h;
}

void write_svg_histograms(std::ostream &out, const std::vector<Histogram> &hists) {
    constexpr std::size_t per_row = 4;
    constexpr double cell_w = 240.0;
    constexpr double cell_h = 180.0;
    const std::size_t rows = (hists.size() + per_row - 1) / per_row;
    const double width = cell_w * static_cast<double>(std::min(hists.size(), per_row));
    const double height = cell_h * static_cast<double>(std::max<std::size_t>(rows, 1));
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
        << num(height) << "\" font-family=\"sans-serif\">\n"
        << "<rect width=\"" << num(width) << "\" height=\"" << num(height)
        << "\" fill=\"white\"/>\n";
    for (std::size_t k = 0; k < hists.size(); ++k) {
        const Histogram &h = hists[k];
        const double ox = cell_w * static_cast<double>(k % per_row);
        const double oy = cell_h * static_cast<double>(k / per_row);
        const std::size_t peak = std::max<std::size_t>(
            1, h.counts.empty() ? 1 : *std::max_element(h.counts.begin(), h.counts.end()));
        Frame f{h.lo, h.hi > h.lo ? h.hi : h.lo + 1.0, 0.0, static_cast<double>(peak),
                ox + 50.0, oy + 24.0, cell_w - 66.0, cell_h - 64.0};
        out << "<text x=\"" << num(ox + cell_w / 2) << "\" y=\"" << num(oy + 16)
            << "\" font-size=\"12\" text-anchor=\"middle\">" << escape(h.title) << "</text>\n";
        axes(out, f, "", "");
        const double bw = f.w / static_cast<double>(h.counts.size());
        for (std::size_t b = 0; b < h.counts.size(); ++b) {
            const double top = f.py(static_cast<double>(h.counts[b]));
            out << "<rect x=\"" << num(f.left + bw * static_cast<double>(b)) << "\" y=\""
                << num(top) << "\" width=\"" << num(bw) << "\" height=\""
                << num(f.top + f.h - top) << "\" fill=\"#1f77b4\"/>\n";
        }
    }
    out << "</svg>\n";
}

} // namespace vqopt::app
