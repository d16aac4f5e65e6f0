// Copyright 2026 The zenogate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// Minimal static SVG line plots: axes, ticks, one polyline per series and a
/// legend. Output depends only on the plot data, element order is fixed.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace zenogate::experiments {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<PlotSeries> series;
};

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

inline std::string escape_xml(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    bool log = false;

    [[nodiscard]] double unit(double v) const {
        const double a = log ? std::log10(lo) : lo;
        const double b = log ? std::log10(hi) : hi;
        const double x = log ? std::log10(v) : v;
        return b > a ? (x - a) / (b - a) : 0.5;
    }

    [[nodiscard]] std::vector<double> ticks() const {
        std::vector<double> out;
        if (log) {
            const int first = static_cast<int>(std::floor(std::log10(lo)));
            const int last = static_cast<int>(std::ceil(std::log10(hi)));
            const bool sparse = last - first <= 2;
            for (int e = first; e <= last; ++e) {
                for (double m : {1.0, 2.0, 5.0}) {
                    if (m != 1.0 && !sparse) continue;
                    const double v = m * std::pow(10.0, e);
                    if (v >= lo * (1 - 1e-9) && v <= hi * (1 + 1e-9)) out.push_back(v);
                }
            }
        } else {
            // 1-2-5 steps, about five ticks
            const double raw = (hi - lo) / 5.0;
            const double mag = std::pow(10.0, std::floor(std::log10(raw)));
            double step = 10.0 * mag;
            for (double m : {1.0, 2.0, 5.0}) {
                if (m * mag >= raw) {
                    step = m * mag;
                    break;
                }
            }
            for (double k = std::ceil(lo / step); k * step <= hi * (1 + 1e-12); k += 1.0) {
                out.push_back(std::abs(k) < 1e-12 ? 0.0 : k * step);
            }
        }
        return out;
    }
};

inline Axis make_axis(const std::vector<PlotSeries> &series, bool use_x, bool log) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto &s : series) {
        for (double v : use_x ? s.x : s.y) {
            if (!std::isfinite(v) || (log && !(v > 0))) continue;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!std::isfinite(lo)) {
        lo = log ? 1.0 : 0.0;
        hi = log ? 10.0 : 1.0;
    }
    if (lo == hi) {
        lo = log ? lo / 2 : lo - 0.5;
        hi = log ? hi * 2 : hi + 0.5;
    }
    if (log) {
        const double pad = std::pow(hi / lo, 0.03);
        lo /= pad;
        hi *= pad;
    } else {
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    return {lo, hi, log};
}

}  // namespace detail

inline std::string render_svg(const PlotSpec &spec) {
    constexpr double kWidth = 720, kHeight = 480;
    constexpr double kLeft = 90, kRight = 200, kTop = 50, kBottom = 70;
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    static constexpr std::array<const char *, 6> kColors{"#1f77b4", "#d62728", "#2ca02c",
                                                          "#9467bd", "#ff7f0e", "#17becf"};
    using detail::svg_num;
    const auto ax = detail::make_axis(spec.series, true, spec.log_x);
    const auto ay = detail::make_axis(spec.series, false, spec.log_y);
    const auto px = [&](double x) { return kLeft + pw * ax.unit(x); };
    const auto py = [&](double y) { return kTop + ph * (1.0 - ay.unit(y)); };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg_num(kWidth) + "\" height=\"" +
         svg_num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + svg_num(kWidth) + "\" height=\"" + svg_num(kHeight) +
         "\" fill=\"white\"/>\n";
    s += "<text x=\"" + svg_num(kLeft + pw / 2) + "\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">" +
         detail::escape_xml(spec.title) + "</text>\n";
    s += "<rect x=\"" + svg_num(kLeft) + "\" y=\"" + svg_num(kTop) + "\" width=\"" + svg_num(pw) +
         "\" height=\"" + svg_num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : ax.ticks()) {
        const double x = px(t);
        s += "<line x1=\"" + svg_num(x) + "\" y1=\"" + svg_num(kTop + ph) + "\" x2=\"" + svg_num(x) +
             "\" y2=\"" + svg_num(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + svg_num(x) + "\" y=\"" + svg_num(kTop + ph + 20) +
             "\" text-anchor=\"middle\">" + detail::tick_label(t) + "</text>\n";
    }
    for (double t : ay.ticks()) {
        const double y = py(t);
        s += "<line x1=\"" + svg_num(kLeft - 5) + "\" y1=\"" + svg_num(y) + "\" x2=\"" + svg_num(kLeft) +
             "\" y2=\"" + svg_num(y) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + svg_num(kLeft - 8) + "\" y=\"" + svg_num(y + 4) +
             "\" text-anchor=\"end\">" + detail::tick_label(t) + "</text>\n";
    }
    s += "<text x=\"" + svg_num(kLeft + pw / 2) + "\" y=\"" + svg_num(kHeight - 20) +
         "\" text-anchor=\"middle\">" + detail::escape_xml(spec.x_label) + "</text>\n";
    s += "<text x=\"20\" y=\"" + svg_num(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
         svg_num(kTop + ph / 2) + ")\">" + detail::escape_xml(spec.y_label) + "</text>\n";
    for (std::size_t k = 0; k < spec.series.size(); ++k) {
        const auto &series = spec.series[k];
        const char *color = kColors[k % kColors.size()];
        std::string points;
        for (std::size_t i = 0; i < series.x.size() && i < series.y.size(); ++i) {
            if ((spec.log_x && !(series.x[i] > 0)) || (spec.log_y && !(series.y[i] > 0))) continue;
            if (!points.empty()) points += ' ';
            points += svg_num(px(series.x[i])) + "," + svg_num(py(series.y[i]));
        }
        const std::string dash = k % 2 == 1 ? "\" stroke-dasharray=\"6,4" : "";
        s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + dash +
             "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        const double ly = kTop + 10 + 20.0 * static_cast<double>(k);
        s += "<line x1=\"" + svg_num(kLeft + pw + 15) + "\" y1=\"" + svg_num(ly) + "\" x2=\"" +
             svg_num(kLeft + pw + 40) + "\" y2=\"" + svg_num(ly) + "\" stroke=\"" + color + dash +
             "\" stroke-width=\"1.5\"/>\n";
        s += "<text x=\"" + svg_num(kLeft + pw + 45) + "\" y=\"" + svg_num(ly + 4) + "\">" +
             detail::escape_xml(series.label) + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace zenogate::experiments
