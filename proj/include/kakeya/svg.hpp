// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>

#include "kakeya/error.hpp"
#include "kakeya/kset.hpp"

namespace kakeya {

struct SvgStyle {
    double scale = 400.0;      // pixels per unit
    std::string fill = "#3a6ea5";
    double opacity = 0.35;
    std::string comment;       // emitted verbatim inside <!-- -->
};

namespace detail {

inline std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s(buf);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

} // namespace detail

// One polygon per parallelogram clipped to x0 <= x <= x1. The y axis points
// up; output depends only on the inputs.
inline std::string to_svg(const KSet& k, const Dyadic& x0, const Dyadic& x1, const SvgStyle& st = {}) {
    if (!(x0 < x1)) throw invalid_input("svg strip needs x0 < x1");
    double ylo = 0.0, yhi = 1.0;
    bool first = true;
    for (const auto& p : k.parallelograms())
        for (const Dyadic* x : {&x0, &x1}) {
            const double lo = p.lower_at(*x).to_double(), hi = p.upper_at(*x).to_double();
            if (first || lo < ylo) ylo = lo;
            if (first || hi > yhi) yhi = hi;
            first = false;
        }
    const double ax = x0.to_double(), bx = x1.to_double();
    const double pad = 0.02 * std::max(bx - ax, yhi - ylo);
    const double w = (bx - ax + 2 * pad) * st.scale, h = (yhi - ylo + 2 * pad) * st.scale;
    auto px = [&](double x) { return detail::fmt6((x - ax + pad) * st.scale); };
    auto py = [&](double y) { return detail::fmt6((yhi + pad - y) * st.scale); };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + detail::fmt6(w) + "\" height=\"" +
           detail::fmt6(h) + "\" viewBox=\"0 0 " + detail::fmt6(w) + " " + detail::fmt6(h) + "\">\n";
    if (!st.comment.empty()) out += "<!-- " + st.comment + " -->\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + detail::fmt6(w) + "\" height=\"" + detail::fmt6(h) +
           "\" fill=\"white\"/>\n";
    out += "<g fill=\"" + st.fill + "\" fill-opacity=\"" + detail::fmt6(st.opacity) + "\" stroke=\"black\" stroke-width=\"0.5\">\n";
    for (const auto& p : k.parallelograms()) {
        const double l0 = p.lower_at(x0).to_double(), l1 = p.lower_at(x1).to_double();
        const double u0 = p.upper_at(x0).to_double(), u1 = p.upper_at(x1).to_double();
        out += "<polygon points=\"" + px(ax) + "," + py(l0) + " " + px(bx) + "," + py(l1) + " " + px(bx) + "," +
               py(u1) + " " + px(ax) + "," + py(u0) + "\"/>\n";
    }
    out += "</g>\n</svg>\n";
    return out;
}

inline void render_svg(const KSet& k, const Dyadic& x0, const Dyadic& x1, const std::string& path,
                       const SvgStyle& st = {}) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw invalid_input("cannot write " + path);
    os << to_svg(k, x0, x1, st);
    if (!os) throw invalid_input("write failed: " + path);
}

} // namespace kakeya
