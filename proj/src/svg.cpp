#include "pstab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace pstab {

namespace {

std::string num(double v, int digits = 17) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

void line(std::string& s, const char* cls, double x1, double y1, double x2, double y2, int digits = 10) {
    s += "<line class=\"";
    s += cls;
    s += "\" x1=\"" + num(x1, digits) + "\" y1=\"" + num(y1, digits) + "\" x2=\"" + num(x2, digits) + "\" y2=\"" +
         num(y2, digits) + "\"/>\n";
}

constexpr const char* kHeader = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";

}  // namespace

std::string figure1Svg(const PlanarPair& p, const WorstCaseResult& orbit, std::size_t flowGrid) {
    const auto& samples = orbit.orbit.samples;
    if (samples.size() < 2) throw Error(ErrorKind::input, "orbit has too few samples to plot");

    double lo = 0.0, hi = 0.0;
    for (const Sample& s : samples) {
        lo = std::min({lo, s.x[0], s.x[1]});
        hi = std::max({hi, s.x[0], s.x[1]});
    }
    // Square, symmetric window so both axes share the scale.
    const double r = 1.15 * std::max(std::abs(lo), std::abs(hi));
    const double size = 600.0;
    const double scale = size / (2.0 * r);

    std::string s = kHeader;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" viewBox=\"0 0 600 600\">\n";
    s += "<style>line,polyline{vector-effect:non-scaling-stroke;fill:none}"
         ".axis{stroke:#888;stroke-width:1}.flow-a0{stroke:#1f77b4;stroke-width:1}"
         ".flow-a1{stroke:#8c564b;stroke-width:1}#orbit{stroke:#000;stroke-width:2}"
         ".switch{fill:#d62728}</style>\n";
    s += "<rect width=\"600\" height=\"600\" fill=\"#fff\"/>\n";
    s += "<g id=\"data\" transform=\"matrix(" + num(scale) + " 0 0 " + num(-scale) + " 300 300)\">\n";

    line(s, "axis", -r, 0.0, r, 0.0);
    line(s, "axis", 0.0, -r, 0.0, r);

    // Short unit-length arrows of each field on a grid, drawn where that
    // generator is active under the switching rule.
    const double h = 0.35 * (2.0 * r) / static_cast<double>(flowGrid);
    const bool a0SameSign = orbit.law.polarity == Polarity::sameSignA0;
    for (std::size_t i = 0; i < flowGrid; ++i) {
        for (std::size_t j = 0; j < flowGrid; ++j) {
            const double x = -r + (static_cast<double>(i) + 0.5) * 2.0 * r / static_cast<double>(flowGrid);
            const double y = -r + (static_cast<double>(j) + 0.5) * 2.0 * r / static_cast<double>(flowGrid);
            const bool sameSign = x * y >= 0.0;
            const bool useA0 = sameSign == a0SameSign;
            const Vector v = (useA0 ? p.a0 : p.a1) * Vector{x, y};
            const double n = norm2(v);
            if (n == 0.0) continue;
            line(s, useA0 ? "flow-a0" : "flow-a1", x, y, x + h * v[0] / n, y + h * v[1] / n);
        }
    }

    s += "<polyline id=\"orbit\" points=\"";
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (k) s += ' ';
        s += num(samples[k].x[0]) + "," + num(samples[k].x[1]);
    }
    s += "\"/>\n";

    const double radius = 4.0 / scale;
    for (const Vector& q : orbit.switchPoints) {
        s += "<circle class=\"switch\" cx=\"" + num(q[0]) + "\" cy=\"" + num(q[1]) + "\" r=\"" + num(radius, 6) +
             "\"/>\n";
    }
    s += "</g>\n</svg>\n";
    return s;
}

std::string normHistorySvg(const std::vector<std::pair<double, double>>& history, double infNorm, double supNorm) {
    if (history.size() < 2) throw Error(ErrorKind::input, "norm history has too few samples to plot");
    const double w = 800.0, h = 400.0, m = 40.0;
    const double tMax = history.back().first;
    const double yMax = 1.1 * supNorm;
    auto px = [&](double t) { return m + (w - 2.0 * m) * t / tMax; };
    auto py = [&](double v) { return h - m - (h - 2.0 * m) * v / yMax; };

    std::string s = kHeader;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"400\" viewBox=\"0 0 800 400\">\n";
    s += "<style>line,polyline{fill:none}.axis{stroke:#888}#norm{stroke:#000;stroke-width:1}"
         "#inf-line{stroke:#2ca02c;stroke-dasharray:6 4}#sup-line{stroke:#d62728;stroke-dasharray:6 4}"
         "text{font:12px sans-serif}</style>\n";
    s += "<rect width=\"800\" height=\"400\" fill=\"#fff\"/>\n";
    line(s, "axis", m, py(0.0), w - m, py(0.0));
    line(s, "axis", m, py(0.0), m, m);
    s += "<text x=\"" + num(w / 2, 6) + "\" y=\"" + num(h - 10, 6) + "\">t</text>\n";
    s += "<text x=\"4\" y=\"" + num(m - 10, 6) + "\">|y(t)|</text>\n";

    s += "<line id=\"inf-line\" data-value=\"" + num(infNorm) + "\" x1=\"" + num(m, 6) + "\" y1=\"" +
         num(py(infNorm), 10) + "\" x2=\"" + num(w - m, 6) + "\" y2=\"" + num(py(infNorm), 10) + "\"/>\n";
    s += "<line id=\"sup-line\" data-value=\"" + num(supNorm) + "\" x1=\"" + num(m, 6) + "\" y1=\"" +
         num(py(supNorm), 10) + "\" x2=\"" + num(w - m, 6) + "\" y2=\"" + num(py(supNorm), 10) + "\"/>\n";

    s += "<polyline id=\"norm\" points=\"";
    for (std::size_t k = 0; k < history.size(); ++k) {
        if (k) s += ' ';
        s += num(px(history[k].first), 10) + "," + num(py(history[k].second), 10);
    }
    s += "\"/>\n</svg>\n";
    return s;
}

}  // namespace pstab
