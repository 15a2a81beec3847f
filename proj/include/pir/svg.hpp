#ifndef PIR_SVG_HPP
#define PIR_SVG_HPP

// Static SVG boxplot grid for a simulation run. One block of panels per
// rho_x value; panel rows are rho^2 values, panel columns p values. Inside a
// panel, boxes are grouped by n and labelled S (sample PIR from exact
// intervals), U (adjusted) and B (plain). Whiskers span min..max, the box
// spans the quartiles, the dark bar is the median and the dashed red line is
// the population PIR.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "pir/simulation.hpp"

namespace pir {

namespace detail {

inline std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string svg_escape(const std::string& s) {
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

struct SvgWriter {
    std::string body;

    void line(double x1, double y1, double x2, double y2, const std::string& style) {
        body += "<line x1=\"" + fmt2(x1) + "\" y1=\"" + fmt2(y1) + "\" x2=\"" + fmt2(x2) + "\" y2=\"" + fmt2(y2) +
                "\" " + style + "/>\n";
    }
    void rect(double x, double y, double w, double h, const std::string& style) {
        body += "<rect x=\"" + fmt2(x) + "\" y=\"" + fmt2(y) + "\" width=\"" + fmt2(w) + "\" height=\"" + fmt2(h) +
                "\" " + style + "/>\n";
    }
    void text(double x, double y, const std::string& s, const std::string& style) {
        body += "<text x=\"" + fmt2(x) + "\" y=\"" + fmt2(y) + "\" " + style + ">" + svg_escape(s) + "</text>\n";
    }
};

}  // namespace detail

struct SvgOptions {
    double panel_width = 330.0;
    double panel_height = 240.0;
};

inline std::string render_boxplot_grid(const SimulationResult& result, const SvgOptions& opt = {}) {
    const SimulationSpec& spec = result.spec;
    const auto& ps = spec.p_values;
    const auto& r2s = spec.rho2_values;
    const auto& ns = spec.n_values;

    constexpr double kMarginLeft = 48.0;
    constexpr double kMarginTop = 34.0;
    constexpr double kMarginBottom = 40.0;
    constexpr double kMarginRight = 10.0;
    constexpr double kBlockTitle = 28.0;
    const double block_height = kBlockTitle + static_cast<double>(r2s.size()) * opt.panel_height;
    const double width = static_cast<double>(ps.size()) * opt.panel_width;
    const double height = static_cast<double>(spec.rho_x_values.size()) * block_height;

    detail::SvgWriter w;
    const std::string axis = "stroke=\"#000000\" stroke-width=\"1\"";
    const std::string small = "font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\"";

    for (std::size_t b = 0; b < spec.rho_x_values.size(); ++b) {
        const double rx = spec.rho_x_values[b];
        const double block_top = static_cast<double>(b) * block_height;
        w.text(width / 2.0, block_top + 20.0, "rho_x = " + detail::fmt2(rx) + "  (S: exact-interval, U: adjusted, B: plain)",
               "font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\"");

        for (std::size_t row = 0; row < r2s.size(); ++row) {
            for (std::size_t col = 0; col < ps.size(); ++col) {
                const double ox = static_cast<double>(col) * opt.panel_width;
                const double oy = block_top + kBlockTitle + static_cast<double>(row) * opt.panel_height;
                const double plot_x = ox + kMarginLeft;
                const double plot_y = oy + kMarginTop;
                const double plot_w = opt.panel_width - kMarginLeft - kMarginRight;
                const double plot_h = opt.panel_height - kMarginTop - kMarginBottom;

                std::vector<const CellResult*> cells;
                double lo = 1e300;
                double hi = -1e300;
                for (int n : ns) {
                    const CellResult& c = result.cell(n, ps[col], r2s[row], rx);
                    cells.push_back(&c);
                    for (const BoxplotStats* s : {&c.pir_s, &c.pir_tilde, &c.pir_hat}) {
                        lo = std::min(lo, s->min);
                        hi = std::max(hi, s->max);
                    }
                    lo = std::min(lo, c.population_pir);
                    hi = std::max(hi, c.population_pir);
                }
                const double pad = 0.05 * std::max(hi - lo, 1e-6);
                lo -= pad;
                hi += pad;
                auto ymap = [&](double v) { return plot_y + plot_h * (hi - v) / (hi - lo); };

                w.text(ox + opt.panel_width / 2.0, oy + 18.0,
                       "p = " + std::to_string(ps[col]) + ", rho^2 = " + detail::fmt2(r2s[row]),
                       "font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\"");
                w.rect(plot_x, plot_y, plot_w, plot_h, "fill=\"none\" " + axis);
                for (int k = 0; k <= 4; ++k) {
                    const double v = lo + (hi - lo) * k / 4.0;
                    w.line(plot_x - 4.0, ymap(v), plot_x, ymap(v), axis);
                    w.text(plot_x - 6.0, ymap(v) + 3.0, detail::fmt2(v),
                           "font-family=\"sans-serif\" font-size=\"9\" text-anchor=\"end\"");
                }

                const double group_w = plot_w / static_cast<double>(ns.size());
                const double box_w = group_w / 4.5;
                static constexpr const char* kLabels[] = {"S", "U", "B"};
                for (std::size_t g = 0; g < cells.size(); ++g) {
                    const CellResult& c = *cells[g];
                    const BoxplotStats* stats[] = {&c.pir_s, &c.pir_tilde, &c.pir_hat};
                    const double gx = plot_x + static_cast<double>(g) * group_w;
                    for (int k = 0; k < 3; ++k) {
                        const BoxplotStats& s = *stats[k];
                        const double cx = gx + group_w * (k + 1) / 4.0;
                        w.line(cx, ymap(s.max), cx, ymap(s.q3), axis);
                        w.line(cx, ymap(s.q1), cx, ymap(s.min), axis);
                        w.line(cx - box_w / 4.0, ymap(s.max), cx + box_w / 4.0, ymap(s.max), axis);
                        w.line(cx - box_w / 4.0, ymap(s.min), cx + box_w / 4.0, ymap(s.min), axis);
                        w.rect(cx - box_w / 2.0, ymap(s.q3), box_w, std::max(ymap(s.q1) - ymap(s.q3), 0.5),
                               "fill=\"#d9d9d9\" " + axis);
                        w.line(cx - box_w / 2.0, ymap(s.median), cx + box_w / 2.0, ymap(s.median),
                               "stroke=\"#000000\" stroke-width=\"2\"");
                        w.text(cx, plot_y + plot_h + 12.0, kLabels[k], small);
                    }
                    w.text(gx + group_w / 2.0, plot_y + plot_h + 26.0, "n = " + std::to_string(c.key.n), small);
                    if (g > 0) w.line(gx, plot_y, gx, plot_y + plot_h, "stroke=\"#bbbbbb\" stroke-width=\"0.5\"");
                }
                w.line(plot_x, ymap(cells.front()->population_pir), plot_x + plot_w, ymap(cells.front()->population_pir),
                       "stroke=\"#cc0000\" stroke-width=\"1\" stroke-dasharray=\"4,3\"");
            }
        }
    }

    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + detail::fmt2(width) +
           "\" height=\"" + detail::fmt2(height) + "\" viewBox=\"0 0 " + detail::fmt2(width) + " " +
           detail::fmt2(height) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    out += w.body;
    out += "</svg>\n";
    return out;
}

}  // namespace pir

#endif  // PIR_SVG_HPP
