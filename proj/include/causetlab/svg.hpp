#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace causetlab::svg {

// Minimal deterministic line-plot writer. Coordinates are emitted with fixed
// precision so identical data yields identical bytes.
struct Series {
    std::string label;
    std::string color = "#1f77b4";
    bool dashed = false;
    std::vector<double> x, y;
    std::vector<double> y_lo, y_hi; // optional error bars
};

class Plot {
  public:
    Plot(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add(Series s) { series_.push_back(std::move(s)); }
    void log_x() { log_x_ = true; }
    void log_y() { log_y_ = true; }
    void timestamp_comment(std::string ts) { timestamp_ = std::move(ts); }

    std::string render() const {
        constexpr double W = 720, H = 480, L = 70, R = 20, T = 40, B = 55;
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        auto tx = [&](double x) { return log_x_ ? std::log10(x) : x; };
        auto ty = [&](double y) { return log_y_ ? std::log10(std::max(y, 1e-300)) : y; };
        for (const auto& s : series_)
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                xmin = std::min(xmin, tx(s.x[i]));
                xmax = std::max(xmax, tx(s.x[i]));
                const double lo = s.y_lo.size() == s.y.size() ? s.y_lo[i] : s.y[i];
                const double hi = s.y_hi.size() == s.y.size() ? s.y_hi[i] : s.y[i];
                ymin = std::min(ymin, std::min(ty(lo), ty(s.y[i])));
                ymax = std::max(ymax, std::max(ty(hi), ty(s.y[i])));
            }
        if (xmin > xmax) { xmin = 0; xmax = 1; }
        if (ymin > ymax) { ymin = 0; ymax = 1; }
        if (xmax - xmin < 1e-12) { xmin -= 0.5; xmax += 0.5; }
        if (ymax - ymin < 1e-12) { ymin -= 0.5; ymax += 0.5; }
        const double xpad = 0.04 * (xmax - xmin), ypad = 0.06 * (ymax - ymin);
        xmin -= xpad; xmax += xpad; ymin -= ypad; ymax += ypad;
        auto px = [&](double x) { return L + (tx(x) - xmin) / (xmax - xmin) * (W - L - R); };
        auto py = [&](double y) { return H - B - (ty(y) - ymin) / (ymax - ymin) * (H - T - B); };
        auto fmt = [](double v) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.2f", v);
            return std::string(buf);
        };

        std::string out;
        out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
               "viewBox=\"0 0 720 480\">\n";
        if (!timestamp_.empty()) out += "<!-- generated " + timestamp_ + " -->\n";
        out += "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n";
        out += "<text x=\"360\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
               "font-family=\"sans-serif\">" + title_ + "</text>\n";

        // axes and ticks
        out += "<line x1=\"" + fmt(L) + "\" y1=\"" + fmt(H - B) + "\" x2=\"" + fmt(W - R) +
               "\" y2=\"" + fmt(H - B) + "\" stroke=\"black\"/>\n";
        out += "<line x1=\"" + fmt(L) + "\" y1=\"" + fmt(T) + "\" x2=\"" + fmt(L) + "\" y2=\"" +
               fmt(H - B) + "\" stroke=\"black\"/>\n";
        for (int t = 0; t <= 5; ++t) {
            const double fx = xmin + (xmax - xmin) * t / 5.0;
            const double fy = ymin + (ymax - ymin) * t / 5.0;
            const double sx = L + (W - L - R) * t / 5.0;
            const double sy = H - B - (H - T - B) * t / 5.0;
            char lab[48];
            std::snprintf(lab, sizeof(lab), log_x_ ? "1e%.1f" : "%.3g", fx);
            out += "<line x1=\"" + fmt(sx) + "\" y1=\"" + fmt(H - B) + "\" x2=\"" + fmt(sx) +
                   "\" y2=\"" + fmt(H - B + 5) + "\" stroke=\"black\"/>\n";
            out += "<text x=\"" + fmt(sx) + "\" y=\"" + fmt(H - B + 18) +
                   "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" +
                   lab + "</text>\n";
            std::snprintf(lab, sizeof(lab), log_y_ ? "1e%.1f" : "%.3g", fy);
            out += "<line x1=\"" + fmt(L - 5) + "\" y1=\"" + fmt(sy) + "\" x2=\"" + fmt(L) +
                   "\" y2=\"" + fmt(sy) + "\" stroke=\"black\"/>\n";
            out += "<text x=\"" + fmt(L - 8) + "\" y=\"" + fmt(sy + 4) +
                   "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" + lab +
                   "</text>\n";
        }
        out += "<text x=\"" + fmt((L + W - R) / 2) + "\" y=\"" + fmt(H - 12) +
               "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" +
               x_label_ + "</text>\n";
        out += "<text x=\"16\" y=\"" + fmt((T + H - B) / 2) +
               "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
               "transform=\"rotate(-90 16 " + fmt((T + H - B) / 2) + ")\">" + y_label_ +
               "</text>\n";

        double legend_y = T + 8;
        for (const auto& s : series_) {
            std::string pts;
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                pts += fmt(px(s.x[i])) + "," + fmt(py(s.y[i]));
                if (i + 1 < s.x.size()) pts += " ";
            }
            out += "<polyline fill=\"none\" stroke=\"" + s.color + "\"" +
                   (s.dashed ? " stroke-dasharray=\"6,4\"" : "") +
                   " stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                out += "<circle cx=\"" + fmt(px(s.x[i])) + "\" cy=\"" + fmt(py(s.y[i])) +
                       "\" r=\"2.5\" fill=\"" + s.color + "\"/>\n";
                if (s.y_lo.size() == s.y.size() && s.y_hi.size() == s.y.size()) {
                    out += "<line x1=\"" + fmt(px(s.x[i])) + "\" y1=\"" + fmt(py(s.y_lo[i])) +
                           "\" x2=\"" + fmt(px(s.x[i])) + "\" y2=\"" + fmt(py(s.y_hi[i])) +
                           "\" stroke=\"" + s.color + "\"/>\n";
                }
            }
            out += "<line x1=\"" + fmt(W - R - 150) + "\" y1=\"" + fmt(legend_y) + "\" x2=\"" +
                   fmt(W - R - 130) + "\" y2=\"" + fmt(legend_y) + "\" stroke=\"" + s.color +
                   "\"" + (s.dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
            out += "<text x=\"" + fmt(W - R - 125) + "\" y=\"" + fmt(legend_y + 4) +
                   "\" font-size=\"11\" font-family=\"sans-serif\">" + s.label + "</text>\n";
            legend_y += 16;
        }
        out += "</svg>\n";
        return out;
    }

  private:
    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
    bool log_x_ = false, log_y_ = false;
    std::string timestamp_;
};

} // namespace causetlab::svg
