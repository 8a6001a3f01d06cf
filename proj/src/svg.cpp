#include "gradrel/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace gradrel {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_line_chart(const LineChartSpec& spec) {
    const double ml = 60, mr = 20, mt = 40, mb = 50;
    const double pw = spec.width - ml - mr;
    const double ph = spec.height - mt - mb;

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : spec.series) {
        for (const auto& [x, y] : s.points) {
            if (first) {
                xmin = xmax = x;
                ymin = ymax = y;
                first = false;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        }
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    // pad the y range slightly so curves do not hug the frame
    const double ypad = (ymax - ymin) * 0.08;
    ymin -= ypad;
    ymax += ypad;

    auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto Y = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
       << spec.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << spec.width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
       << escape(spec.title) << "</text>\n";

    // axes with 5 ticks each
    os << "<g stroke=\"#333\" fill=\"none\"><path d=\"M" << ml << " " << mt << " V" << mt + ph
       << " H" << ml + pw << "\"/></g>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        const double fy = ymin + (ymax - ymin) * i / 4.0;
        os << "<text x=\"" << fmt(X(fx)) << "\" y=\"" << mt + ph + 16
           << "\" text-anchor=\"middle\">" << fmt(fx) << "</text>\n";
        os << "<text x=\"" << ml - 6 << "\" y=\"" << fmt(Y(fy) + 4)
           << "\" text-anchor=\"end\">" << fmt(fy) << "</text>\n";
        os << "<line x1=\"" << ml << "\" x2=\"" << ml + pw << "\" y1=\"" << fmt(Y(fy))
           << "\" y2=\"" << fmt(Y(fy)) << "\" stroke=\"#ddd\"/>\n";
    }
    os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << spec.height - 10
       << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
    os << "<text x=\"14\" y=\"" << mt + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
       << mt + ph / 2 << ")\">" << escape(spec.y_label) << "</text>\n";

    double legend_y = mt + 4;
    for (const auto& s : spec.series) {
        if (s.points.empty()) continue;
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
        if (s.dashed) os << " stroke-dasharray=\"6 4\"";
        os << " points=\"";
        for (const auto& [x, y] : s.points) os << fmt(X(x)) << "," << fmt(Y(y)) << " ";
        os << "\"/>\n";
        if (!s.dashed) {
            for (const auto& [x, y] : s.points) {
                os << "<circle cx=\"" << fmt(X(x)) << "\" cy=\"" << fmt(Y(y))
                   << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
            }
        }
        os << "<line x1=\"" << ml + pw - 110 << "\" x2=\"" << ml + pw - 86 << "\" y1=\""
           << legend_y << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color << "\"";
        if (s.dashed) os << " stroke-dasharray=\"6 4\"";
        os << "/>\n<text x=\"" << ml + pw - 80 << "\" y=\"" << legend_y + 4 << "\">"
           << escape(s.label) << "</text>\n";
        legend_y += 16;
    }
    os << "</svg>\n";
    return os.str();
}

std::string render_heatmap(const HeatmapSpec& spec) {
    const std::size_t rows = spec.values.size();
    const std::size_t cols = rows == 0 ? 0 : spec.values[0].size();
    const int cs = spec.cell_size;
    const int ml = 70, mt = 60;
    const int width = ml + static_cast<int>(cols) * cs + 20;
    const int height = mt + static_cast<int>(rows) * cs + 20;

    double vmax = 0.0;
    for (const auto& row : spec.values) {
        for (double v : row) vmax = std::max(vmax, std::abs(v));
    }
    if (vmax == 0.0) vmax = 1.0;

    auto color = [&](double v) {
        char buf[16];
        if (spec.diverging) {
            const double t = std::min(std::abs(v) / vmax, 1.0);
            const int other = static_cast<int>(255 - 175 * t);
            if (v >= 0) {
                std::snprintf(buf, sizeof(buf), "#%02xff%02x", other, other);  // green
            } else {
                std::snprintf(buf, sizeof(buf), "#ff%02x%02x", other, other);  // red
            }
        } else {
            const double t = std::min(std::max(v, 0.0) / vmax, 1.0);
            const int c = static_cast<int>(255 - 205 * t);
            std::snprintf(buf, sizeof(buf), "#%02x%02xff", c, c);  // blue scale
        }
        return std::string(buf);
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
       << escape(spec.title) << "</text>\n";
    for (std::size_t j = 0; j < cols; ++j) {
        os << "<text x=\"" << ml + static_cast<int>(j) * cs + cs / 2 << "\" y=\"" << mt - 8
           << "\" text-anchor=\"middle\">"
           << escape(j < spec.col_labels.size() ? spec.col_labels[j] : "") << "</text>\n";
    }
    for (std::size_t i = 0; i < rows; ++i) {
        os << "<text x=\"" << ml - 8 << "\" y=\"" << mt + static_cast<int>(i) * cs + cs / 2 + 4
           << "\" text-anchor=\"end\">"
           << escape(i < spec.row_labels.size() ? spec.row_labels[i] : "") << "</text>\n";
        for (std::size_t j = 0; j < cols; ++j) {
            const double v = spec.values[i][j];
            os << "<rect x=\"" << ml + static_cast<int>(j) * cs << "\" y=\""
               << mt + static_cast<int>(i) * cs << "\" width=\"" << cs << "\" height=\"" << cs
               << "\" fill=\"" << color(v) << "\" stroke=\"#999\"/>\n";
            os << "<text x=\"" << ml + static_cast<int>(j) * cs + cs / 2 << "\" y=\""
               << mt + static_cast<int>(i) * cs + cs / 2 + 4 << "\" text-anchor=\"middle\">"
               << fmt(v) << "</text>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace gradrel
