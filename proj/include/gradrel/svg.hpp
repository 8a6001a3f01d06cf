#pragma once
// Minimal SVG emission for report bundles: line charts (size curves with a
// dashed baseline) and square heatmaps (agreement, delta matrices).

#include <string>
#include <vector>

namespace gradrel {

struct SvgSeries {
    std::string label;
    std::string color = "#1f77b4";
    bool dashed = false;
    std::vector<std::pair<double, double>> points;  // (x, y)
};

struct LineChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<SvgSeries> series;
    int width = 640;
    int height = 420;
};

std::string render_line_chart(const LineChartSpec& spec);

struct HeatmapSpec {
    std::string title;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<std::vector<double>> values;  // rows x cols
    // diverging palette centered at zero when true, else sequential 0..max
    bool diverging = false;
    int cell_size = 64;
};

std::string render_heatmap(const HeatmapSpec& spec);

}  // namespace gradrel
