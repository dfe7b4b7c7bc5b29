#pragma once

#include <string>
#include <vector>

#include "swarm/nn/core.hpp"

namespace swarm::harness {

// Self-contained SVG emitters for run artifacts.
struct Series {
    std::string name;
    std::vector<double> values;
};

void svg_line_chart(const std::string& path, const std::string& title,
                    const std::vector<Series>& series);
void svg_bar_chart(const std::string& path, const std::string& title,
                   const std::vector<std::string>& labels, const std::vector<double>& values);
void svg_heatmap(const std::string& path, const std::string& title, const nn::MatrixXd& values,
                 double vmin = -1.0, double vmax = 1.0);

}  // namespace swarm::harness
