//
//  svg.h
//  onsetlab
//
//  Minimal data plots written straight to SVG text.
//

#pragma once

#include "onsetlab/matrix.h"

#include <optional>
#include <string>
#include <vector>

namespace onsetlab::svg {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Square cells shaded by value in [0, 1]; row i, column j.
std::string heatmap(const std::string& title, const std::vector<std::string>& labels,
                    const FrameMatrix<double>& values);

/// One polyline per series on shared linear axes.
std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series);

struct RadarSeries {
    std::string name;
    std::vector<std::optional<double>> values;  // one per axis, in [0, 1]; missing points skip
};

std::string radar(const std::string& title, const std::vector<std::string>& axes,
                  const std::vector<RadarSeries>& series);

}  // namespace onsetlab::svg
