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


#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "vqopt/optim.hpp"

namespace vqopt::app {

struct PlotSeries {
    std::string label;
    std::vector<SummaryRow> rows;
};

// Parses the output of write_summary_csv.
std::vector<SummaryRow> read_summary_csv(std::istream &in);

// Static line plot: one mean line and min-max band per series, x = partial
// evaluations. Output depends only on the arguments.
void write_svg_plot(std::ostream &out, const std::string &y_label,
                    const std::vector<PlotSeries> &series);

struct Histogram {
    std::string title;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::size_t> counts;
};

Histogram make_histogram(std::string title, const std::vector<double> &samples,
                         std::size_t bins);

// Grid of bar charts, four per row.
void write_svg_histograms(std::ostream &out, const std::vector<Histogram> &hists);

} // namespace vqopt::app
