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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "config.hpp"
#include "vqopt/diagnostics.hpp"
#include "vqopt/estimator.hpp"
#include "vqopt/optim.hpp"
#include "vqopt/qubo.hpp"

namespace vqopt::app {

// Objective, noise and progress metric of one experiment.
struct Problem {
    std::string experiment;
    std::shared_ptr<const Model> model;
    NoiseModel noise;
    MetricSpec metric;
};

// Reads [experiment] name, [system] and [noise]. Throws InputError naming
// the offending field.
Problem build_problem(const Config &cfg);

// Maximum cut of the four-vertex benchmark graph, as a QUBO.
QuboProblem benchmark_maxcut();
// Three-city tour with pairwise costs `weights` (w01, w02, w12).
QuboProblem benchmark_tsp(const std::vector<double> &weights, double penalty);

// Row `row` ("last" or a checkpoint id) of a checkpoints CSV.
Eigen::VectorXd read_checkpoint(const std::filesystem::path &path, const std::string &row);
// Every row of a checkpoints CSV, with its id.
std::vector<std::pair<std::size_t, Eigen::VectorXd>>
read_checkpoints(const std::filesystem::path &path);

// Initial points from [run] init, init_scale, init_fixed, init_file, init_row.
InitFn make_init(const Config &cfg, std::size_t d);

struct NamedOptimizer {
    std::string label;
    OptimizerConfig config;
};

struct RunPlan {
    Problem problem;
    std::vector<NamedOptimizer> optimizers;
    InitFn init;
    std::size_t trials = 1;
    std::size_t grid_step = 0;
    bool diagnostics = false;
    double diagnostics_h = 1e-3;
};

RunPlan build_run_plan(const Config &cfg);

struct OptimizerResult {
    std::string label;
    BatchResult batch;
};

std::vector<OptimizerResult> execute(const RunPlan &plan, std::size_t workers);

struct NoiseHistPlan {
    Problem problem;
    Eigen::VectorXd theta;
    std::vector<std::size_t> directions;
    std::size_t samples = 10000;
    std::size_t bins = 40;
    std::size_t compare_shots = 0; // 0 = no comparison run
    std::uint64_t seed = 0;
};

NoiseHistPlan build_noise_hist_plan(const Config &cfg);

struct DirectionStats {
    std::size_t direction = 0;
    std::size_t shots = 0;
    double exact = 0.0;
    double mean = 0.0;
    double std = 0.0;
    double skewness = 0.0;        // NaN when std is 0
    double excess_kurtosis = 0.0; // NaN when std is 0
};

DirectionStats describe_samples(std::size_t direction, std::size_t shots, double exact,
                                const std::vector<double> &samples);

struct NoiseHistResult {
    std::vector<std::vector<double>> samples; // per direction, main noise model
    std::vector<DirectionStats> stats;        // main model, then comparison
};

NoiseHistResult run_noise_hist(const NoiseHistPlan &plan, std::size_t workers);

struct StabilityPlan {
    StabilitySetup setup;
    std::vector<double> multipliers;
    std::size_t trials = 200;
};

StabilityPlan build_stability_plan(const Config &cfg);

} // namespace vqopt::app
