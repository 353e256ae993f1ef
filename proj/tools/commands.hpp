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
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace vqopt::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitDiverged = 3;

struct RunOptions {
    std::vector<std::string> overrides; // section.key=value
    std::size_t workers = 1;
    std::optional<std::filesystem::path> out;
};

// Config with overrides applied.
Config load_config(const std::filesystem::path &path, const std::vector<std::string> &overrides);

// --out, else $VQOPT_OUTPUT_ROOT (default "runs") joined with
// experiment.output (default: the experiment name).
std::filesystem::path output_dir(const Config &cfg, const std::optional<std::filesystem::path> &out);

// Each command returns a process exit status and reports errors on `err`.
int cmd_run(const std::filesystem::path &config, const RunOptions &opts, std::ostream &log,
            std::ostream &err);
int cmd_noise_hist(const std::filesystem::path &config, const RunOptions &opts,
                   std::ostream &log, std::ostream &err);
int cmd_qubo_compile(const std::filesystem::path &problem, std::ostream &out, std::ostream &err);
int cmd_diagnose(const std::filesystem::path &dir, std::ostream &out, std::ostream &err);

} // namespace vqopt::app
