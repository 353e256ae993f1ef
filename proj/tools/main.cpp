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


#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char **argv) {
    using namespace vqopt::app;

    CLI::App app{"vqopt: noisy gradient and coordinate descent for variational quantum circuits"};
    app.require_subcommand(1);

    RunOptions opts;
    opts.workers = std::max(1u, std::thread::hardware_concurrency());
    std::string config;
    std::string out;

    auto add_run_flags = [&](CLI::App *cmd) {
        cmd->add_option("config", config, "experiment config file")->required();
        cmd->add_option("--set", opts.overrides, "override a config field, section.key=value");
        cmd->add_option("--workers", opts.workers, "concurrent trials")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--out", out, "output directory (default $VQOPT_OUTPUT_ROOT/<name>)");
    };

    auto *run = app.add_subcommand("run", "run an experiment config");
    add_run_flags(run);

    auto *hist = app.add_subcommand("noise-hist", "sample partial-derivative estimates at a checkpoint");
    add_run_flags(hist);

    std::string problem;
    auto *qubo = app.add_subcommand("qubo", "QUBO utilities");
    qubo->require_subcommand(1);
    auto *compile = qubo->add_subcommand("compile", "print the Ising form of a QUBO problem file");
    compile->add_option("file", problem, "problem file")->required();

    std::string trace_dir;
    auto *diagnose = app.add_subcommand("diagnose", "Lipschitz constants at stored checkpoints");
    diagnose->add_option("dir", trace_dir, "trial directory holding checkpoints.csv")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }
    if (!out.empty()) {
        opts.out = out;
    }
    if (*run) {
        return cmd_run(config, opts, std::cerr, std::cerr);
    }
    if (*hist) {
        return cmd_noise_hist(config, opts, std::cerr, std::cerr);
    }
    if (*compile) {
        return cmd_qubo_compile(problem, std::cout, std::cerr);
    }
    return cmd_diagnose(trace_dir, std::cout, std::cerr);
}
