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


#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "experiment.hpp"
#include "plot.hpp"
#include "vqopt/errors.hpp"
#include "vqopt/pauli.hpp"
#include "vqopt/qubo.hpp"

namespace vqopt::app {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

std::string padded(std::size_t k, std::size_t total) {
    const std::size_t width = std::to_string(total > 0 ? total - 1 : 0).size();
    std::ostringstream s;
    s << std::setw(static_cast<int>(width)) << std::setfill('0') << k;
    return s.str();
}

std::string cell(double v) { return std::isfinite(v) ? format_real(v) : std::string(); }

// Runs `body`, translating exceptions into exit statuses.
template <typename Body> int guarded(std::ostream &err, Body &&body) {
    try {
        return body();
    } catch (const InputError &e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const ContractError &e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const CapabilityError &e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

void write_archive(const Config &cfg, const fs::path &dir) {
    fs::create_directories(dir);
    auto out = open_out(dir / "config.ini");
    cfg.write(out);
}

int run_batch(const Config &cfg, const fs::path &dir, std::size_t workers, std::ostream &log) {
    const RunPlan plan = build_run_plan(cfg);
    write_archive(cfg, dir);
    const auto results = execute(plan, workers);
    const std::string metric = plan.problem.metric.name();

    auto report = open_out(dir / "report.csv");
    report << "optimizer,trials,failed,final_mean,final_min,final_max\n";
    std::vector<PlotSeries> series;
    bool diverged = false;
    for (const auto &res : results) {
        const fs::path sub = dir / res.label;
        fs::create_directories(sub);
        std::size_t failed = 0;
        double sum = 0.0;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        std::size_t finished = 0;
        std::ofstream lips;
        if (plan.diagnostics) {
            lips = open_out(sub / "lipschitz.csv");
            lips << "trial,n,partial_evals,L,L_avg,L_max,L_over_L_avg,L_over_L_max\n";
        }
        for (std::size_t t = 0; t < res.batch.trials.size(); ++t) {
            const TrialOutcome &trial = res.batch.trials[t];
            const fs::path tdir = sub / ("trial_" + padded(t, res.batch.trials.size()));
            fs::create_directories(tdir);
            auto trace = open_out(tdir / "trace.csv");
            write_trace_csv(trace, trial.trace);
            if (!trial.trace.checkpoints.empty()) {
                auto cps = open_out(tdir / "checkpoints.csv");
                write_checkpoints_csv(cps, trial.trace);
            }
            if (trial.error) {
                ++failed;
                log << res.label << " trial " << t << " (seed " << trial.seed
                    << "): " << *trial.error << '\n';
                continue;
            }
            const double final_metric = trial.trace.rows.back().metric;
            sum += final_metric;
            lo = std::min(lo, final_metric);
            hi = std::max(hi, final_metric);
            ++finished;
            if (plan.diagnostics) {
                for (const auto &r : trial.trace.rows) {
                    if (r.lipschitz) {
                        const auto &l = *r.lipschitz;
                        lips << t << ',' << r.n << ',' << r.partial_evals << ','
                             << format_real(l.l) << ',' << format_real(l.l_avg) << ','
                             << format_real(l.l_max) << ',' << format_real(l.l / l.l_avg) << ','
                             << format_real(l.l / l.l_max) << '\n';
                    }
                }
            }
        }
        diverged = diverged || failed > 0;
        {
            auto summary = open_out(sub / "summary.csv");
            write_summary_csv(summary, res.batch.summary);
        }
        std::ifstream back(sub / "summary.csv");
        series.push_back({res.label, read_summary_csv(back)});
        const double mean = finished ? sum / static_cast<double>(finished)
                                     : std::numeric_limits<double>::quiet_NaN();
        report << res.label << ',' << res.batch.trials.size() << ',' << failed << ','
               << cell(mean) << ',' << cell(finished ? lo : mean) << ','
               << cell(finished ? hi : mean) << '\n';
        log << res.label << ": final " << metric << " mean " << (finished ? format_real(mean) : "n/a")
            << " over " << finished << " trial(s)";
        if (failed) {
            log << ", " << failed << " diverged";
        }
        log << '\n';
    }
    auto svg = open_out(dir / (metric + ".svg"));
    write_svg_plot(svg, metric, series);
    log << "wrote " << dir.string() << '\n';
    return diverged ? kExitDiverged : kExitOk;
}

int run_stability(const Config &cfg, const fs::path &dir, std::ostream &log) {
    const StabilityPlan plan = build_stability_plan(cfg);
    write_archive(cfg, dir);
    const double bound = plan.setup.learning_rate_bound();
    std::vector<double> grid;
    for (double m : plan.multipliers) {
        grid.push_back(m * bound);
    }
    const auto rows = stability_experiment(plan.setup, grid, plan.trials);
    auto out = open_out(dir / "stability.csv");
    out << "multiplier,a,floor,trials,escapes,converged,frequency,std_error\n";
    std::vector<double> freq;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto &r = rows[k];
        out << format_real(plan.multipliers[k]) << ',' << format_real(r.a) << ','
            << format_real(r.floor) << ',' << r.trials << ',' << r.escapes << ','
            << r.converged << ',' << format_real(r.frequency) << ',' << format_real(r.std_error)
            << '\n';
        freq.push_back(r.frequency);
        log << "a = " << format_real(r.a) << ": escape frequency " << format_real(r.frequency)
            << " (+/- " << format_real(r.std_error) << ")\n";
    }
    auto summary = open_out(dir / "stability_summary.csv");
    summary << "learning_rate_bound,f0_over_delta_f,spearman\n";
    std::string rho;
    try {
        rho = format_real(spearman(grid, freq));
    } catch (const DiagnosticError &) {
        rho = ""; // constant frequencies have no rank correlation
    }
    const double f0 = plan.setup.prototype.exact_cost(as_span(plan.setup.theta0));
    summary << format_real(bound) << ',' << format_real(f0 / plan.setup.delta_f) << ',' << rho
            << '\n';
    log << "learning-rate bound " << format_real(bound) << ", Spearman "
        << (rho.empty() ? "undefined" : rho) << '\n';
    return kExitOk;
}

int run_noise_hist_into(const Config &cfg, const fs::path &dir, std::size_t workers,
                        std::ostream &log) {
    const NoiseHistPlan plan = build_noise_hist_plan(cfg);
    write_archive(cfg, dir);
    const NoiseHistResult res = run_noise_hist(plan, workers);
    {
        auto out = open_out(dir / "samples.csv");
        out << "sample";
        for (std::size_t dir_i : plan.directions) {
            out << ",d" << dir_i;
        }
        out << '\n';
        for (std::size_t s = 0; s < plan.samples; ++s) {
            out << s;
            for (const auto &col : res.samples) {
                out << ',' << format_real(col[s]);
            }
            out << '\n';
        }
    }
    auto stats = open_out(dir / "stats.csv");
    stats << "direction,shots,exact,mean,std,skewness,excess_kurtosis\n";
    for (const auto &s : res.stats) {
        stats << s.direction << ',' << s.shots << ',' << format_real(s.exact) << ','
              << format_real(s.mean) << ',' << format_real(s.std) << ',' << cell(s.skewness)
              << ',' << cell(s.excess_kurtosis) << '\n';
    }
    std::vector<Histogram> hists;
    for (std::size_t k = 0; k < plan.directions.size(); ++k) {
        hists.push_back(make_histogram("direction " + std::to_string(plan.directions[k]),
                                       res.samples[k], plan.bins));
    }
    auto svg = open_out(dir / "histograms.svg");
    write_svg_histograms(svg, hists);
    log << "wrote " << plan.directions.size() << " direction(s) x " << plan.samples
        << " samples to " << dir.string() << '\n';
    return kExitOk;
}

} // namespace

Config load_config(const fs::path &path, const std::vector<std::string> &overrides) {
    Config cfg = Config::load(path);
    for (const auto &o : overrides) {
        cfg.apply_override(o);
    }
    return cfg;
}

fs::path output_dir(const Config &cfg, const std::optional<fs::path> &out) {
    if (out) {
        return *out;
    }
    const char *env = std::getenv("VQOPT_OUTPUT_ROOT");
    const fs::path root = env && *env ? fs::path(env) : fs::path("runs");
    return root / cfg.str("experiment", "output", cfg.str("experiment", "name"));
}

int cmd_run(const fs::path &config, const RunOptions &opts, std::ostream &log, std::ostream &err) {
    return guarded(err, [&] {
        const Config cfg = load_config(config, opts.overrides);
        const std::string name = cfg.str("experiment", "name");
        const fs::path dir = output_dir(cfg, opts.out);
        if (name == "noise-hist") {
            return run_noise_hist_into(cfg, dir, opts.workers, log);
        }
        if (name == "stability") {
            return run_stability(cfg, dir, log);
        }
        return run_batch(cfg, dir, opts.workers, log);
    });
}

int cmd_noise_hist(const fs::path &config, const RunOptions &opts, std::ostream &log,
                   std::ostream &err) {
    return guarded(err, [&] {
        const Config cfg = load_config(config, opts.overrides);
        return run_noise_hist_into(cfg, output_dir(cfg, opts.out), opts.workers, log);
    });
}

int cmd_qubo_compile(const fs::path &problem, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        std::ifstream in(problem);
        if (!in) {
            throw InputError("cannot read problem file " + problem.string());
        }
        write_ising_listing(out, qubo_to_ising(parse_qubo_file(in)));
        return kExitOk;
    });
}

int cmd_diagnose(const fs::path &dir, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        const fs::path cps = dir / "checkpoints.csv";
        if (!fs::exists(cps)) {
            throw InputError("no checkpoints.csv in " + dir.string());
        }
        fs::path config;
        for (fs::path p = dir;; p = p.parent_path()) {
            if (fs::exists(p / "config.ini")) {
                config = p / "config.ini";
                break;
            }
            if (p == p.parent_path() || p.empty()) {
                break;
            }
        }
        if (config.empty()) {
            throw InputError("no config.ini in " + dir.string() + " or its parents");
        }
        const Config cfg = Config::load(config);
        const Problem problem = build_problem(cfg);
        const CostFunction exact(problem.model, NoiseModel::exact(), 0);
        const double h = cfg.real("experiment", "diagnostics_h", 1e-3);
        std::vector<std::size_t> ids;
        std::vector<Eigen::VectorXd> thetas;
        for (auto &[id, theta] : read_checkpoints(cps)) {
            if (static_cast<std::size_t>(theta.size()) != exact.dim()) {
                throw InputError("checkpoint " + std::to_string(id) + " has " +
                                 std::to_string(theta.size()) + " parameters, expected " +
                                 std::to_string(exact.dim()));
            }
            ids.push_back(id);
            thetas.push_back(std::move(theta));
        }
        const auto reports = diagnose_checkpoints(exact, thetas, h);
        std::ostringstream csv;
        write_diagnostics_csv(csv, ids, reports);
        auto file = open_out(dir / "diagnostics.csv");
        file << csv.str();
        out << csv.str();
        return kExitOk;
    });
}

} // namespace vqopt::app
