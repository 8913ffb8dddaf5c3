// SPDX-License-Identifier: Apache-2.0
//
// sarisac: beamforming design for ISAC with a sensor-aided active RIS
// Copyright (C) 2026 The sarisac authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Command-line entry point: solve, experiment, validate.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sarisac/channel.hpp"
#include "sarisac/config_io.hpp"
#include "sarisac/error.hpp"
#include "sarisac/experiment.hpp"
#include "sarisac/sca.hpp"
#include "sarisac/validation.hpp"

namespace fs = std::filesystem;
using namespace sarisac;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> threads;
    std::optional<double> tolerance;
    std::string out = "out";
    std::string experiment;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

ParsedConfig load(const Options& o) {
    ParsedConfig pc = o.config.empty() ? parse_config_text("", "<defaults>") : parse_config_file(o.config);
    if (o.seed) pc.system.channel_stats.seed = *o.seed;
    if (o.trials) pc.experiment.trials = *o.trials;
    if (o.threads) pc.experiment.threads = *o.threads;
    if (o.tolerance) pc.experiment.tolerance = *o.tolerance;
    if (pc.experiment.trials && *pc.experiment.trials < 1) throw ConfigError("--trials must be >= 1");
    if (pc.experiment.threads && *pc.experiment.threads < 1) throw ConfigError("--threads must be >= 1");
    if (pc.experiment.tolerance && !(*pc.experiment.tolerance > 0.0)) throw ConfigError("--tolerance must be > 0");
    return pc;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw Error("cannot write '" + p.string() + "'");
    return os;
}

void write_effective_config(const fs::path& dir, const ParsedConfig& pc) {
    auto os = open_out(dir / "effective_config.ini");
    os << emit_config(pc);
}

nlohmann::json complex_json(const CMat& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(row);
    }
    return rows;
}

int cmd_solve(const Options& o) {
    const ParsedConfig pc = load(o);
    const SystemConfig& cfg = pc.system;
    const fs::path dir(o.out);
    fs::create_directories(dir);
    write_effective_config(dir, pc);

    // same stream layout as trial 0 of an experiment
    const Rng stream = Rng(cfg.channel_stats.seed).split(0);
    Rng ch_rng = stream.split(0), sca_rng = stream.split(1);
    const ChannelSet ch = generate_channel_set(cfg, ch_rng);
    SolveOptions opts = SolveOptions::from(cfg);
    if (pc.experiment.tolerance) opts.solver_tolerance = *pc.experiment.tolerance;
    const auto start = std::chrono::steady_clock::now();
    const SolveResult res = run(cfg, ch, sca_rng, opts);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    {
        auto os = open_out(dir / "trace.csv");
        os << "iteration,gamma_r_linear,gamma_r_db\n";
        for (std::size_t i = 0; i < res.gamma_r_trace.size(); ++i)
            os << i << ',' << num(res.gamma_r_trace[i]) << ',' << num(to_db(res.gamma_r_trace[i])) << '\n';
    }
    const auto& f = res.feasibility;
    {
        nlohmann::json j;
        j["seed"] = cfg.channel_stats.seed;
        j["iterations"] = res.iterations;
        j["converged"] = res.converged;
        j["stop_reason"] = res.stop_reason;
        j["init_attempts"] = res.init_attempts;
        j["gamma_r_trace"] = res.gamma_r_trace;
        j["final_gamma_r_db"] = to_db(res.gamma_r_trace.back());
        j["power_used_w"] = f.power_used;
        j["sinr_db"] = f.sinr_db;
        j["max_amp"] = f.max_amp;
        j["feasible"] = f.all_ok();
        j["subproblem_times_s"] = res.subproblem_times;
        j["solver_iterations"] = res.solver_iterations;
        j["wall_time_s"] = elapsed;
        j["W"] = complex_json(res.beamformers.W);
        j["theta"] = complex_json(res.beamformers.theta);
        j["u"] = complex_json(res.beamformers.u);
        auto os = open_out(dir / "solution.json");
        os << j.dump(2) << '\n';
    }

    std::cout << "seed              " << cfg.channel_stats.seed << '\n'
              << "iterations        " << res.iterations << " (" << res.stop_reason << ")\n"
              << "echo SNR          " << num(to_db(res.gamma_r_trace.front())) << " dB -> "
              << num(to_db(res.gamma_r_trace.back())) << " dB\n"
              << "power             " << num(watts_to_dbm(f.power_used)) << " dBm of "
              << num(watts_to_dbm(cfg.p_max)) << " dBm\n"
              << "min SINR margin   ";
    double margin = f.sinr_margin_db.empty() ? 0.0 : f.sinr_margin_db.front();
    for (double m : f.sinr_margin_db) margin = std::min(margin, m);
    std::cout << num(margin) << " dB\n"
              << "max amplitude     " << num(f.max_amp) << " of " << num(cfg.a_max) << '\n'
              << "feasible          " << (f.all_ok() ? "yes" : "no") << '\n'
              << "time              " << num(elapsed) << " s\n"
              << "outputs           " << (dir / "trace.csv").string() << ", " << (dir / "solution.json").string()
              << '\n';
    return f.all_ok() ? kOk : kRuntimeError;
}

int cmd_experiment(const Options& o) {
    const ExperimentId id = [&] {
        try {
            return parse_experiment_id(o.experiment);
        } catch (const InvalidInput& e) {
            throw ConfigError(e.what());
        }
    }();
    const ParsedConfig pc = load(o);
    const ExperimentSpec spec = make_spec(id, pc);
    spec.validate();
    const fs::path dir(o.out);
    fs::create_directories(dir);
    write_effective_config(dir, pc);

    int last_decile = -1;
    const ProgressFn progress = [&](int done, int total) {
        const int decile = done * 10 / total;
        if (decile != last_decile) {
            last_decile = decile;
            std::cerr << "[" << to_string(id) << "] " << done << "/" << total << " trials\n";
        }
    };
    const auto start = std::chrono::steady_clock::now();
    const ExperimentResult res = run_experiment(spec, progress);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string name = to_string(id);
    {
        auto os = open_out(dir / (name + ".csv"));
        write_csv(os, res);
    }
    {
        auto os = open_out(dir / (name + "_trials.csv"));
        write_trials_csv(os, res.records);
    }
    {
        auto os = open_out(dir / (name + "_trials.jsonl"));
        write_records_jsonl(os, res.records);
    }
    int excluded = 0, converged = 0;
    for (const auto& r : res.records) {
        excluded += r.usable() ? 0 : 1;
        converged += r.converged ? 1 : 0;
    }
    {
        nlohmann::json j;
        j["experiment"] = name;
        j["master_seed"] = spec.master_seed;
        j["trials"] = spec.trials;
        j["threads"] = spec.threads;
        j["solver_tolerance"] = spec.solver_tolerance;
        j["records"] = res.records.size();
        j["excluded_records"] = excluded;
        j["converged_records"] = converged;
        j["aggregation"] = "mean_gamma_r_db averages per-trial dB values; mean_gamma_r_linear averages linear values";
        j["wall_time_s"] = elapsed;
        auto os = open_out(dir / (name + "_meta.json"));
        os << j.dump(2) << '\n';
    }

    std::cout << name << ": " << res.records.size() << " trials (" << excluded << " excluded, " << converged
              << " converged) in " << num(elapsed) << " s\n";
    for (const auto& c : res.convergence)
        std::cout << "  " << c.variant_label << ": " << num(c.mean_db.front()) << " dB -> " << num(c.mean_db.back())
                  << " dB mean over " << c.used << " trials\n";
    for (const auto& r : res.sweep)
        std::cout << "  " << r.variant_label << " @ " << num(r.value) << " (L=" << r.L << ", N=" << r.N
                  << "): " << num(r.agg.mean_db) << " dB over " << r.agg.used << " trials\n";
    for (const auto& c : res.detection)
        std::cout << "  " << c.variant_label << " ratio " << num(c.ratio) << ": Pd >= 0.9 up to "
                  << num(c.pd90_threshold_db) << " dB\n";
    std::cout << "outputs in " << dir.string() << '\n';
    return kOk;
}

int cmd_validate(const Options& o) {
    const ParsedConfig pc = load(o);
    const std::uint64_t seed = pc.system.channel_stats.seed;
    SystemConfig small = SystemConfig().with_elements(8, 4).with_users(2, 1.0);
    small.M = 2;
    small.Q = 1;
    small.max_iters = 10;

    std::vector<CheckResult> checks;
    checks.push_back(check_surrogate_bounds(2000, seed));
    checks.push_back(check_receive_beamformer(100, 200, seed + 1));
    checks.push_back(check_subproblem_correctness(small, 4, seed + 2));
    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto runs = sca_run_summaries(small, 3, seed + 3);
        CheckResult r;
        r.name = "sca monotonicity and feasibility";
        r.passed = true;
        double worst = 0.0;
        for (const auto& s : runs) {
            r.passed = r.passed && s.monotone && s.feasible;
            worst = std::max(worst, s.worst_drop);
        }
        r.detail = std::to_string(runs.size()) + " runs, worst relative drop " + num(worst);
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        checks.push_back(r);
    }
    bool ok = true;
    for (const auto& c : checks) {
        ok = ok && c.passed;
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << " [" << num(c.seconds)
                  << " s]\n";
    }
    return ok ? kOk : kRuntimeError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transmit/receive beamforming design for ISAC with a sensor-aided active RIS"};
    app.fallthrough();
    app.require_subcommand(1);
    Options o;
    app.add_option("--config", o.config, "INI configuration file (defaults when omitted)");
    app.add_option("--seed", o.seed, "master seed, overrides [channel] seed");
    app.add_option("--trials", o.trials, "Monte Carlo trials per sweep point");
    app.add_option("--out", o.out, "output directory")->capture_default_str();
    app.add_option("--threads", o.threads, "worker threads for experiments");
    app.add_option("--tolerance", o.tolerance, "conic solver tolerance");

    auto* solve = app.add_subcommand("solve", "solve one channel realization and write its trace");
    auto* exp = app.add_subcommand("experiment", "run a Monte Carlo campaign");
    exp->add_option("id", o.experiment, "convergence | ratio_sweep | detection_prob | element_sweep")->required();
    auto* val = app.add_subcommand("validate", "run property checks on small instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        if (code == 0) return kOk;
        std::cerr << '\n' << app.help();
        return kConfigError;
    }

    try {
        if (solve->parsed()) return cmd_solve(o);
        if (exp->parsed()) return cmd_experiment(o);
        if (val->parsed()) return cmd_validate(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kConfigError;
}
