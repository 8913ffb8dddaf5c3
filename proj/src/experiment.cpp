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

#include "sarisac/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "sarisac/channel.hpp"
#include "sarisac/error.hpp"

namespace sarisac {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::vector<Variant> active_only() { return {{"active_a8", 8.0, false}}; }

std::vector<TrialRecord> select(const std::vector<TrialRecord>& all, const std::string& label,
                                double value) {
    std::vector<TrialRecord> out;
    for (const auto& r : all)
        if (r.variant_label == label && r.sweep_value == value) out.push_back(r);
    return out;
}

std::vector<double> usable_db(const std::vector<TrialRecord>& records) {
    std::vector<double> out;
    for (const auto& r : records)
        if (r.usable()) out.push_back(r.final_gamma_r_db);
    return out;
}

std::vector<TrialJob> sweep_jobs(const ExperimentSpec& spec, bool by_ratio) {
    std::vector<TrialJob> jobs;
    for (const auto& v : spec.variants)
        for (double g : spec.grid) {
            const ElementSplit s = by_ratio ? split_elements(spec.total_elements, g)
                                            : split_elements(static_cast<int>(std::lround(g)), spec.fixed_ratio);
            const SystemConfig cfg = apply_variant(spec.base.with_elements(s.N, s.L), v);
            cfg.validate();
            for (int t = 0; t < spec.trials; ++t) jobs.push_back({cfg, v, g, t});
        }
    return jobs;
}

ExperimentResult sweep(const ExperimentSpec& spec, bool by_ratio, const ProgressFn& progress) {
    spec.validate();
    ExperimentResult res;
    res.spec = spec;
    res.records = run_trials(sweep_jobs(spec, by_ratio), spec.master_seed, spec.solver_tolerance,
                             spec.threads, progress);
    for (const auto& v : spec.variants)
        for (double g : spec.grid) {
            SweepRow row;
            row.variant_label = v.label;
            row.value = g;
            const ElementSplit s = by_ratio ? split_elements(spec.total_elements, g)
                                            : split_elements(static_cast<int>(std::lround(g)), spec.fixed_ratio);
            row.L = s.L;
            row.N = s.N;
            row.agg = aggregate(select(res.records, v.label, g));
            res.sweep.push_back(row);
        }
    return res;
}

}  // namespace

std::string to_string(ExperimentId id) {
    switch (id) {
        case ExperimentId::convergence: return "convergence";
        case ExperimentId::ratio_sweep: return "ratio_sweep";
        case ExperimentId::detection_prob: return "detection_prob";
        case ExperimentId::element_sweep: return "element_sweep";
    }
    return "unknown";
}

ExperimentId parse_experiment_id(const std::string& name) {
    for (auto id : {ExperimentId::convergence, ExperimentId::ratio_sweep, ExperimentId::detection_prob,
                    ExperimentId::element_sweep})
        if (to_string(id) == name) return id;
    throw InvalidInput("unknown experiment '" + name +
                       "' (expected convergence, ratio_sweep, detection_prob or element_sweep)");
}

SystemConfig apply_variant(const SystemConfig& cfg, const Variant& v) {
    SystemConfig out = cfg;
    out.a_max = v.passive ? 1.0 : v.a_max;
    if (v.passive) out.sigma_d2 = 0.0;
    return out;
}

ElementSplit split_elements(int total, double ratio) {
    const double l = ratio * total;
    const long li = std::lround(l);
    if (!(std::abs(l - static_cast<double>(li)) <= 1e-9 * std::max(1.0, std::abs(l))))
        throw ConfigError("ratio " + num(ratio) + " of " + std::to_string(total) +
                          " elements does not give an integer sensor count");
    ElementSplit s{static_cast<int>(li), total - static_cast<int>(li)};
    if (s.L < 1 || s.N < 1)
        throw ConfigError("ratio " + num(ratio) + " of " + std::to_string(total) +
                          " elements leaves no sensors or no reflectors");
    return s;
}

ExperimentSpec ExperimentSpec::defaults(ExperimentId id, const SystemConfig& base) {
    ExperimentSpec s;
    s.id = id;
    s.base = base;
    s.master_seed = base.channel_stats.seed;
    switch (id) {
        case ExperimentId::convergence:
            s.variants = {{"active_a8", 8.0, false}, {"active_a4", 4.0, false}, {"passive", 1.0, true}};
            break;
        case ExperimentId::ratio_sweep:
            s.variants = active_only();
            s.grid = {0.125, 0.25, 0.3125, 0.375, 0.5, 0.625, 0.75};
            break;
        case ExperimentId::detection_prob:
            s.variants = active_only();
            s.grid = {0.375, 0.75};
            for (int i = 0; i <= 240; ++i) s.thresholds_db.push_back(-20.0 + 0.25 * i);
            break;
        case ExperimentId::element_sweep:
            s.variants = active_only();
            s.grid = {32, 64, 96, 128};
            s.trials = 25;
            break;
    }
    return s;
}

void ExperimentSpec::validate() const {
    std::vector<std::string> errs;
    if (trials < 1) errs.push_back("trials must be >= 1");
    if (threads < 1) errs.push_back("threads must be >= 1");
    if (!(solver_tolerance > 0.0)) errs.push_back("solver tolerance must be > 0");
    if (variants.empty()) errs.push_back("at least one variant is required");
    for (const auto& v : variants) {
        if (v.label.empty()) errs.push_back("variant labels must be nonempty");
        if (!v.passive && !(v.a_max >= 1.0)) errs.push_back("variant a_max must be >= 1");
    }
    if (id != ExperimentId::convergence && grid.empty()) errs.push_back("sweep grid must be nonempty");
    if (id == ExperimentId::detection_prob) {
        if (thresholds_db.empty()) errs.push_back("detection thresholds must be nonempty");
        if (!std::is_sorted(thresholds_db.begin(), thresholds_db.end()))
            errs.push_back("detection thresholds must be sorted");
    }
    for (const auto& e : validation_errors(base)) errs.push_back(e);
    if (errs.empty()) return;
    std::ostringstream os;
    os << "invalid experiment:";
    for (const auto& e : errs) os << "\n  - " << e;
    throw ConfigError(os.str());
}

TrialRecord run_trial(const TrialJob& job, std::uint64_t master_seed, double solver_tolerance) {
    TrialRecord rec;
    rec.trial_index = job.trial_index;
    rec.variant_label = job.variant.label;
    rec.sweep_value = job.sweep_value;
    rec.L = job.cfg.L;
    rec.N = job.cfg.N;
    rec.final_gamma_r_db = kNaN;

    const auto start = std::chrono::steady_clock::now();
    const Rng stream = Rng(master_seed).split(static_cast<std::uint64_t>(job.trial_index));
    Rng ch_rng = stream.split(0);
    Rng sca_rng = stream.split(1);
    try {
        const ChannelSet ch = generate_channel_set(job.cfg, ch_rng);
        SolveOptions opts = SolveOptions::from(job.cfg);
        opts.solver_tolerance = solver_tolerance;
        const SolveResult r = run(job.cfg, ch, sca_rng, opts);
        rec.gamma_r_trace = r.gamma_r_trace;
        rec.final_gamma_r_db = to_db(r.gamma_r_trace.back());
        rec.iterations = r.iterations;
        rec.converged = r.converged;
        rec.feasible = r.feasibility.all_ok();
        rec.stop_reason = r.stop_reason;
    } catch (const Error& e) {
        rec.error = e.what();
        rec.stop_reason = "error";
    }
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

std::vector<TrialRecord> run_trials(const std::vector<TrialJob>& jobs, std::uint64_t master_seed,
                                    double solver_tolerance, int threads, const ProgressFn& progress) {
    std::vector<TrialRecord> out(jobs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<int> done{0};
    std::mutex progress_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            out[i] = run_trial(jobs[i], master_seed, solver_tolerance);
            const int d = ++done;
            if (progress) {
                std::lock_guard<std::mutex> lock(progress_mutex);
                progress(d, static_cast<int>(jobs.size()));
            }
        }
    };
    const int n = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
    if (n == 1) {
        worker();
        return out;
    }
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    pool.clear();  // joins
    return out;
}

Aggregate aggregate(const std::vector<TrialRecord>& records) {
    Aggregate a;
    double sum_db = 0.0, sum_lin = 0.0;
    for (const auto& r : records) {
        if (!r.usable()) {
            ++a.excluded;
            continue;
        }
        ++a.used;
        a.converged += r.converged ? 1 : 0;
        sum_db += r.final_gamma_r_db;
        sum_lin += r.gamma_r_trace.back();
    }
    a.mean_db = a.used > 0 ? sum_db / a.used : kNaN;
    a.mean_linear = a.used > 0 ? sum_lin / a.used : kNaN;
    return a;
}

ConvergenceCurve convergence_curve(const std::string& label, const std::vector<TrialRecord>& records,
                                   int length) {
    ConvergenceCurve c;
    c.variant_label = label;
    c.mean_db.assign(length, 0.0);
    c.mean_linear.assign(length, 0.0);
    for (const auto& r : records) {
        if (!r.usable() || r.gamma_r_trace.empty()) {
            ++c.excluded;
            continue;
        }
        ++c.used;
        for (int i = 0; i < length; ++i) {
            const double g = r.gamma_r_trace[std::min<std::size_t>(i, r.gamma_r_trace.size() - 1)];
            c.mean_db[i] += to_db(g);
            c.mean_linear[i] += g;
        }
    }
    for (int i = 0; i < length; ++i) {
        c.mean_db[i] = c.used > 0 ? c.mean_db[i] / c.used : kNaN;
        c.mean_linear[i] = c.used > 0 ? c.mean_linear[i] / c.used : kNaN;
    }
    return c;
}

std::vector<double> detection_probability(const std::vector<double>& values_db,
                                          const std::vector<double>& thresholds_db) {
    std::vector<double> pd;
    pd.reserve(thresholds_db.size());
    for (double g : thresholds_db) {
        const auto hits = std::count_if(values_db.begin(), values_db.end(), [g](double v) { return v >= g; });
        pd.push_back(values_db.empty() ? kNaN : static_cast<double>(hits) / static_cast<double>(values_db.size()));
    }
    return pd;
}

double detection_crossing(std::vector<double> values_db, double level) {
    if (values_db.empty()) return -std::numeric_limits<double>::infinity();
    std::sort(values_db.begin(), values_db.end(), std::greater<>());
    const auto n = values_db.size();
    // need at least ceil(level * n) values at or above the threshold
    auto need = static_cast<std::size_t>(std::ceil(level * static_cast<double>(n) - 1e-12));
    need = std::clamp<std::size_t>(need, 1, n);
    return values_db[need - 1];
}

ExperimentResult run_convergence(const ExperimentSpec& spec, const ProgressFn& progress) {
    spec.validate();
    ExperimentResult res;
    res.spec = spec;
    std::vector<TrialJob> jobs;
    for (const auto& v : spec.variants) {
        const SystemConfig cfg = apply_variant(spec.base, v);
        cfg.validate();
        for (int t = 0; t < spec.trials; ++t) jobs.push_back({cfg, v, 0.0, t});
    }
    res.records = run_trials(jobs, spec.master_seed, spec.solver_tolerance, spec.threads, progress);
    for (const auto& v : spec.variants)
        res.convergence.push_back(
            convergence_curve(v.label, select(res.records, v.label, 0.0), spec.base.max_iters + 1));
    return res;
}

ExperimentResult run_ratio_sweep(const ExperimentSpec& spec, const ProgressFn& progress) {
    return sweep(spec, true, progress);
}

ExperimentResult run_element_sweep(const ExperimentSpec& spec, const ProgressFn& progress) {
    return sweep(spec, false, progress);
}

ExperimentResult run_detection_prob(const ExperimentSpec& spec, const ProgressFn& progress) {
    ExperimentResult res = sweep(spec, true, progress);
    for (const auto& v : spec.variants)
        for (double g : spec.grid) {
            const auto values = usable_db(select(res.records, v.label, g));
            DetectionCurve c;
            c.variant_label = v.label;
            c.ratio = g;
            c.thresholds_db = spec.thresholds_db;
            c.pd = detection_probability(values, spec.thresholds_db);
            c.pd90_threshold_db = detection_crossing(values, 0.9);
            c.used = static_cast<int>(values.size());
            res.detection.push_back(std::move(c));
        }
    return res;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const ProgressFn& progress) {
    switch (spec.id) {
        case ExperimentId::convergence: return run_convergence(spec, progress);
        case ExperimentId::ratio_sweep: return run_ratio_sweep(spec, progress);
        case ExperimentId::detection_prob: return run_detection_prob(spec, progress);
        case ExperimentId::element_sweep: return run_element_sweep(spec, progress);
    }
    throw InvalidInput("unknown experiment id");
}

BootstrapInterval paired_bootstrap(const std::vector<double>& a, const std::vector<double>& b,
                                   double confidence, int resamples, std::uint64_t seed) {
    if (a.size() != b.size()) throw InvalidInput("paired_bootstrap: samples must have equal length");
    if (a.empty()) throw InvalidInput("paired_bootstrap: no samples");
    if (!(confidence > 0.0 && confidence < 1.0) || resamples < 1)
        throw InvalidInput("paired_bootstrap: bad confidence or resample count");
    const std::size_t n = a.size();
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = a[i] - b[i];

    BootstrapInterval out;
    out.pairs = static_cast<int>(n);
    for (double d : diff) out.mean_diff += d;
    out.mean_diff /= static_cast<double>(n);

    Rng rng(seed);
    std::vector<double> means(resamples);
    for (int r = 0; r < resamples; ++r) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += diff[static_cast<std::size_t>(rng() % n)];
        means[r] = s / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    const double alpha = 0.5 * (1.0 - confidence);
    auto quantile = [&](double p) {
        const double pos = p * (resamples - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min<std::size_t>(lo + 1, means.size() - 1);
        return means[lo] + (pos - static_cast<double>(lo)) * (means[hi] - means[lo]);
    };
    out.lower = quantile(alpha);
    out.upper = quantile(1.0 - alpha);
    return out;
}

void write_records_jsonl(std::ostream& os, const std::vector<TrialRecord>& records) {
    for (const auto& r : records) {
        nlohmann::json j;
        j["trial_index"] = r.trial_index;
        j["variant"] = r.variant_label;
        j["sweep_value"] = r.sweep_value;
        j["L"] = r.L;
        j["N"] = r.N;
        j["gamma_r_trace"] = r.gamma_r_trace;
        j["final_gamma_r_db"] = std::isnan(r.final_gamma_r_db) ? nlohmann::json(nullptr)
                                                               : nlohmann::json(r.final_gamma_r_db);
        j["iterations"] = r.iterations;
        j["converged"] = r.converged;
        j["feasible"] = r.feasible;
        j["stop_reason"] = r.stop_reason;
        if (!r.error.empty()) j["error"] = r.error;
        j["wall_time"] = r.wall_time;
        os << j.dump() << '\n';
    }
}

void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
    os << "trial,variant,sweep_value,L,N,final_gamma_r_db,iterations,converged,feasible,stop_reason\n";
    for (const auto& r : records)
        os << r.trial_index << ',' << r.variant_label << ',' << num(r.sweep_value) << ',' << r.L << ','
           << r.N << ',' << num(r.final_gamma_r_db) << ',' << r.iterations << ',' << (r.converged ? 1 : 0)
           << ',' << (r.feasible ? 1 : 0) << ',' << r.stop_reason << '\n';
}

void write_csv(std::ostream& os, const ExperimentResult& res) {
    switch (res.spec.id) {
        case ExperimentId::convergence:
            os << "variant,iteration,mean_gamma_r_db,mean_gamma_r_linear,trials_used,trials_excluded\n";
            for (const auto& c : res.convergence)
                for (std::size_t i = 0; i < c.mean_db.size(); ++i)
                    os << c.variant_label << ',' << i << ',' << num(c.mean_db[i]) << ','
                       << num(c.mean_linear[i]) << ',' << c.used << ',' << c.excluded << '\n';
            break;
        case ExperimentId::ratio_sweep:
        case ExperimentId::element_sweep: {
            const char* key = res.spec.id == ExperimentId::ratio_sweep ? "ratio" : "total_elements";
            os << "variant," << key
               << ",L,N,mean_gamma_r_db,mean_gamma_r_linear,trials_used,trials_excluded,trials_converged\n";
            for (const auto& r : res.sweep)
                os << r.variant_label << ',' << num(r.value) << ',' << r.L << ',' << r.N << ','
                   << num(r.agg.mean_db) << ',' << num(r.agg.mean_linear) << ',' << r.agg.used << ','
                   << r.agg.excluded << ',' << r.agg.converged << '\n';
            break;
        }
        case ExperimentId::detection_prob:
            os << "variant,ratio,threshold_db,pd,trials_used\n";
            for (const auto& c : res.detection)
                for (std::size_t i = 0; i < c.thresholds_db.size(); ++i)
                    os << c.variant_label << ',' << num(c.ratio) << ',' << num(c.thresholds_db[i]) << ','
                       << num(c.pd[i]) << ',' << c.used << '\n';
            break;
    }
}

}  // namespace sarisac
