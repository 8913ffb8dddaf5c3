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

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sarisac/config.hpp"
#include "sarisac/sca.hpp"

namespace sarisac {

enum class ExperimentId { convergence, ratio_sweep, detection_prob, element_sweep };
std::string to_string(ExperimentId id);
/// Throws InvalidInput on unknown names.
ExperimentId parse_experiment_id(const std::string& name);

struct Variant {
    std::string label;
    double a_max = 8.0;
    bool passive = false;  // unit amplitudes and no dynamic noise
    bool operator==(const Variant&) const = default;
};

/// cfg with the variant's amplification limit; passive also zeroes sigma_d2.
SystemConfig apply_variant(const SystemConfig& cfg, const Variant& v);

struct ElementSplit {
    int L = 0;  // sensors
    int N = 0;  // reflectors
};
/// L = ratio * total, N = total - L. Throws ConfigError unless both are positive integers.
ElementSplit split_elements(int total, double ratio);

struct ExperimentSpec {
    ExperimentId id = ExperimentId::convergence;
    SystemConfig base;
    std::vector<Variant> variants;
    std::vector<double> grid;           // ratios, or L+N totals for element_sweep
    std::vector<double> thresholds_db;  // detection_prob only
    int trials = 50;
    std::uint64_t master_seed = 1;
    int threads = 1;
    double solver_tolerance = 1e-8;
    int total_elements = 64;    // ratio_sweep and detection_prob
    double fixed_ratio = 0.375;  // element_sweep

    /// Reference defaults for the given experiment.
    static ExperimentSpec defaults(ExperimentId id, const SystemConfig& base = {});
    /// Throws ConfigError listing problems.
    void validate() const;
};

struct TrialRecord {
    int trial_index = 0;
    std::string variant_label;
    double sweep_value = 0.0;
    int L = 0;
    int N = 0;
    std::vector<double> gamma_r_trace;  // linear
    double final_gamma_r_db = 0.0;      // NaN when the trial produced no iterate
    int iterations = 0;
    bool converged = false;
    bool feasible = false;
    std::string stop_reason;
    std::string error;  // non-empty when the trial failed before iterating
    double wall_time = 0.0;

    bool usable() const { return error.empty() && feasible; }
};

struct TrialJob {
    SystemConfig cfg;
    Variant variant;
    double sweep_value = 0.0;
    int trial_index = 0;
};

using ProgressFn = std::function<void(int done, int total)>;

/// One SCA run. Channels are drawn from stream (seed, trial_index), which pairs variants.
TrialRecord run_trial(const TrialJob& job, std::uint64_t master_seed, double solver_tolerance);

/// Runs jobs on a pool of `threads` workers; output order equals job order.
std::vector<TrialRecord> run_trials(const std::vector<TrialJob>& jobs, std::uint64_t master_seed,
                                    double solver_tolerance, int threads,
                                    const ProgressFn& progress = {});

struct Aggregate {
    double mean_db = 0.0;      // mean of per-trial dB values
    double mean_linear = 0.0;  // mean of linear values
    int used = 0;
    int excluded = 0;
    int converged = 0;
};

struct ConvergenceCurve {
    std::string variant_label;
    std::vector<double> mean_db;      // per iteration, traces padded with their last value
    std::vector<double> mean_linear;
    int used = 0;
    int excluded = 0;
};

struct SweepRow {
    std::string variant_label;
    double value = 0.0;
    int L = 0;
    int N = 0;
    Aggregate agg;
};

struct DetectionCurve {
    std::string variant_label;
    double ratio = 0.0;
    std::vector<double> thresholds_db;
    std::vector<double> pd;
    double pd90_threshold_db = 0.0;  // largest threshold with Pd >= 0.9
    int used = 0;
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<TrialRecord> records;
    std::vector<ConvergenceCurve> convergence;
    std::vector<SweepRow> sweep;
    std::vector<DetectionCurve> detection;
};

ExperimentResult run_experiment(const ExperimentSpec& spec, const ProgressFn& progress = {});
ExperimentResult run_convergence(const ExperimentSpec& spec, const ProgressFn& progress = {});
ExperimentResult run_ratio_sweep(const ExperimentSpec& spec, const ProgressFn& progress = {});
ExperimentResult run_detection_prob(const ExperimentSpec& spec, const ProgressFn& progress = {});
ExperimentResult run_element_sweep(const ExperimentSpec& spec, const ProgressFn& progress = {});

Aggregate aggregate(const std::vector<TrialRecord>& records);
ConvergenceCurve convergence_curve(const std::string& label, const std::vector<TrialRecord>& records,
                                   int length);
/// Empirical fraction of values >= each threshold.
std::vector<double> detection_probability(const std::vector<double>& values_db,
                                          const std::vector<double>& thresholds_db);
/// Largest g with fraction(values >= g) >= level; -inf for empty input.
double detection_crossing(std::vector<double> values_db, double level);

struct BootstrapInterval {
    double mean_diff = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    int pairs = 0;
};
/// Percentile bootstrap of mean(a_i - b_i) over paired samples.
BootstrapInterval paired_bootstrap(const std::vector<double>& a, const std::vector<double>& b,
                                   double confidence = 0.95, int resamples = 10000,
                                   std::uint64_t seed = 1);

void write_records_jsonl(std::ostream& os, const std::vector<TrialRecord>& records);
/// Per-experiment aggregate CSV. No timing columns, so output is reproducible.
void write_csv(std::ostream& os, const ExperimentResult& result);
/// Per-trial CSV without timing columns.
void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& records);

}  // namespace sarisac
