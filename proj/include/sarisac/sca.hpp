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

#include <optional>
#include <string>
#include <vector>

#include "sarisac/conic.hpp"
#include "sarisac/core_model.hpp"
#include "sarisac/rng.hpp"
#include "sarisac/surrogate.hpp"

namespace sarisac {

enum class InitStrategy { mrt_scaled, random_phase, warm_start };
enum class InfeasiblePolicy { resample_init, fail_trial };

struct SolveOptions {
    double epsilon = 1e-3;  // threshold on |γ_r change|, linear
    int max_iters = 50;
    double solver_tolerance = 1e-8;
    InitStrategy init_strategy = InitStrategy::mrt_scaled;
    std::optional<BeamformerSet> warm_start;  // required for InitStrategy::warm_start
    InfeasiblePolicy infeasible_policy = InfeasiblePolicy::resample_init;
    int max_init_attempts = 20;

    /// epsilon and max_iters taken from cfg.
    static SolveOptions from(const SystemConfig& cfg);
    /// Throws InvalidInput unless epsilon > 0, max_iters >= 1, solver_tolerance > 0.
    void validate() const;
};

struct InitialPoint {
    BeamformerSet beamformers;
    double t0 = 0.0;
    double q0 = 1.0;
    int attempts = 0;
};

/// Feasible starting point and its echo signal/noise powers.
/// Throws InitializationFailure when no start passes check_feasibility.
InitialPoint initialize(const SystemConfig& cfg, const ChannelSet& ch, Rng& rng,
                        const SolveOptions& opts);

/// Variable map of the per-iteration subproblem. The program works in
/// normalized units: W = √P_max·W̃, θ = a_max·θ̃, t = t0·t̃, q = q0·q̃ and the
/// interference slacks of user k are scaled by slack_scale[k].
struct SubproblemLayout {
    conic::ComplexHandle W;      // column-major, M*(K+Q) entries
    conic::ComplexHandle theta;  // N entries
    int t = -1;
    int q = -1;
    std::vector<std::vector<int>> tau;    // [k][j]: real-part slack, j over the K+Q-1 columns i != k
    std::vector<std::vector<int>> varpi;  // [k][j]: imaginary-part slack
    std::vector<int> interferer;          // column index i for slot j of user k, row-major [k*(K+Q-1)+j]
    std::vector<double> slack_scale;      // per user
    int epigraph_auxiliaries = 0;
};

struct Subproblem {
    conic::ConicProgram program;
    SubproblemLayout layout;
    CVec u;                        // receive combiner the program was built for
    double objective_scale = 1.0;  // true objective t - (t0/q0) q = objective_scale · program objective
};

/// Convex subproblem around exp. u is the fixed receive combiner.
Subproblem build_subproblem(const SystemConfig& cfg, const ChannelSet& ch, const CVec& u,
                            const ExpansionPoint& exp);

/// Program variables at the expansion point with the smallest feasible slacks.
RVec encode_expansion_point(const SystemConfig& cfg, const ChannelSet& ch, const Subproblem& sub,
                            const ExpansionPoint& exp);

/// Beamformers represented by a program point.
BeamformerSet decode_beamformers(const Subproblem& sub, const RVec& x, const CVec& u, int M,
                                 int columns);

struct SolveResult {
    BeamformerSet beamformers;
    std::vector<double> gamma_r_trace;  // linear, initial point first
    int iterations = 0;
    bool converged = false;
    FeasibilityReport feasibility;
    std::vector<double> subproblem_times;  // seconds
    std::vector<int> solver_iterations;
    std::vector<double> surrogate_trace;   // subproblem optimum, true units
    std::string stop_reason;
    int init_attempts = 0;
};

/// Successive convex approximation of the echo SNR maximization.
SolveResult run(const SystemConfig& cfg, const ChannelSet& ch, Rng& rng, const SolveOptions& opts);

/// ExpansionPoint of a beamformer set with t0, q0 at their true values.
ExpansionPoint expansion_point(const SystemConfig& cfg, const ChannelSet& ch, const BeamformerSet& bf);

}  // namespace sarisac
