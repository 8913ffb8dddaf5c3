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
#include <string>
#include <vector>

#include "sarisac/config.hpp"
#include "sarisac/sca.hpp"

namespace sarisac {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// Lower/upper-bound and tightness checks of Omega and Lambda over random points
/// with N <= 12, M <= 4, K+Q <= 6.
CheckResult check_surrogate_bounds(int samples, std::uint64_t seed, double tol = 1e-9);

/// Eigen-solved combiner against `random_vectors` random unit vectors per draw.
CheckResult check_receive_beamformer(int draws, int random_vectors, std::uint64_t seed,
                                     double quotient_slack = 1e-9, double alignment_slack = 1e-10);

/// Largest constraint residuals of one subproblem at a point, relative to the natural scale
/// of each constraint, evaluated from the bound functions rather than from the program rows.
struct SurrogateResiduals {
    double echo = 0.0;
    double noise = 0.0;
    double power = 0.0;
    double amplitude = 0.0;
    double interference = 0.0;
    double qos = 0.0;
    double max() const;
};
SurrogateResiduals surrogate_residuals(const SystemConfig& cfg, const ChannelSet& ch,
                                       const ExpansionPoint& exp, const Subproblem& sub, const RVec& x);

/// Expansion points from random feasible starts: the point must satisfy its own program
/// within `point_tol` and the solved optimum must satisfy it within `solution_tol`.
CheckResult check_subproblem_correctness(const SystemConfig& cfg, int points, std::uint64_t seed,
                                         double point_tol = 1e-7, double solution_tol = 1e-6,
                                         double solver_tolerance = 1e-8);

struct RunSummary {
    std::uint64_t seed = 0;
    int iterations = 0;
    bool converged = false;
    bool monotone = false;
    bool feasible = false;
    double worst_drop = 0.0;  // largest relative decrease between consecutive trace entries
    double first_db = 0.0;
    double final_db = 0.0;
    double seconds = 0.0;
    std::string stop_reason;
};
/// SCA runs on channels drawn from streams seed_base .. seed_base + runs - 1.
std::vector<RunSummary> sca_run_summaries(const SystemConfig& cfg, int runs, std::uint64_t seed_base,
                                          double monotone_slack = 1e-6);

}  // namespace sarisac
