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

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "sarisac/config.hpp"

namespace sarisac {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

/// One realization of every channel in the scenario.
struct ChannelSet {
    CMat G;               // BS -> RIS reflectors, N x M
    std::vector<CVec> h;  // RIS reflectors -> user k, K vectors of length N
    CVec c;               // RIS reflectors -> target, N
    CVec d;               // target -> RIS sensors, L
};

/// Decision variables. W holds the K communication columns followed by the
/// Q radar columns; theta is the diagonal of the reflection matrix.
struct BeamformerSet {
    CMat W;      // M x (K+Q)
    CVec theta;  // N
    CVec u;      // L, unit norm
};

struct FeasibilityTolerances {
    double power_rel = 1e-6;
    double sinr_db = 0.01;
    double unit_norm = 1e-8;
};

/// Constraint residuals of the original (non-approximated) problem.
struct FeasibilityReport {
    double power_used = 0.0;
    double power_margin = 0.0;  // P_max - power_used
    std::vector<double> sinr_db;
    std::vector<double> sinr_margin_db;  // sinr_db - Gamma_k(dB)
    double max_amp = 0.0;
    bool amp_ok = false;
    bool power_ok = false;
    bool sinr_ok = false;
    bool unitnorm_ok = false;

    bool all_ok() const { return amp_ok && power_ok && sinr_ok && unitnorm_ok; }
};

/// Throws InvalidInput unless ch and bf have the dimensions cfg prescribes.
/// bf.u is only checked when check_u is set.
void check_dimensions(const SystemConfig& cfg, const ChannelSet& ch, const BeamformerSet& bf,
                      bool check_u = true);

/// SINR of user k (0-based), linear.
double user_sinr(const SystemConfig& cfg, const ChannelSet& ch, const BeamformerSet& bf, int k);

/// Post-combining echo SNR at the sensor array, linear. Requires |‖u‖ - 1| <= 1e-8.
double radar_snr(const SystemConfig& cfg, const ChannelSet& ch, const BeamformerSet& bf);

/// ‖W‖_F² + ‖ΘGW‖_F² + σ_d²‖Θ‖_F², watts.
double total_power(const SystemConfig& cfg, const ChannelSet& ch, const BeamformerSet& bf);

/// Conservative power model used inside the convex subproblem:
/// ‖W‖_F² + a_max²‖GW‖_F² + σ_d²‖Θ‖_F². Never below total_power when |θ_n| <= a_max.
double bounded_power(const SystemConfig& cfg, const ChannelSet& ch, const BeamformerSet& bf);

/// ‖cᵀΘGW‖₂², the echo signal strength before combining.
double echo_signal_power(const ChannelSet& ch, const BeamformerSet& bf);

/// ς_t²σ_d²|uᴴd|²‖cᵀΘ‖₂² + σ_r², the echo noise after combining.
double echo_noise_power(const SystemConfig& cfg, const ChannelSet& ch, const BeamformerSet& bf);

FeasibilityReport check_feasibility(const SystemConfig& cfg, const ChannelSet& ch,
                                    const BeamformerSet& bf,
                                    const FeasibilityTolerances& tol = {});

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace sarisac
