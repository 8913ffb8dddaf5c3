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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace sarisac {

using Vec3 = std::array<double, 3>;

/// Uniform planar array layout, rows x cols elements.
struct Grid {
    int rows = 1;
    int cols = 1;

    int size() const { return rows * cols; }
    bool operator==(const Grid&) const = default;
};

/// Most-square factorization of n: cols is the largest divisor of n not above sqrt(n).
Grid most_square_grid(int n);

struct GeometryConfig {
    Vec3 bs_pos{0.0, 0.0, 2.5};
    Vec3 ris_pos{20.0, 0.0, 2.5};
    Vec3 user_center{20.0, 5.0, 0.0};
    double user_radius = 4.0;
    double target_range = 10.0;
    double target_azimuth_deg = -30.0;
    double target_elevation_deg = 40.0;
    Grid reflector_grid{8, 5};
    Grid sensor_grid{6, 4};
    double element_spacing = 0.5;  // wavelengths

    bool operator==(const GeometryConfig&) const = default;
};

struct ChannelStatsConfig {
    double rician_k_db = 3.0;
    double pathloss_exponent_nlos = 2.2;
    double pathloss_exponent_los = 2.0;
    double ref_pathloss_db = -30.0;  // at 1 m
    std::uint64_t seed = 1;

    bool operator==(const ChannelStatsConfig&) const = default;
};

/// Scenario parameters. Every quantity is linear scale (watts, ratios); dB
/// conversions happen only at the configuration-file boundary.
struct SystemConfig {
    int M = 4;   // BS antennas
    int N = 40;  // reflecting elements
    int L = 24;  // RIS sensors
    int K = 4;   // users
    int Q = 4;   // radar waveforms

    double p_max = 10.0;                            // W (40 dBm)
    std::vector<double> gamma{10.0, 10.0, 10.0, 10.0};  // per-user SINR thresholds
    double a_max = 8.0;
    double sigma_d2 = 1e-10;                        // RIS dynamic noise (-70 dBm)
    double sigma_r2 = 1e-10;                        // sensor noise
    std::vector<double> sigma_k2{1e-10, 1e-10, 1e-10, 1e-10};  // user noise
    double varsigma_t2 = 0.8;                       // mean-square RCS, m^2
    double epsilon = 1e-3;
    int max_iters = 50;

    GeometryConfig geometry;
    ChannelStatsConfig channel_stats;

    int columns() const { return K + Q; }

    /// Throws ConfigError listing every violated invariant.
    void validate() const;

    /// Copy with N, L and both RIS grids replaced (grids most-square).
    SystemConfig with_elements(int n_reflect, int n_sensor) const;

    /// Copy with K users, thresholds and noise resized uniformly.
    SystemConfig with_users(int k, double gamma_linear) const;

    bool operator==(const SystemConfig&) const = default;
};

/// Every validation failure of cfg; empty if valid.
std::vector<std::string> validation_errors(const SystemConfig& cfg);

}  // namespace sarisac
