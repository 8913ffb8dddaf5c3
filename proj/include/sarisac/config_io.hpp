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

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sarisac/config.hpp"
#include "sarisac/experiment.hpp"

namespace sarisac {

/// Experiment keys from the [experiment] section; unset keys keep the per-experiment defaults.
struct ExperimentOverrides {
    std::optional<int> trials;
    std::optional<int> threads;
    std::optional<double> tolerance;
    std::optional<std::vector<Variant>> variants;
    std::optional<std::vector<double>> grid;
    std::optional<std::vector<double>> thresholds_db;
    std::optional<int> total_elements;
    std::optional<double> fixed_ratio;
    bool operator==(const ExperimentOverrides&) const = default;
};

struct ParsedConfig {
    SystemConfig system;
    ExperimentOverrides experiment;
    bool operator==(const ParsedConfig&) const = default;
};

/// Sectioned key = value text. Power keys accept a _dbm or _w suffix, SINR targets
/// gamma_db or gamma (linear). Throws ConfigError with line numbers or the full list
/// of violated invariants.
ParsedConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
ParsedConfig parse_config_file(const std::string& path);

/// Every key, in watts and linear units, so that parsing the output reproduces `cfg` exactly.
std::string emit_config(const ParsedConfig& cfg);

ExperimentSpec make_spec(ExperimentId id, const ParsedConfig& cfg);

inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) / 1000.0; }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w * 1000.0); }

}  // namespace sarisac
