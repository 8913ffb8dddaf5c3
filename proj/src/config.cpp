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

#include "sarisac/config.hpp"

#include <cmath>
#include <sstream>

#include "sarisac/error.hpp"

namespace sarisac {

Grid most_square_grid(int n) {
    if (n < 1) throw InvalidInput("most_square_grid: n must be >= 1");
    int f = 1;
    for (int d = 1; d * d <= n; ++d)
        if (n % d == 0) f = d;
    return Grid{n / f, f};
}

std::vector<std::string> validation_errors(const SystemConfig& cfg) {
    std::vector<std::string> errs;
    auto need = [&](bool ok, const std::string& msg) {
        if (!ok) errs.push_back(msg);
    };
    auto positive_finite = [](double v) { return std::isfinite(v) && v > 0.0; };

    need(cfg.M >= 1, "M must be >= 1");
    need(cfg.N >= 1, "N must be >= 1");
    need(cfg.L >= 1, "L must be >= 1");
    need(cfg.K >= 1, "K must be >= 1");
    need(cfg.Q >= 1, "Q must be >= 1");
    need(positive_finite(cfg.p_max), "P_max must be > 0");
    need(std::isfinite(cfg.a_max) && cfg.a_max >= 1.0, "a_max must be >= 1");
    need(std::isfinite(cfg.sigma_d2) && cfg.sigma_d2 >= 0.0, "sigma_d2 must be >= 0");
    need(positive_finite(cfg.sigma_r2), "sigma_r2 must be > 0");
    need(positive_finite(cfg.varsigma_t2), "varsigma_t2 must be > 0");
    need(cfg.epsilon > 0.0, "epsilon must be > 0");
    need(cfg.max_iters >= 1, "max_iters must be >= 1");

    if (static_cast<int>(cfg.gamma.size()) != cfg.K) {
        errs.push_back("gamma must have K entries");
    } else {
        for (double g : cfg.gamma) need(positive_finite(g), "every Gamma_k must be > 0");
    }
    if (static_cast<int>(cfg.sigma_k2.size()) != cfg.K) {
        errs.push_back("sigma_k2 must have K entries");
    } else {
        for (double s : cfg.sigma_k2) need(positive_finite(s), "every sigma_k2 must be > 0");
    }

    const auto& g = cfg.geometry;
    need(g.reflector_grid.rows >= 1 && g.reflector_grid.cols >= 1, "reflector grid must be nonempty");
    need(g.sensor_grid.rows >= 1 && g.sensor_grid.cols >= 1, "sensor grid must be nonempty");
    need(g.reflector_grid.size() == cfg.N, "reflector grid rows*cols must equal N");
    need(g.sensor_grid.size() == cfg.L, "sensor grid rows*cols must equal L");
    need(positive_finite(g.user_radius), "user radius must be > 0");
    need(positive_finite(g.target_range), "target range must be > 0");
    need(positive_finite(g.element_spacing), "element spacing must be > 0");

    const auto& s = cfg.channel_stats;
    need(std::isfinite(s.rician_k_db), "Rician K must be finite");
    need(positive_finite(s.pathloss_exponent_nlos), "NLoS path-loss exponent must be > 0");
    need(positive_finite(s.pathloss_exponent_los), "LoS path-loss exponent must be > 0");
    need(std::isfinite(s.ref_pathloss_db), "reference path loss must be finite");
    return errs;
}

void SystemConfig::validate() const {
    const auto errs = validation_errors(*this);
    if (errs.empty()) return;
    std::ostringstream os;
    os << "invalid configuration:";
    for (const auto& e : errs) os << "\n  - " << e;
    throw ConfigError(os.str());
}

SystemConfig SystemConfig::with_elements(int n_reflect, int n_sensor) const {
    SystemConfig out = *this;
    out.N = n_reflect;
    out.L = n_sensor;
    out.geometry.reflector_grid = most_square_grid(n_reflect);
    out.geometry.sensor_grid = most_square_grid(n_sensor);
    return out;
}

SystemConfig SystemConfig::with_users(int k, double gamma_linear) const {
    SystemConfig out = *this;
    const double noise = sigma_k2.empty() ? 1e-10 : sigma_k2.front();
    out.K = k;
    out.gamma.assign(k, gamma_linear);
    out.sigma_k2.assign(k, noise);
    return out;
}

}  // namespace sarisac
