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

#include <string>

#include "doctest.h"
#include "sarisac/config_io.hpp"
#include "sarisac/error.hpp"

using namespace sarisac;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_config_text(text, "t.ini");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("empty text gives the defaults") {
    const auto pc = parse_config_text("");
    CHECK(pc.system == SystemConfig{});
    CHECK(pc.experiment == ExperimentOverrides{});
}

TEST_CASE("dBm and dB keys convert to watts and linear") {
    const auto pc = parse_config_text(
        "[system]\np_max_dbm = 30\nsigma_r2_dbm = -80\ngamma_db = 3, 6\nK = 2\nsigma_k2_dbm = -90\n");
    CHECK(pc.system.p_max == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pc.system.sigma_r2 == doctest::Approx(1e-11).epsilon(1e-12));
    REQUIRE(pc.system.gamma.size() == 2);
    CHECK(pc.system.gamma[1] == doctest::Approx(std::pow(10.0, 0.6)));
    CHECK(pc.system.sigma_k2 == std::vector<double>(2, pc.system.sigma_k2[0]));
    CHECK(dbm_to_watts(40.0) == doctest::Approx(10.0));
    CHECK(watts_to_dbm(1e-10) == doctest::Approx(-70.0));
}

TEST_CASE("element counts and grids stay consistent") {
    const auto a = parse_config_text("[system]\nN = 44\nL = 20\n");
    CHECK(a.system.geometry.reflector_grid == Grid{11, 4});
    CHECK(a.system.geometry.sensor_grid == Grid{5, 4});
    const auto b = parse_config_text("[geometry]\nreflector_grid = 4x4\nsensor_grid = 2x4\n");
    CHECK(b.system.N == 16);
    CHECK(b.system.L == 8);
    CHECK(error_of("[system]\nN = 10\n[geometry]\nreflector_grid = 3x3\n").find("reflector grid") !=
          std::string::npos);
}

TEST_CASE("errors carry line numbers or the invariant list") {
    CHECK(error_of("[system]\na_max = 0.5\n").find("a_max must be >= 1") != std::string::npos);
    CHECK(error_of("[system]\n\nfoo = 1\n").find("t.ini:3") != std::string::npos);
    CHECK(error_of("[nope]\n").find("unknown section") != std::string::npos);
    CHECK(error_of("[system]\nM = four\n").find("t.ini:2") != std::string::npos);
    CHECK(error_of("M = 4\n").find("outside") != std::string::npos);
    CHECK(error_of("[system]\nM = 4\nM = 5\n").find("duplicate") != std::string::npos);
    CHECK(error_of("[system]\np_max_dbm = 40\np_max_w = 10\n").find("conflicts") != std::string::npos);
    CHECK(error_of("[geometry]\nbs_pos = 1, 2\n").find("three") != std::string::npos);
    const std::string many = error_of("[system]\nM = 0\np_max_w = -1\nepsilon = 0\n");
    CHECK(many.find("M must be") != std::string::npos);
    CHECK(many.find("P_max") != std::string::npos);
    CHECK(many.find("epsilon") != std::string::npos);
    CHECK_THROWS_AS(parse_config_file("/nonexistent/config.ini"), ConfigError);
}

TEST_CASE("emit then parse reproduces the configuration exactly") {
    const auto pc = parse_config_text(
        "# comment\n[system]\nK = 3\ngamma_db = 7.5\np_max_dbm = 37.3\nsigma_d2_dbm = -73.1\na_max = 4\n"
        "[geometry]\ntarget_azimuth_deg = 12.25\nbs_pos = 0.1, -2, 3\n"
        "[channel]\nseed = 18446744073709551615\nrician_k_db = 1.7\n"
        "[experiment]\ntrials = 7\nthreads = 2\ntolerance = 1e-7\nvariants = a8:8, pas:passive\n"
        "grid = 0.25, 0.5\nthresholds_db = -1, 0, 1\ntotal_elements = 32\nfixed_ratio = 0.25\n");
    CHECK(pc.system.channel_stats.seed == 18446744073709551615ULL);
    REQUIRE(pc.experiment.variants);
    CHECK(pc.experiment.variants->at(1).passive);
    const std::string text = emit_config(pc);
    const auto back = parse_config_text(text);
    CHECK(back == pc);
    CHECK(emit_config(back) == text);
    const auto defaults = parse_config_text(emit_config(parse_config_text("")));
    CHECK(defaults.system == SystemConfig{});
}

TEST_CASE("make_spec applies overrides") {
    const auto pc = parse_config_text("[experiment]\ntrials = 3\ngrid = 0.25\nthreads = 4\n");
    const auto s = make_spec(ExperimentId::ratio_sweep, pc);
    CHECK(s.trials == 3);
    CHECK(s.threads == 4);
    CHECK(s.grid == std::vector<double>{0.25});
    const auto d = make_spec(ExperimentId::convergence, parse_config_text(""));
    CHECK(d.trials == 50);
    CHECK(d.variants.size() == 3);
}
