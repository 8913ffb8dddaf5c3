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

#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "sarisac/error.hpp"
#include "sarisac/experiment.hpp"

using namespace sarisac;

namespace {

SystemConfig small_base() {
    SystemConfig cfg = SystemConfig().with_elements(8, 4).with_users(2, 1.0);
    cfg.M = 2;
    cfg.Q = 1;
    cfg.max_iters = 6;
    return cfg;
}

void strip_times(std::vector<TrialRecord>& recs) {
    for (auto& r : recs) r.wall_time = 0.0;
}

}  // namespace

TEST_CASE("experiment ids round-trip") {
    for (auto id : {ExperimentId::convergence, ExperimentId::ratio_sweep, ExperimentId::detection_prob,
                    ExperimentId::element_sweep})
        CHECK(parse_experiment_id(to_string(id)) == id);
    CHECK_THROWS_AS(parse_experiment_id("fig9"), InvalidInput);
}

TEST_CASE("split_elements") {
    const auto s = split_elements(64, 0.375);
    CHECK(s.L == 24);
    CHECK(s.N == 40);
    CHECK(split_elements(128, 0.375).L == 48);
    CHECK(split_elements(64, 0.3125).L == 20);
    CHECK_THROWS_AS(split_elements(64, 0.3), ConfigError);
    CHECK_THROWS_AS(split_elements(64, 0.0), ConfigError);
    CHECK_THROWS_AS(split_elements(64, 1.0), ConfigError);
}

TEST_CASE("variants") {
    const SystemConfig base;
    const auto p = apply_variant(base, {"passive", 8.0, true});
    CHECK(p.a_max == 1.0);
    CHECK(p.sigma_d2 == 0.0);
    const auto a = apply_variant(base, {"a4", 4.0, false});
    CHECK(a.a_max == 4.0);
    CHECK(a.sigma_d2 == base.sigma_d2);
}

TEST_CASE("spec defaults and validation") {
    const auto conv = ExperimentSpec::defaults(ExperimentId::convergence);
    CHECK(conv.variants.size() == 3);
    CHECK_NOTHROW(conv.validate());
    const auto ratio = ExperimentSpec::defaults(ExperimentId::ratio_sweep);
    CHECK(ratio.grid.size() == 7);
    CHECK(ExperimentSpec::defaults(ExperimentId::element_sweep).trials == 25);
    auto det = ExperimentSpec::defaults(ExperimentId::detection_prob);
    CHECK_NOTHROW(det.validate());
    det.thresholds_db = {3.0, 1.0};
    CHECK_THROWS_AS(det.validate(), ConfigError);
    auto bad = ratio;
    bad.trials = 0;
    bad.grid.clear();
    try {
        bad.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string m = e.what();
        CHECK(m.find("trials") != std::string::npos);
        CHECK(m.find("grid") != std::string::npos);
    }
}

TEST_CASE("detection probability") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0};
    const std::vector<double> th{-std::numeric_limits<double>::infinity(), 0.0, 2.5, 5.0, 10.0, 11.0,
                                 std::numeric_limits<double>::infinity()};
    const auto pd = detection_probability(v, th);
    CHECK(pd == std::vector<double>{1.0, 1.0, 0.8, 0.6, 0.1, 0.0, 0.0});
    for (std::size_t i = 1; i < pd.size(); ++i) CHECK(pd[i] <= pd[i - 1]);
    CHECK(detection_crossing(v, 0.9) == 2.0);
    CHECK(detection_crossing(v, 1.0) == 1.0);
    CHECK(detection_crossing(v, 0.05) == 10.0);
    const auto at = detection_probability(v, {detection_crossing(v, 0.9)});
    CHECK(at[0] >= 0.9);
    CHECK(std::isinf(detection_crossing({}, 0.9)));
}

TEST_CASE("paired bootstrap") {
    const std::vector<double> a{3.0, 4.0, 5.0, 6.0}, b{1.0, 2.0, 3.0, 4.0};
    const auto c = paired_bootstrap(a, b);
    CHECK(c.mean_diff == doctest::Approx(2.0));
    CHECK(c.lower == doctest::Approx(2.0));
    CHECK(c.upper == doctest::Approx(2.0));
    CHECK(c.pairs == 4);

    std::vector<double> x, y;
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const double common = 10.0 * rng.normal();
        x.push_back(common + 0.5 + 0.2 * rng.normal());
        y.push_back(common);
    }
    const auto d = paired_bootstrap(x, y, 0.95, 4000, 9);
    CHECK(d.lower > 0.0);
    CHECK(d.lower < d.mean_diff);
    CHECK(d.upper > d.mean_diff);
    const auto again = paired_bootstrap(x, y, 0.95, 4000, 9);
    CHECK(again.lower == d.lower);
    CHECK_THROWS_AS(paired_bootstrap(x, b), InvalidInput);
}

TEST_CASE("trials are paired, deterministic and thread-count independent") {
    const SystemConfig base = small_base();
    std::vector<TrialJob> jobs;
    const Variant a8{"a8", 8.0, false}, pas{"passive", 1.0, true};
    for (int t = 0; t < 3; ++t) {
        jobs.push_back({apply_variant(base, a8), a8, 0.0, t});
        jobs.push_back({apply_variant(base, pas), pas, 0.0, t});
    }
    auto r1 = run_trials(jobs, 5, 1e-8, 1);
    auto r2 = run_trials(jobs, 5, 1e-8, 3);
    strip_times(r1);
    strip_times(r2);
    REQUIRE(r1.size() == jobs.size());
    int calls = 0;
    run_trials({jobs[0]}, 5, 1e-8, 1, [&](int done, int total) {
        ++calls;
        CHECK(done <= total);
    });
    CHECK(calls == 1);
    for (std::size_t i = 0; i < r1.size(); ++i) {
        CHECK(r1[i].gamma_r_trace == r2[i].gamma_r_trace);
        CHECK(r1[i].trial_index == jobs[i].trial_index);
        CHECK(r1[i].variant_label == jobs[i].variant.label);
        REQUIRE(r1[i].usable());
        CHECK(r1[i].final_gamma_r_db == doctest::Approx(10.0 * std::log10(r1[i].gamma_r_trace.back())));
    }
    // paired: both variants of one trial see the same channels, so the active one (a superset) wins
    for (int t = 0; t < 3; ++t) CHECK(r1[2 * t].final_gamma_r_db > r1[2 * t + 1].final_gamma_r_db);
}

TEST_CASE("failed trials are recorded and excluded") {
    SystemConfig hard = small_base();
    hard.gamma.assign(hard.K, 1e9);
    const Variant v{"a8", 8.0, false};
    const auto rec = run_trial({hard, v, 0.0, 0}, 1, 1e-8);
    CHECK_FALSE(rec.usable());
    CHECK_FALSE(rec.error.empty());
    CHECK(std::isnan(rec.final_gamma_r_db));
    const auto agg = aggregate({rec});
    CHECK(agg.used == 0);
    CHECK(agg.excluded == 1);
    std::ostringstream js;
    write_records_jsonl(js, {rec});
    CHECK(js.str().find("\"final_gamma_r_db\":null") != std::string::npos);
}

TEST_CASE("convergence curves are padded and non-decreasing") {
    ExperimentSpec spec = ExperimentSpec::defaults(ExperimentId::convergence, small_base());
    spec.trials = 2;
    const auto res = run_convergence(spec);
    REQUIRE(res.convergence.size() == 3);
    for (const auto& c : res.convergence) {
        CHECK(c.mean_db.size() == static_cast<std::size_t>(spec.base.max_iters + 1));
        CHECK(c.used + c.excluded == 2);
        for (std::size_t i = 1; i < c.mean_db.size(); ++i) CHECK(c.mean_db[i] >= c.mean_db[i - 1] - 1e-9);
    }
    CHECK(res.convergence[0].mean_db.back() >= res.convergence[2].mean_db.back());
    std::ostringstream csv;
    write_csv(csv, res);
    const std::string s = csv.str();
    CHECK(s.rfind("variant,iteration,", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 1 + 3 * (spec.base.max_iters + 1));
}

TEST_CASE("ratio sweep accounting and reproducibility") {
    ExperimentSpec spec = ExperimentSpec::defaults(ExperimentId::ratio_sweep, small_base());
    spec.total_elements = 16;
    spec.grid = {0.25, 0.5};
    spec.trials = 2;
    const auto a = run_experiment(spec);
    spec.threads = 2;
    const auto b = run_experiment(spec);
    REQUIRE(a.sweep.size() == 2);
    CHECK(a.sweep[0].L == 4);
    CHECK(a.sweep[0].N == 12);
    CHECK(a.records.size() == 4);
    std::ostringstream ca, cb, ta, tb;
    write_csv(ca, a);
    write_csv(cb, b);
    write_trials_csv(ta, a.records);
    write_trials_csv(tb, b.records);
    CHECK(ca.str() == cb.str());
    CHECK(ta.str() == tb.str());
    const std::string t = ta.str();
    CHECK(std::count(t.begin(), t.end(), '\n') == 1 + 4);
}

TEST_CASE("detection curves per ratio") {
    ExperimentSpec spec = ExperimentSpec::defaults(ExperimentId::detection_prob, small_base());
    spec.total_elements = 16;
    spec.grid = {0.25, 0.5};
    spec.trials = 2;
    spec.thresholds_db = {-100.0, 0.0, 10.0, 100.0};
    const auto res = run_experiment(spec);
    REQUIRE(res.detection.size() == 2);
    for (const auto& c : res.detection) {
        CHECK(c.pd.front() == 1.0);
        CHECK(c.pd.back() == 0.0);
        for (std::size_t i = 1; i < c.pd.size(); ++i) CHECK(c.pd[i] <= c.pd[i - 1]);
    }
}
