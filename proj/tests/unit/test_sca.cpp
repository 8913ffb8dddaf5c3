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

#include "doctest.h"
#include "sarisac/channel.hpp"
#include "sarisac/error.hpp"
#include "sarisac/sca.hpp"

using namespace sarisac;

namespace {

SystemConfig small_config() {
    SystemConfig cfg = SystemConfig().with_elements(8, 4).with_users(2, 10.0);
    cfg.M = 2;
    cfg.Q = 1;
    return cfg;
}

ChannelSet channels(const SystemConfig& cfg, std::uint64_t seed) {
    Rng rng(seed);
    return generate_channel_set(cfg, rng);
}

}  // namespace

TEST_CASE("SolveOptions validation") {
    SolveOptions o;
    CHECK_NOTHROW(o.validate());
    o.epsilon = 0.0;
    CHECK_THROWS_AS(o.validate(), InvalidInput);
    o = SolveOptions{};
    o.max_iters = 0;
    CHECK_THROWS_AS(o.validate(), InvalidInput);
    o = SolveOptions{};
    o.init_strategy = InitStrategy::warm_start;
    CHECK_THROWS_AS(o.validate(), InvalidInput);
    SystemConfig cfg;
    cfg.epsilon = 0.5;
    cfg.max_iters = 7;
    const auto f = SolveOptions::from(cfg);
    CHECK(f.epsilon == 0.5);
    CHECK(f.max_iters == 7);
}

TEST_CASE("subproblem variable count at default scale") {
    const SystemConfig cfg;
    const ChannelSet ch = channels(cfg, 1);
    Rng rng(1);
    const auto init = initialize(cfg, ch, rng, SolveOptions::from(cfg));
    const auto sub = build_subproblem(cfg, ch, init.beamformers.u, expansion_point(cfg, ch, init.beamformers));
    const int J = cfg.columns();
    const int expected = 2 * cfg.M * J + 2 * cfg.N + 2 + 2 * cfg.K * (J - 1) + sub.layout.epigraph_auxiliaries;
    CHECK(sub.program.num_vars == expected);
    CHECK(sub.layout.epigraph_auxiliaries == 0);
    CHECK(sub.program.num_vars == 202);
    CHECK(sub.layout.tau.size() == static_cast<std::size_t>(cfg.K));
    CHECK(sub.layout.interferer.size() == static_cast<std::size_t>(cfg.K * (J - 1)));
    CHECK_NOTHROW(sub.program.validate());
}

TEST_CASE("expansion point is feasible for its own subproblem") {
    const SystemConfig cfg;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const ChannelSet ch = channels(cfg, seed);
        Rng rng(seed);
        SolveOptions o = SolveOptions::from(cfg);
        o.init_strategy = seed == 1 ? InitStrategy::mrt_scaled : InitStrategy::random_phase;
        const auto init = initialize(cfg, ch, rng, o);
        const auto exp = expansion_point(cfg, ch, init.beamformers);
        const auto sub = build_subproblem(cfg, ch, init.beamformers.u, exp);
        const RVec x0 = encode_expansion_point(cfg, ch, sub, exp);
        CHECK(conic::constraint_violation(sub.program, x0).max() <= 1e-7);

        const BeamformerSet back = decode_beamformers(sub, x0, init.beamformers.u, cfg.M, cfg.columns());
        CHECK((back.W - init.beamformers.W).norm() <= 1e-12 * init.beamformers.W.norm());
        CHECK((back.theta - init.beamformers.theta).norm() <= 1e-12 * init.beamformers.theta.norm());
    }
}

TEST_CASE("initialize") {
    const SystemConfig cfg;
    const ChannelSet ch = channels(cfg, 2);
    SUBCASE("feasible start with consistent t0 and q0") {
        Rng rng(2);
        const auto ip = initialize(cfg, ch, rng, SolveOptions::from(cfg));
        CHECK(check_feasibility(cfg, ch, ip.beamformers).all_ok());
        CHECK(bounded_power(cfg, ch, ip.beamformers) <= cfg.p_max);
        CHECK(ip.t0 == doctest::Approx(echo_signal_power(ch, ip.beamformers)));
        CHECK(ip.q0 == doctest::Approx(echo_noise_power(cfg, ch, ip.beamformers)));
        CHECK(ip.attempts >= 1);
    }
    SUBCASE("warm start passes through") {
        Rng rng(3);
        const auto first = initialize(cfg, ch, rng, SolveOptions::from(cfg));
        SolveOptions o = SolveOptions::from(cfg);
        o.init_strategy = InitStrategy::warm_start;
        o.warm_start = first.beamformers;
        const auto ip = initialize(cfg, ch, rng, o);
        CHECK(ip.beamformers.W == first.beamformers.W);
        CHECK(ip.beamformers.theta == first.beamformers.theta);
        CHECK(ip.beamformers.u == first.beamformers.u);
        CHECK(ip.t0 == echo_signal_power(ch, first.beamformers));
        CHECK(ip.q0 == echo_noise_power(cfg, ch, first.beamformers));
    }
    SUBCASE("infeasible warm start") {
        Rng rng(4);
        SolveOptions o = SolveOptions::from(cfg);
        o.init_strategy = InitStrategy::warm_start;
        o.warm_start = BeamformerSet{CMat::Zero(cfg.M, cfg.columns()), CVec::Zero(cfg.N), CVec()};
        CHECK_THROWS_AS(initialize(cfg, ch, rng, o), InitializationFailure);
    }
    SUBCASE("absurd SINR targets") {
        SystemConfig hard = cfg;
        hard.gamma.assign(cfg.K, 1e9);
        Rng rng(5);
        SolveOptions o = SolveOptions::from(hard);
        o.max_init_attempts = 3;
        try {
            initialize(hard, ch, rng, o);
            FAIL("expected InitializationFailure");
        } catch (const InitializationFailure& e) {
            CHECK(std::string(e.what()).find("3 attempt") != std::string::npos);
        }
        o.infeasible_policy = InfeasiblePolicy::fail_trial;
        CHECK_THROWS_AS(initialize(hard, ch, rng, o), InitializationFailure);
    }
}

TEST_CASE("infinite epsilon stops after one iteration") {
    const SystemConfig cfg;
    const ChannelSet ch = channels(cfg, 4);
    Rng rng(4);
    SolveOptions o = SolveOptions::from(cfg);
    o.epsilon = std::numeric_limits<double>::infinity();
    const auto res = run(cfg, ch, rng, o);
    CHECK(res.iterations == 1);
    CHECK(res.gamma_r_trace.size() == 2);
    CHECK(res.converged);
    CHECK(res.stop_reason == "converged");
    CHECK(res.gamma_r_trace[1] >= res.gamma_r_trace[0]);
    CHECK(res.feasibility.all_ok());
}

TEST_CASE("small-instance run: monotone, feasible, deterministic") {
    const SystemConfig cfg = small_config();
    const ChannelSet ch = channels(cfg, 7);
    SolveOptions o = SolveOptions::from(cfg);
    o.max_iters = 15;
    Rng r1(7), r2(7);
    const auto a = run(cfg, ch, r1, o);
    const auto b = run(cfg, ch, r2, o);
    CHECK(a.gamma_r_trace == b.gamma_r_trace);
    CHECK(a.beamformers.W == b.beamformers.W);
    REQUIRE(a.gamma_r_trace.size() == static_cast<std::size_t>(a.iterations + 1));
    CHECK(a.iterations >= 1);
    for (std::size_t i = 1; i < a.gamma_r_trace.size(); ++i)
        CHECK(a.gamma_r_trace[i] >= a.gamma_r_trace[i - 1] - 1e-6 * std::max(1.0, a.gamma_r_trace[i - 1]));
    CHECK(a.feasibility.all_ok());
    CHECK(a.feasibility.power_margin >= -1e-6 * cfg.p_max);
    CHECK(a.subproblem_times.size() == static_cast<std::size_t>(a.iterations));
    if (a.converged) {
        const auto n = a.gamma_r_trace.size();
        CHECK(std::abs(a.gamma_r_trace[n - 1] - a.gamma_r_trace[n - 2]) <= o.epsilon);
    }
    CHECK(a.gamma_r_trace.back() > a.gamma_r_trace.front());
}

TEST_CASE("surrogate optimum lower-bounds the true linearized objective") {
    const SystemConfig cfg = small_config();
    const ChannelSet ch = channels(cfg, 8);
    Rng rng(8);
    const auto ip = initialize(cfg, ch, rng, SolveOptions::from(cfg));
    const auto exp = expansion_point(cfg, ch, ip.beamformers);
    const auto sub = build_subproblem(cfg, ch, ip.beamformers.u, exp);
    const auto sol = conic::solve(sub.program, 1e-8);
    REQUIRE(sol.status == conic::SolveStatus::optimal);
    const BeamformerSet bf = decode_beamformers(sub, sol.x, ip.beamformers.u, cfg.M, cfg.columns());
    const double truth = echo_signal_power(ch, bf) - exp.t0 / exp.q0 * echo_noise_power(cfg, ch, bf);
    const double surrogate = sol.objective_value * sub.objective_scale;
    CHECK(surrogate <= truth + 1e-6 * exp.t0);
    CHECK(conic::constraint_violation(sub.program, sol.x).max() <= 1e-6);
    CHECK(check_feasibility(cfg, ch, bf).all_ok());
}

TEST_CASE("negligible QoS targets push power to the budget") {
    SystemConfig cfg = small_config();
    cfg.gamma.assign(cfg.K, 1e-6);
    const ChannelSet ch = channels(cfg, 9);
    Rng rng(9);
    const auto ip = initialize(cfg, ch, rng, SolveOptions::from(cfg));
    const auto exp = expansion_point(cfg, ch, ip.beamformers);
    const auto sub = build_subproblem(cfg, ch, ip.beamformers.u, exp);
    const auto sol = conic::solve(sub.program, 1e-8);
    REQUIRE(sol.status == conic::SolveStatus::optimal);
    const BeamformerSet bf = decode_beamformers(sub, sol.x, ip.beamformers.u, cfg.M, cfg.columns());
    CHECK(bounded_power(cfg, ch, bf) == doctest::Approx(cfg.p_max).epsilon(1e-5));
}

TEST_CASE("passive surface yields a lower echo SNR than an active one") {
    SystemConfig active = small_config();
    active.a_max = 8.0;
    SystemConfig passive = active;
    passive.a_max = 1.0;
    passive.sigma_d2 = 0.0;
    const ChannelSet ch = channels(active, 10);
    SolveOptions o = SolveOptions::from(active);
    o.max_iters = 10;
    Rng r1(10), r2(10);
    const auto ra = run(active, ch, r1, o);
    const auto rp = run(passive, ch, r2, o);
    CHECK(rp.feasibility.all_ok());
    CHECK(rp.gamma_r_trace.back() < ra.gamma_r_trace.back());
}
