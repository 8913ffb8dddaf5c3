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

#include "doctest.h"
#include "helpers.hpp"
#include "sarisac/error.hpp"
#include "sarisac/rx_beamformer.hpp"

using namespace sarisac;
using testutil::randn;
using testutil::random_unit;

namespace {

struct Draw {
    CVec d, c, theta;
    EchoNoise noise;
};

Draw random_draw(Rng& rng, int L, int N) {
    Draw x;
    x.d = randn(rng, L);
    x.c = randn(rng, N);
    x.theta = randn(rng, N, 4.0);
    x.noise.varsigma_t2 = 0.1 + rng.uniform();
    x.noise.sigma_d2 = rng.uniform();
    x.noise.sigma_r2 = 0.05 + rng.uniform();
    return x;
}

double direct_quotient(const CVec& u, const Draw& x) {
    const double ct = x.c.cwiseProduct(x.theta).squaredNorm();
    const double num = std::norm(u.dot(x.d));
    return num / (x.noise.varsigma_t2 * x.noise.sigma_d2 * ct * num + x.noise.sigma_r2 * u.squaredNorm());
}

}  // namespace

TEST_CASE("scalar case") {
    Rng rng(1);
    const auto x = random_draw(rng, 1, 3);
    const CVec u = optimal_receive_beamformer(x.d, x.c, x.theta, x.noise);
    REQUIRE(u.size() == 1);
    CHECK(std::abs(u(0) - cplx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("optimum is aligned with d and beats random combiners") {
    Rng rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const int L = 1 + trial % 12;
        const auto x = random_draw(rng, L, 5);
        const CVec u = optimal_receive_beamformer(x.d, x.c, x.theta, x.noise);
        CHECK(std::abs(u.norm() - 1.0) < 1e-12);
        CHECK(std::abs(u.dot(x.d)) / x.d.norm() >= 1.0 - 1e-10);
        const double best = rayleigh_quotient(u, x.d, x.c, x.theta, x.noise);
        for (int s = 0; s < 200; ++s) {
            const CVec v = random_unit(rng, L);
            CHECK(rayleigh_quotient(v, x.d, x.c, x.theta, x.noise) <= best * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("matched filter without RIS noise") {
    Rng rng(3);
    auto x = random_draw(rng, 6, 4);
    x.noise.sigma_d2 = 0.0;
    const CVec u = optimal_receive_beamformer(x.d, x.c, x.theta, x.noise);
    const double q = rayleigh_quotient(u, x.d, x.c, x.theta, x.noise);
    CHECK(q == doctest::Approx(x.d.squaredNorm() / x.noise.sigma_r2).epsilon(1e-12));
    const CVec mf = x.d / x.d.norm();
    CHECK(rayleigh_quotient(mf, x.d, x.c, x.theta, x.noise) == doctest::Approx(q).epsilon(1e-12));
}

TEST_CASE("rayleigh_quotient matches direct evaluation") {
    Rng rng(4);
    for (int i = 0; i < 100; ++i) {
        const auto x = random_draw(rng, 5, 7);
        const CVec v = random_unit(rng, 5);
        const double q = rayleigh_quotient(v, x.d, x.c, x.theta, x.noise);
        CHECK(testutil::rel_err_strict(q, direct_quotient(v, x)) < 1e-12);
    }
    const auto x = random_draw(rng, 2, 3);
    CVec ortho(2);
    ortho << -std::conj(x.d(1)), std::conj(x.d(0));
    ortho /= ortho.norm();
    CHECK(rayleigh_quotient(ortho, x.d, x.c, x.theta, x.noise) < 1e-28);
    CHECK_THROWS_AS(rayleigh_quotient(2.0 * ortho, x.d, x.c, x.theta, x.noise), InvalidInput);
}

TEST_CASE("phase canonical, bit-stable and scale invariant") {
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const auto x = random_draw(rng, 8, 6);
        const CVec u1 = optimal_receive_beamformer(x.d, x.c, x.theta, x.noise);
        const CVec u2 = optimal_receive_beamformer(x.d, x.c, x.theta, x.noise);
        CHECK(u1 == u2);
        Eigen::Index imax = 0;
        u1.cwiseAbs().maxCoeff(&imax);
        CHECK(std::abs(u1(imax).imag()) < 1e-15);
        CHECK(u1(imax).real() >= 0.0);
        const CVec u3 = optimal_receive_beamformer(3.7 * x.d, x.c, x.theta, x.noise);
        CHECK((u3 - u1).norm() < 1e-10);
    }
}

TEST_CASE("errors") {
    Rng rng(6);
    auto x = random_draw(rng, 4, 4);
    CHECK_THROWS_AS(optimal_receive_beamformer(CVec::Zero(4), x.c, x.theta, x.noise), DegenerateTarget);
    x.noise.sigma_r2 = 0.0;
    CHECK_THROWS_AS(optimal_receive_beamformer(x.d, x.c, x.theta, x.noise), InvalidInput);
}

TEST_CASE("combiner coupling diagnostic") {
    Rng rng(7);
    const auto x = random_draw(rng, 6, 6);
    const auto cc = combiner_coupling(x.d, x.c, x.theta, x.noise);
    CHECK(cc.quotient_without_ris_noise >= cc.quotient_full);
    CHECK(cc.alignment_change < 1e-10);
}
