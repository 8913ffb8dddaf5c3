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

#include "sarisac/rng.hpp"

#include <cmath>
#include <numbers>

namespace sarisac {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::array<std::uint32_t, 2> make_key(std::uint64_t a, std::uint64_t b) {
    const std::uint64_t k = splitmix64(a ^ splitmix64(b + 0x632BE59BD9B4E019ull));
    return {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : key_(make_key(seed, stream)) {}

Rng::Rng(std::array<std::uint32_t, 2> key) : key_(key) {}

Rng Rng::split(std::uint64_t id) const {
    const std::uint64_t own = (static_cast<std::uint64_t>(key_[1]) << 32) | key_[0];
    return Rng(make_key(own, id));
}

void Rng::refill() {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    std::array<std::uint32_t, 4> x = counter_;
    std::array<std::uint32_t, 2> k = key_;
    for (int r = 0; r < 10; ++r) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(M0, x[0], hi0, lo0);
        mulhilo(M1, x[2], hi1, lo1);
        x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
        k[0] += W0;
        k[1] += W1;
    }
    block_ = x;
    next_ = 0;
    // 128-bit counter increment
    for (auto& w : counter_)
        if (++w != 0) break;
}

Rng::result_type Rng::operator()() {
    if (next_ > 2) refill();
    const std::uint64_t lo = block_[next_];
    const std::uint64_t hi = block_[next_ + 1];
    next_ += 2;
    return (hi << 32) | lo;
}

double Rng::uniform() {
    // 53 random bits, offset by half an ulp so 0 is never returned
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::complex<double> Rng::complex_normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    // polar Box-Muller: |z|² ~ Exp(1), arg uniform
    const double r = std::sqrt(-std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace sarisac
