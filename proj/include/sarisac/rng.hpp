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
#include <complex>
#include <cstdint>
#include <limits>

namespace sarisac {

/// Counter-based generator (Philox4x32-10). A stream is identified by its key,
/// so independent streams for (seed, trial) pairs can be derived in any order
/// and on any thread with identical results.
class Rng {
  public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    /// Child stream whose key depends only on this stream's key and id.
    Rng split(std::uint64_t id) const;

    result_type operator()();

    /// Uniform on the open interval (0, 1).
    double uniform();
    double normal();
    /// Circularly-symmetric complex Gaussian with unit variance.
    std::complex<double> complex_normal();

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  private:
    Rng(std::array<std::uint32_t, 2> key);
    void refill();

    std::array<std::uint32_t, 2> key_{};
    std::array<std::uint32_t, 4> counter_{};
    std::array<std::uint32_t, 4> block_{};
    int next_ = 4;
};

}  // namespace sarisac
