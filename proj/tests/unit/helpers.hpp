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

#include "sarisac/core_model.hpp"
#include "sarisac/rng.hpp"

namespace testutil {

using sarisac::CMat;
using sarisac::CVec;
using sarisac::Rng;

inline CVec randn(Rng& rng, Eigen::Index n, double scale = 1.0) {
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = scale * rng.complex_normal();
    return v;
}

inline CMat randm(Rng& rng, Eigen::Index r, Eigen::Index c, double scale = 1.0) {
    CMat m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i) m(i, j) = scale * rng.complex_normal();
    return m;
}

inline CVec random_unit(Rng& rng, Eigen::Index n) {
    CVec v = randn(rng, n);
    return v / v.norm();
}

inline int uniform_int(Rng& rng, int lo, int hi) {
    return lo + static_cast<int>(rng.uniform() * (hi - lo + 1)) % (hi - lo + 1);
}

inline double rel_err(double a, double b) {
    return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

inline double rel_err_strict(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace testutil
