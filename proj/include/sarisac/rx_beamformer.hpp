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

#include "sarisac/core_model.hpp"

namespace sarisac {

/// Noise statistics entering the receive-combiner quotient.
struct EchoNoise {
    double varsigma_t2 = 0.8;
    double sigma_d2 = 1e-10;
    double sigma_r2 = 1e-10;

    static EchoNoise from(const SystemConfig& cfg) {
        return {cfg.varsigma_t2, cfg.sigma_d2, cfg.sigma_r2};
    }
};

/// Receive combiner maximizing uᴴddᴴu / uᴴ(ς_t²σ_d²‖cᵀΘ‖²ddᴴ + σ_r²I)u.
///
/// Solved as a Hermitian-definite generalized eigenproblem; the principal
/// eigenvector is normalized to unit length and rotated so that its
/// largest-magnitude entry (first one, within 1e-9 relative) is real and
/// non-negative. Throws DegenerateTarget if d = 0.
CVec optimal_receive_beamformer(const CVec& d, const CVec& c, const CVec& theta,
                                const EchoNoise& noise);

/// The quotient above for a given unit-norm u.
double rayleigh_quotient(const CVec& u, const CVec& d, const CVec& c, const CVec& theta,
                         const EchoNoise& noise);

/// Quotient at the optimal combiner with and without the RIS-noise term in the
/// denominator; the gap measures how much u depends on Θ.
struct CombinerCoupling {
    double quotient_full = 0.0;
    double quotient_without_ris_noise = 0.0;
    double alignment_change = 0.0;  // 1 - |u_fullᴴ u_norisnoise|
};
CombinerCoupling combiner_coupling(const CVec& d, const CVec& c, const CVec& theta,
                                   const EchoNoise& noise);

}  // namespace sarisac
