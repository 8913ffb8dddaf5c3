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

// Surrogate bounds for bilinear forms aᵀXBY with X = diag(x).
//
// Diagonal matrices are carried as their diagonal vectors. These evaluators
// follow the closed-form expressions term by term; the SCA subproblem emits
// algebraically identical constraints expanded around the expansion point.

namespace sarisac {

/// Linearization point of one SCA step.
struct ExpansionPoint {
    CVec theta0;  // diag of Θ at the previous iterate
    CMat W0;      // M x (K+Q)
    double t0 = 0.0;
    double q0 = 1.0;
};

/// 2 Re{v0ᴴv} - ‖v0‖², a global lower bound on ‖v‖² tight at v = v0.
double taylor_norm_lower_bound(const CVec& v, const CVec& v0);

/// Z3 Z4ᴴ Bᴴ diag(a*) z2* + Bᴴ diag(a*) z1*.
///
/// The second term is dropped when z1 = 0, which allows the shape-changing
/// use α(0, X0, I, Y0) = Y0ᴴ Bᴴ diag(a*) x0*.
CVec alpha_map(const CVec& a, const CMat& B, const CVec& z1, const CVec& z2, const CMat& Z3,
               const CMat& Z4);

/// Concave minorant of ‖aᵀXBY‖₂² around (X0, Y0).
double omega_lower_bound(const CVec& a, const CMat& B, const CVec& x, const CVec& x0,
                         const CMat& Y, const CMat& Y0);

/// ‖aᵀXBY‖₂², the function Ω bounds.
double bilinear_norm2(const CVec& a, const CMat& B, const CVec& x, const CMat& Y);

enum class LambdaVariant { plus, minus, j, minus_j };

/// Convex majorant pieces of the real/imaginary parts of aᵀXBy.
/// (z3, z4) = (±y, ±y0) for plus/minus and (±jy, ±jy0) for j/minus_j.
double lambda_value(const CVec& a, const CMat& B, const CVec& x, const CVec& x0, const CVec& y,
                    const CVec& y0, LambdaVariant variant);

/// Smallest slacks satisfying the four Λ constraints:
/// rho = max(Λ_plus, Λ_minus), kappa = max(Λ_j, Λ_minus_j).
struct LambdaSlacks {
    double rho = 0.0;
    double kappa = 0.0;
};
LambdaSlacks lambda_slacks(const CVec& a, const CMat& B, const CVec& x, const CVec& x0,
                           const CVec& y, const CVec& y0);

/// Re{v1ᴴv2} and Im{v1ᴴv2} through the polarization identities.
struct ReIm {
    double re = 0.0;
    double im = 0.0;
};
ReIm re_im_norm_identities(const CVec& v1, const CVec& v2);

}  // namespace sarisac
