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

#include "sarisac/rx_beamformer.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "sarisac/error.hpp"

namespace sarisac {

namespace {

CMat denominator_matrix(const CVec& d, double ris_term, double sigma_r2) {
    CMat B = ris_term * (d * d.adjoint());
    B.diagonal().array() += sigma_r2;
    return B;
}

double ris_noise_weight(const CVec& c, const CVec& theta, const EchoNoise& noise) {
    if (c.size() != theta.size()) throw InvalidInput("c and theta must have equal length");
    return noise.varsigma_t2 * noise.sigma_d2 * c.cwiseProduct(theta).squaredNorm();
}

void canonicalize_phase(CVec& u) {
    const double peak = u.cwiseAbs().maxCoeff();
    Eigen::Index ref = 0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (std::abs(u(i)) >= peak * (1.0 - 1e-9)) {
            ref = i;
            break;
        }
    }
    const cplx rot = std::conj(u(ref)) / std::abs(u(ref));
    u *= rot;
    u(ref) = cplx(std::abs(u(ref)), 0.0);
}

CVec principal_generalized(const CVec& d, double ris_term, double sigma_r2) {
    const CMat A = d * d.adjoint();
    const CMat B = denominator_matrix(d, ris_term, sigma_r2);
    Eigen::GeneralizedSelfAdjointEigenSolver<CMat> es(A, B, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success) throw InvalidInput("generalized eigen-solve failed");
    // eigenvalues ascending
    CVec u = es.eigenvectors().col(d.size() - 1);
    u /= u.norm();
    canonicalize_phase(u);
    return u;
}

}  // namespace

CVec optimal_receive_beamformer(const CVec& d, const CVec& c, const CVec& theta,
                                const EchoNoise& noise) {
    if (d.size() == 0 || d.squaredNorm() == 0.0)
        throw DegenerateTarget("target-to-sensor channel is zero");
    if (!(noise.sigma_r2 > 0.0)) throw InvalidInput("sigma_r2 must be > 0");
    // Scale-free formulation: the eigenvector of (A, B) is invariant to scaling
    // A and B jointly, so normalize by σ_r² to keep B = I + rank-one.
    const double dn = d.norm();
    const CVec dh = d / dn;
    const double ris = ris_noise_weight(c, theta, noise) * dn * dn / noise.sigma_r2;
    return principal_generalized(dh, ris, 1.0);
}

double rayleigh_quotient(const CVec& u, const CVec& d, const CVec& c, const CVec& theta,
                         const EchoNoise& noise) {
    if (u.size() != d.size()) throw InvalidInput("u and d must have equal length");
    if (std::abs(u.norm() - 1.0) > 1e-8) throw InvalidInput("rayleigh_quotient: u must be unit norm");
    const double ud2 = std::norm(u.dot(d));
    const double den = ris_noise_weight(c, theta, noise) * ud2 + noise.sigma_r2 * u.squaredNorm();
    return ud2 / den;
}

CombinerCoupling combiner_coupling(const CVec& d, const CVec& c, const CVec& theta,
                                   const EchoNoise& noise) {
    EchoNoise no_ris = noise;
    no_ris.sigma_d2 = 0.0;
    const CVec u_full = optimal_receive_beamformer(d, c, theta, noise);
    const CVec u_bare = optimal_receive_beamformer(d, c, theta, no_ris);
    CombinerCoupling out;
    out.quotient_full = rayleigh_quotient(u_full, d, c, theta, noise);
    out.quotient_without_ris_noise = rayleigh_quotient(u_bare, d, c, theta, no_ris);
    out.alignment_change = 1.0 - std::abs(u_full.dot(u_bare));
    return out;
}

}  // namespace sarisac
