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

#include "sarisac/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sarisac/error.hpp"

namespace sarisac {

namespace {

[[noreturn]] void mismatch(const std::string& what) {
    throw InvalidInput("dimension mismatch: " + what);
}

// Row vector h_kᵀΘG as a plain vector of length M.
CVec cascaded_row(const CVec& a, const CVec& theta, const CMat& G) {
    return G.transpose() * a.cwiseProduct(theta);
}

}  // namespace

void check_dimensions(const SystemConfig& cfg, const ChannelSet& ch, const BeamformerSet& bf,
                      bool check_u) {
    if (ch.G.rows() != cfg.N || ch.G.cols() != cfg.M) mismatch("G must be N x M");
    if (static_cast<int>(ch.h.size()) != cfg.K) mismatch("need K user channels");
    for (const auto& hk : ch.h)
        if (hk.size() != cfg.N) mismatch("h_k must have length N");
    if (ch.c.size() != cfg.N) mismatch("c must have length N");
    if (ch.d.size() != cfg.L) mismatch("d must have length L");
    if (bf.W.rows() != cfg.M || bf.W.cols() != cfg.columns()) mismatch("W must be M x (K+Q)");
    if (bf.theta.size() != cfg.N) mismatch("theta must have length N");
    if (check_u && bf.u.size() != cfg.L) mismatch("u must have length L");
}

double user_sinr(const SystemConfig& cfg, const ChannelSet& ch, const BeamformerSet& bf, int k) {
    check_dimensions(cfg, ch, bf, false);
    if (k < 0 || k >= cfg.K) throw InvalidInput("user index out of range");
    if (static_cast<int>(cfg.sigma_k2.size()) != cfg.K) mismatch("sigma_k2 must have K entries");

    const CVec eff = cascaded_row(ch.h[k], bf.theta, ch.G);
    const Eigen::RowVectorXcd gains = eff.transpose() * bf.W;
    const double signal = std::norm(gains(k));
    const double interference = gains.squaredNorm() - signal;
    const double ris_noise = cfg.sigma_d2 * ch.h[k].cwiseProduct(bf.theta).squaredNorm();
    return signal / (interference + ris_noise + cfg.sigma_k2[k]);
}

double echo_signal_power(const ChannelSet& ch, const BeamformerSet& bf) {
    const CVec eff = cascaded_row(ch.c, bf.theta, ch.G);
    return (eff.transpose() * bf.W).squaredNorm();
}

double echo_noise_power(const SystemConfig& cfg, const ChannelSet& ch, const BeamformerSet& bf) {
    const double ud2 = std::norm(bf.u.dot(ch.d));  // dot() conjugates the left operand
    return cfg.varsigma_t2 * cfg.sigma_d2 * ud2 * ch.c.cwiseProduct(bf.theta).squaredNorm() +
           cfg.sigma_r2;
}

double radar_snr(const SystemConfig& cfg, const ChannelSet& ch, const BeamformerSet& bf) {
    check_dimensions(cfg, ch, bf, true);
    if (std::abs(bf.u.norm() - 1.0) > 1e-8)
        throw InvalidInput("radar_snr: receive combiner must have unit norm");
    const double ud2 = std::norm(bf.u.dot(ch.d));
    return cfg.varsigma_t2 * ud2 * echo_signal_power(ch, bf) / echo_noise_power(cfg, ch, bf);
}

double total_power(const SystemConfig& cfg, const ChannelSet& ch, const BeamformerSet& bf) {
    check_dimensions(cfg, ch, bf, false);
    const CMat gw = ch.G * bf.W;
    const CMat tgw = bf.theta.asDiagonal() * gw;
    return bf.W.squaredNorm() + tgw.squaredNorm() + cfg.sigma_d2 * bf.theta.squaredNorm();
}

double bounded_power(const SystemConfig& cfg, const ChannelSet& ch, const BeamformerSet& bf) {
    check_dimensions(cfg, ch, bf, false);
    return bf.W.squaredNorm() + cfg.a_max * cfg.a_max * (ch.G * bf.W).squaredNorm() +
           cfg.sigma_d2 * bf.theta.squaredNorm();
}

FeasibilityReport check_feasibility(const SystemConfig& cfg, const ChannelSet& ch,
                                    const BeamformerSet& bf, const FeasibilityTolerances& tol) {
    FeasibilityReport rep;
    rep.power_used = total_power(cfg, ch, bf);
    rep.power_margin = cfg.p_max - rep.power_used;
    rep.power_ok = rep.power_used <= cfg.p_max * (1.0 + tol.power_rel);

    rep.sinr_ok = true;
    for (int k = 0; k < cfg.K; ++k) {
        const double s = user_sinr(cfg, ch, bf, k);
        const double s_db = s > 0.0 ? to_db(s) : -std::numeric_limits<double>::infinity();
        const double margin = s_db - to_db(cfg.gamma[k]);
        rep.sinr_db.push_back(s_db);
        rep.sinr_margin_db.push_back(margin);
        if (!(margin >= -tol.sinr_db)) rep.sinr_ok = false;
    }

    rep.max_amp = bf.theta.size() > 0 ? bf.theta.cwiseAbs().maxCoeff() : 0.0;
    rep.amp_ok = rep.max_amp <= cfg.a_max * (1.0 + tol.power_rel);
    rep.unitnorm_ok = bf.u.size() > 0 && std::abs(bf.u.norm() - 1.0) <= tol.unit_norm;
    return rep;
}

}  // namespace sarisac
