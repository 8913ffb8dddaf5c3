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

#include "sarisac/channel.hpp"

#include <cmath>
#include <numbers>

#include "sarisac/error.hpp"

namespace sarisac {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double distance(const Vec3& a, const Vec3& b) {
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

Vec3 unit_direction(const Vec3& from, const Vec3& to) {
    const double r = distance(from, to);
    if (!(r > 0.0)) throw InvalidInput("coincident positions have no direction");
    return {(to[0] - from[0]) / r, (to[1] - from[1]) / r, (to[2] - from[2]) / r};
}

}  // namespace

CVec steering_vector(const Grid& grid, double spacing, double azimuth_deg, double elevation_deg) {
    if (grid.rows < 1 || grid.cols < 1) throw InvalidInput("steering_vector: empty grid");
    const double az = azimuth_deg * kDeg;
    const double el = elevation_deg * kDeg;
    const double kv = 2.0 * std::numbers::pi * spacing * std::sin(el);
    const double kh = 2.0 * std::numbers::pi * spacing * std::cos(el) * std::sin(az);
    CVec v(grid.size());
    for (int p = 0; p < grid.rows; ++p)
        for (int q = 0; q < grid.cols; ++q)
            v(p * grid.cols + q) = std::polar(1.0, p * kv + q * kh);
    return v;
}

CVec ula_steering_vector(int elements, double spacing, const Vec3& dir) {
    CVec v(elements);
    const double k = 2.0 * std::numbers::pi * spacing * dir[1];
    for (int m = 0; m < elements; ++m) v(m) = std::polar(1.0, m * k);
    return v;
}

std::pair<double, double> ris_angles_deg(const Vec3& ris_pos, const Vec3& point) {
    const Vec3 r = unit_direction(ris_pos, point);
    const double el = std::asin(std::clamp(r[2], -1.0, 1.0));
    const double az = std::atan2(r[0], r[1]);
    return {az / kDeg, el / kDeg};
}

double path_loss(double distance_m, double exponent, double ref_db) {
    if (!(distance_m > 0.0)) throw InvalidInput("path_loss: distance must be > 0");
    return std::sqrt(std::pow(10.0, ref_db / 10.0) * std::pow(distance_m, -exponent));
}

CMat rician_matrix(Rng& rng, int rows, int cols, double k_linear, const CMat& los,
                   double amplitude_gain) {
    if (los.rows() != rows || los.cols() != cols)
        throw InvalidInput("rician_matrix: LoS component has wrong dimensions");
    const double w_los = std::sqrt(k_linear / (k_linear + 1.0));
    const double w_nlos = std::sqrt(1.0 / (k_linear + 1.0));
    CMat out(rows, cols);
    // column-major draw order matches Eigen storage
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            out(i, j) = amplitude_gain * (w_los * los(i, j) + w_nlos * rng.complex_normal());
    return out;
}

Vec3 sample_disc(Rng& rng, const Vec3& center, double radius) {
    const double r = radius * std::sqrt(rng.uniform());
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    return {center[0] + r * std::cos(phi), center[1] + r * std::sin(phi), center[2]};
}

ChannelSet generate_channel_set(const SystemConfig& cfg, Rng& rng) {
    cfg.validate();
    const auto& geo = cfg.geometry;
    const auto& st = cfg.channel_stats;
    const double k_lin = std::pow(10.0, st.rician_k_db / 10.0);

    // positions first so that a stream pairs user drops across array sizes
    std::vector<Vec3> users;
    users.reserve(cfg.K);
    for (int k = 0; k < cfg.K; ++k) users.push_back(sample_disc(rng, geo.user_center, geo.user_radius));

    ChannelSet ch;

    const auto [az_bs, el_bs] = ris_angles_deg(geo.ris_pos, geo.bs_pos);
    const CVec a_ris_bs = steering_vector(geo.reflector_grid, geo.element_spacing, az_bs, el_bs);
    const CVec a_bs = ula_steering_vector(cfg.M, geo.element_spacing,
                                          unit_direction(geo.bs_pos, geo.ris_pos));
    const CMat los_g = a_ris_bs * a_bs.transpose();
    const double pl_g = path_loss(distance(geo.bs_pos, geo.ris_pos), st.pathloss_exponent_nlos,
                                  st.ref_pathloss_db);
    ch.G = rician_matrix(rng, cfg.N, cfg.M, k_lin, los_g, pl_g);

    ch.h.reserve(cfg.K);
    for (const auto& pos : users) {
        const auto [az, el] = ris_angles_deg(geo.ris_pos, pos);
        const CMat los = steering_vector(geo.reflector_grid, geo.element_spacing, az, el);
        const double pl = path_loss(distance(geo.ris_pos, pos), st.pathloss_exponent_nlos,
                                    st.ref_pathloss_db);
        ch.h.push_back(rician_matrix(rng, cfg.N, 1, k_lin, los, pl).col(0));
    }

    const double pl_t = path_loss(geo.target_range, st.pathloss_exponent_los, st.ref_pathloss_db);
    ch.c = pl_t * steering_vector(geo.reflector_grid, geo.element_spacing, geo.target_azimuth_deg,
                                  geo.target_elevation_deg);
    ch.d = pl_t * steering_vector(geo.sensor_grid, geo.element_spacing, geo.target_azimuth_deg,
                                  geo.target_elevation_deg);
    return ch;
}

}  // namespace sarisac
