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

#include <vector>

#include "sarisac/config.hpp"
#include "sarisac/core_model.hpp"
#include "sarisac/rng.hpp"

namespace sarisac {

// Array conventions
// -----------------
// The RIS lies in the global x-z plane at ris_pos with broadside along +y. For a
// unit direction r leaving the RIS, elevation = asin(r_z) and azimuth =
// atan2(r_x, r_y). Element (p, q) of a rows x cols grid sits at row p (vertical
// axis) and column q (horizontal axis), flattened row-major to index p*cols + q.
// The BS carries an M-element ULA along the global y axis.

/// Unit-modulus planar-array response,
/// exp(j 2π spacing (p sin(el) + q cos(el) sin(az))).
CVec steering_vector(const Grid& grid, double spacing, double azimuth_deg, double elevation_deg);

/// Response of an M-element ULA along the y axis toward unit direction dir.
CVec ula_steering_vector(int elements, double spacing, const Vec3& dir);

/// Azimuth/elevation (degrees) of the direction from the RIS toward a point.
std::pair<double, double> ris_angles_deg(const Vec3& ris_pos, const Vec3& point);

/// Amplitude gain sqrt(10^(ref_db/10) * distance^-exponent).
double path_loss(double distance, double exponent, double ref_db);

/// amplitude_gain * (sqrt(K/(K+1)) los + sqrt(1/(K+1)) H_nlos), H_nlos i.i.d. CN(0,1).
CMat rician_matrix(Rng& rng, int rows, int cols, double k_linear, const CMat& los,
                   double amplitude_gain);

/// Uniform point in the horizontal disc of the given center and radius.
Vec3 sample_disc(Rng& rng, const Vec3& center, double radius);

/// Fresh realization of all channels; user positions are redrawn each call.
ChannelSet generate_channel_set(const SystemConfig& cfg, Rng& rng);

}  // namespace sarisac
