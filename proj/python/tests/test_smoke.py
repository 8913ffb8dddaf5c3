# SPDX-License-Identifier: Apache-2.0
#
# sarisac: beamforming design for ISAC with a sensor-aided active RIS
# Copyright (C) 2026 The sarisac authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

import math

import numpy as np
import pytest

import sarisac as sr


def small_config():
    cfg = sr.SystemConfig().with_elements(8, 4).with_users(2, 1.0)
    cfg.M = 2
    cfg.Q = 1
    cfg.max_iters = 6
    return cfg


def test_default_config_is_valid():
    cfg = sr.SystemConfig()
    assert sr.validation_errors(cfg) == []
    assert (cfg.M, cfg.N, cfg.L, cfg.K, cfg.Q) == (4, 40, 24, 4, 4)
    assert cfg.columns() == 8


def test_invalid_config_raises():
    cfg = sr.SystemConfig()
    cfg.a_max = 0.5
    with pytest.raises(sr.ConfigError):
        cfg.validate()


def test_dbm_round_trip():
    assert sr.dbm_to_watts(40.0) == pytest.approx(10.0)
    assert sr.watts_to_dbm(1e-10) == pytest.approx(-70.0)


def test_config_text_round_trip():
    cfg = small_config()
    assert sr.parse_config_text(sr.emit_config(cfg)) == cfg


def test_channels_deterministic_and_shaped():
    cfg = sr.SystemConfig()
    a = sr.generate_channel_set(cfg, sr.Rng(5))
    b = sr.generate_channel_set(cfg, sr.Rng(5))
    assert a.G.shape == (40, 4)
    assert len(a.h) == 4 and a.h[0].shape == (40,)
    assert a.d.shape == (24,)
    np.testing.assert_array_equal(a.G, b.G)


def test_power_matches_numpy():
    cfg = small_config()
    ch = sr.generate_channel_set(cfg, sr.Rng(3))
    rng = np.random.default_rng(0)
    W = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
    theta = 2.0 * np.exp(1j * rng.uniform(0, 2 * np.pi, 8))
    u = np.ones(4, dtype=complex) / 2.0
    bf = sr.BeamformerSet(W, theta, u)
    TG = np.diag(theta) @ ch.G
    expected = np.linalg.norm(W) ** 2 + np.linalg.norm(TG @ W) ** 2 + cfg.sigma_d2 * np.sum(np.abs(theta) ** 2)
    assert sr.total_power(cfg, ch, bf) == pytest.approx(expected, rel=1e-12)
    assert sr.total_power(cfg, ch, bf) <= sr.bounded_power(cfg, ch, bf) * (1 + 1e-12)


def test_receive_beamformer_beats_random():
    cfg = sr.SystemConfig()
    ch = sr.generate_channel_set(cfg, sr.Rng(9))
    theta = np.full(cfg.N, 3.0 + 0j)
    u = sr.optimal_receive_beamformer(cfg, ch.d, ch.c, theta)
    assert np.linalg.norm(u) == pytest.approx(1.0)
    best = sr.rayleigh_quotient(cfg, u, ch.d, ch.c, theta)
    rng = np.random.default_rng(1)
    for _ in range(50):
        v = rng.normal(size=cfg.L) + 1j * rng.normal(size=cfg.L)
        v /= np.linalg.norm(v)
        assert sr.rayleigh_quotient(cfg, v, ch.d, ch.c, theta) <= best * (1 + 1e-9)


def test_solve_small_instance():
    cfg = small_config()
    ch = sr.generate_channel_set(cfg, sr.Rng(2))
    res = sr.solve(cfg, ch, sr.Rng(2, 1))
    trace = res.gamma_r_trace
    assert len(trace) >= 2
    assert all(b >= a * (1 - 1e-6) for a, b in zip(trace, trace[1:]))
    assert res.feasibility.all_ok()
    again = sr.solve(cfg, ch, sr.Rng(2, 1))
    assert again.gamma_r_trace == trace
