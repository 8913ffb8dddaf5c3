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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "sarisac/channel.hpp"
#include "sarisac/config_io.hpp"
#include "sarisac/conic.hpp"
#include "sarisac/core_model.hpp"
#include "sarisac/error.hpp"
#include "sarisac/rx_beamformer.hpp"
#include "sarisac/sca.hpp"

namespace py = pybind11;
using namespace sarisac;

PYBIND11_MODULE(_sarisac, m) {
    m.doc() = "Beamforming design for ISAC with a sensor-aided active RIS";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<InvalidInput>(m, "InvalidInput", base.ptr());
    py::register_exception<DegenerateTarget>(m, "DegenerateTarget", base.ptr());
    py::register_exception<InitializationFailure>(m, "InitializationFailure", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::class_<Grid>(m, "Grid")
        .def(py::init<>())
        .def(py::init([](int r, int c) { return Grid{r, c}; }))
        .def_readwrite("rows", &Grid::rows)
        .def_readwrite("cols", &Grid::cols)
        .def("size", &Grid::size);

    py::class_<GeometryConfig>(m, "GeometryConfig")
        .def(py::init<>())
        .def_readwrite("bs_pos", &GeometryConfig::bs_pos)
        .def_readwrite("ris_pos", &GeometryConfig::ris_pos)
        .def_readwrite("user_center", &GeometryConfig::user_center)
        .def_readwrite("user_radius", &GeometryConfig::user_radius)
        .def_readwrite("target_range", &GeometryConfig::target_range)
        .def_readwrite("target_azimuth_deg", &GeometryConfig::target_azimuth_deg)
        .def_readwrite("target_elevation_deg", &GeometryConfig::target_elevation_deg)
        .def_readwrite("reflector_grid", &GeometryConfig::reflector_grid)
        .def_readwrite("sensor_grid", &GeometryConfig::sensor_grid)
        .def_readwrite("element_spacing", &GeometryConfig::element_spacing);

    py::class_<ChannelStatsConfig>(m, "ChannelStatsConfig")
        .def(py::init<>())
        .def_readwrite("rician_k_db", &ChannelStatsConfig::rician_k_db)
        .def_readwrite("pathloss_exponent_nlos", &ChannelStatsConfig::pathloss_exponent_nlos)
        .def_readwrite("pathloss_exponent_los", &ChannelStatsConfig::pathloss_exponent_los)
        .def_readwrite("ref_pathloss_db", &ChannelStatsConfig::ref_pathloss_db)
        .def_readwrite("seed", &ChannelStatsConfig::seed);

    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init<>())
        .def_readwrite("M", &SystemConfig::M)
        .def_readwrite("N", &SystemConfig::N)
        .def_readwrite("L", &SystemConfig::L)
        .def_readwrite("K", &SystemConfig::K)
        .def_readwrite("Q", &SystemConfig::Q)
        .def_readwrite("p_max", &SystemConfig::p_max)
        .def_readwrite("gamma", &SystemConfig::gamma)
        .def_readwrite("a_max", &SystemConfig::a_max)
        .def_readwrite("sigma_d2", &SystemConfig::sigma_d2)
        .def_readwrite("sigma_r2", &SystemConfig::sigma_r2)
        .def_readwrite("sigma_k2", &SystemConfig::sigma_k2)
        .def_readwrite("varsigma_t2", &SystemConfig::varsigma_t2)
        .def_readwrite("epsilon", &SystemConfig::epsilon)
        .def_readwrite("max_iters", &SystemConfig::max_iters)
        .def_readwrite("geometry", &SystemConfig::geometry)
        .def_readwrite("channel_stats", &SystemConfig::channel_stats)
        .def("columns", &SystemConfig::columns)
        .def("validate", &SystemConfig::validate)
        .def("with_elements", &SystemConfig::with_elements, py::arg("n_reflect"), py::arg("n_sensor"))
        .def("with_users", &SystemConfig::with_users, py::arg("k"), py::arg("gamma_linear"))
        .def("__eq__", [](const SystemConfig& a, const SystemConfig& b) { return a == b; });

    m.def("validation_errors", &validation_errors);
    m.def("most_square_grid", &most_square_grid);

    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream") = 0)
        .def("split", &Rng::split)
        .def("uniform", &Rng::uniform)
        .def("normal", &Rng::normal)
        .def("complex_normal", &Rng::complex_normal);

    py::class_<ChannelSet>(m, "ChannelSet")
        .def(py::init<>())
        .def_readwrite("G", &ChannelSet::G)
        .def_readwrite("h", &ChannelSet::h)
        .def_readwrite("c", &ChannelSet::c)
        .def_readwrite("d", &ChannelSet::d);

    py::class_<BeamformerSet>(m, "BeamformerSet")
        .def(py::init<>())
        .def(py::init([](CMat W, CVec theta, CVec u) { return BeamformerSet{std::move(W), std::move(theta), std::move(u)}; }),
             py::arg("W"), py::arg("theta"), py::arg("u"))
        .def_readwrite("W", &BeamformerSet::W)
        .def_readwrite("theta", &BeamformerSet::theta)
        .def_readwrite("u", &BeamformerSet::u);

    m.def("generate_channel_set", &generate_channel_set, py::arg("cfg"), py::arg("rng"));
    m.def("steering_vector", &steering_vector);
    m.def("path_loss", &path_loss);

    m.def("user_sinr", &user_sinr);
    m.def("radar_snr", &radar_snr);
    m.def("total_power", &total_power);
    m.def("bounded_power", &bounded_power);

    py::class_<FeasibilityReport>(m, "FeasibilityReport")
        .def_readonly("power_used", &FeasibilityReport::power_used)
        .def_readonly("power_margin", &FeasibilityReport::power_margin)
        .def_readonly("sinr_db", &FeasibilityReport::sinr_db)
        .def_readonly("sinr_margin_db", &FeasibilityReport::sinr_margin_db)
        .def_readonly("max_amp", &FeasibilityReport::max_amp)
        .def("all_ok", &FeasibilityReport::all_ok);
    m.def("check_feasibility", [](const SystemConfig& cfg, const ChannelSet& ch, const BeamformerSet& bf) {
        return check_feasibility(cfg, ch, bf, FeasibilityTolerances{});
    });

    m.def("optimal_receive_beamformer", [](const SystemConfig& cfg, const CVec& d, const CVec& c, const CVec& theta) {
        return optimal_receive_beamformer(d, c, theta, EchoNoise::from(cfg));
    });
    m.def("rayleigh_quotient", [](const SystemConfig& cfg, const CVec& u, const CVec& d, const CVec& c, const CVec& theta) {
        return rayleigh_quotient(u, d, c, theta, EchoNoise::from(cfg));
    });

    py::class_<SolveResult>(m, "SolveResult")
        .def_readonly("beamformers", &SolveResult::beamformers)
        .def_readonly("gamma_r_trace", &SolveResult::gamma_r_trace)
        .def_readonly("iterations", &SolveResult::iterations)
        .def_readonly("converged", &SolveResult::converged)
        .def_readonly("feasibility", &SolveResult::feasibility)
        .def_readonly("stop_reason", &SolveResult::stop_reason)
        .def_readonly("surrogate_trace", &SolveResult::surrogate_trace);

    m.def(
        "solve",
        [](const SystemConfig& cfg, const ChannelSet& ch, Rng& rng, std::optional<int> max_iters,
           std::optional<double> epsilon) {
            SolveOptions opts = SolveOptions::from(cfg);
            if (max_iters) opts.max_iters = *max_iters;
            if (epsilon) opts.epsilon = *epsilon;
            py::gil_scoped_release release;
            return run(cfg, ch, rng, opts);
        },
        py::arg("cfg"), py::arg("channels"), py::arg("rng"), py::arg("max_iters") = py::none(),
        py::arg("epsilon") = py::none());

    // First SCA subproblem from a feasible start, as text in the conic interchange format.
    m.def(
        "first_subproblem",
        [](const SystemConfig& cfg, const ChannelSet& ch, Rng& rng) {
            const auto opts = SolveOptions::from(cfg);
            const auto init = initialize(cfg, ch, rng, opts);
            const auto exp = expansion_point(cfg, ch, init.beamformers);
            const CVec u = optimal_receive_beamformer(ch.d, ch.c, init.beamformers.theta, EchoNoise::from(cfg));
            const auto sub = build_subproblem(cfg, ch, u, exp);
            std::ostringstream os;
            conic::write_program(os, sub.program);
            const auto sol = conic::solve(sub.program, opts.solver_tolerance);
            return py::make_tuple(os.str(), sol.objective_value, conic::to_string(sol.status));
        },
        py::arg("cfg"), py::arg("channels"), py::arg("rng"));

    m.def("parse_config_text", [](const std::string& text) { return parse_config_text(text).system; });
    m.def("emit_config", [](const SystemConfig& cfg) {
        ParsedConfig pc;
        pc.system = cfg;
        return emit_config(pc);
    });
    m.def("dbm_to_watts", &dbm_to_watts);
    m.def("watts_to_dbm", &watts_to_dbm);
}
