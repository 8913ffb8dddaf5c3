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

#include "sarisac/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "sarisac/channel.hpp"
#include "sarisac/error.hpp"
#include "sarisac/experiment.hpp"
#include "sarisac/rx_beamformer.hpp"
#include "sarisac/surrogate.hpp"

namespace sarisac {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int draw_int(Rng& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

CVec cvec(Rng& rng, Eigen::Index n, double scale = 1.0) {
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = scale * rng.complex_normal();
    return v;
}

CMat cmat(Rng& rng, Eigen::Index r, Eigen::Index c, double scale = 1.0) {
    CMat m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i) m(i, j) = scale * rng.complex_normal();
    return m;
}

// Evaluation point: far away, near the expansion point, or a rescaled copy of it.
template <class T>
T around(Rng& rng, const T& x0, const T& fresh) {
    const double u = rng.uniform();
    if (u < 0.5) return fresh;
    if (u < 0.8) return x0 + std::pow(10.0, -6.0 * rng.uniform()) * fresh;
    return (0.1 + 3.0 * rng.uniform()) * x0;
}

std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

const LambdaVariant kVariants[] = {LambdaVariant::plus, LambdaVariant::minus, LambdaVariant::j,
                                   LambdaVariant::minus_j};

}  // namespace

CheckResult check_surrogate_bounds(int samples, std::uint64_t seed, double tol) {
    const auto start = Clock::now();
    Rng rng(seed);
    double omega_slack = 0.0, omega_tight = 0.0, lambda_slack = 0.0, lambda_tight = 0.0;
    for (int s = 0; s < samples; ++s) {
        const int N = draw_int(rng, 1, 12), M = draw_int(rng, 1, 4), J = draw_int(rng, 1, 6);
        const double mag = std::exp(1.5 * rng.normal());
        const CVec a = cvec(rng, N), x0 = cvec(rng, N, mag);
        const CMat B = cmat(rng, N, M), Y0 = cmat(rng, M, J);
        const CVec x = around(rng, x0, cvec(rng, N, mag));
        const CMat Y = around(rng, Y0, cmat(rng, M, J));

        const double truth0 = bilinear_norm2(a, B, x0, Y0);
        const double truth = bilinear_norm2(a, B, x, Y);
        const double om = omega_lower_bound(a, B, x, x0, Y, Y0);
        const double om0 = omega_lower_bound(a, B, x0, x0, Y0, Y0);
        const double scale = std::max({truth, truth0, 1e-300});
        omega_slack = std::min(omega_slack, (truth - om) / scale);
        omega_tight = std::max(omega_tight, std::abs(om0 - truth0) / std::max(truth0, 1e-300));

        const CVec y0 = Y0.col(0), y = Y.col(0);
        const cplx z0 = (a.cwiseProduct(x0)).transpose() * (B * y0);
        const cplx z = (a.cwiseProduct(x)).transpose() * (B * y);
        const auto l = lambda_slacks(a, B, x, x0, y, y0);
        const auto l0 = lambda_slacks(a, B, x0, x0, y0, y0);
        const double lscale = std::max({std::norm(z), std::norm(z0), 1e-300});
        // rho and kappa are only meaningful as nonnegative bounds when they dominate |Re| and |Im|
        const double rho = std::max(l.rho, 0.0), kappa = std::max(l.kappa, 0.0);
        lambda_slack = std::min(lambda_slack, (rho * rho + kappa * kappa - std::norm(z)) / lscale);
        lambda_slack = std::min(lambda_slack, (l.rho - std::abs(z.real())) / std::sqrt(lscale));
        lambda_slack = std::min(lambda_slack, (l.kappa - std::abs(z.imag())) / std::sqrt(lscale));
        lambda_tight = std::max(lambda_tight, std::abs(l0.rho * l0.rho + l0.kappa * l0.kappa - std::norm(z0)) /
                                                  std::max(std::norm(z0), 1e-300));
    }
    CheckResult r;
    r.name = "surrogate bounds";
    r.passed = omega_slack >= -tol && omega_tight <= tol && lambda_slack >= -tol && lambda_tight <= tol;
    r.detail = std::to_string(samples) + " samples: omega min slack " + sci(omega_slack) + ", tightness " +
               sci(omega_tight) + "; lambda min slack " + sci(lambda_slack) + ", tightness " + sci(lambda_tight);
    r.seconds = since(start);
    return r;
}

CheckResult check_receive_beamformer(int draws, int random_vectors, std::uint64_t seed, double quotient_slack,
                                     double alignment_slack) {
    const auto start = Clock::now();
    Rng rng(seed);
    double worst_gap = -1.0, worst_align = 1.0;
    for (int s = 0; s < draws; ++s) {
        const int L = draw_int(rng, 1, 24), N = draw_int(rng, 1, 40);
        const CVec d = cvec(rng, L, std::exp(rng.normal()));
        const CVec c = cvec(rng, N, std::exp(rng.normal()));
        const CVec theta = cvec(rng, N, 8.0 * rng.uniform());
        EchoNoise noise;
        noise.varsigma_t2 = std::exp(rng.normal());
        noise.sigma_d2 = std::exp(2.0 * rng.normal());
        noise.sigma_r2 = std::exp(2.0 * rng.normal());
        const CVec u = optimal_receive_beamformer(d, c, theta, noise);
        const double best = rayleigh_quotient(u, d, c, theta, noise);
        worst_align = std::min(worst_align, std::abs(u.dot(d)) / d.norm());
        for (int v = 0; v < random_vectors; ++v) {
            CVec w = cvec(rng, L);
            w /= w.norm();
            const double q = rayleigh_quotient(w, d, c, theta, noise);
            worst_gap = std::max(worst_gap, (q - best) / best);
        }
    }
    CheckResult r;
    r.name = "receive beamformer";
    r.passed = worst_gap <= quotient_slack && worst_align >= 1.0 - alignment_slack;
    r.detail = std::to_string(draws) + " draws x " + std::to_string(random_vectors) +
               " vectors: max relative excess of a random vector " + sci(worst_gap) + ", min alignment 1-" +
               sci(1.0 - worst_align);
    r.seconds = since(start);
    return r;
}

double SurrogateResiduals::max() const { return std::max({echo, noise, power, amplitude, interference, qos}); }

SurrogateResiduals surrogate_residuals(const SystemConfig& cfg, const ChannelSet& ch, const ExpansionPoint& exp,
                                       const Subproblem& sub, const RVec& x) {
    const auto& lay = sub.layout;
    const int M = cfg.M, K = cfg.K, J = cfg.columns();
    const BeamformerSet bf = decode_beamformers(sub, x, sub.u, M, J);
    const double t = exp.t0 * x(lay.t);
    const double q = exp.q0 * x(lay.q);
    SurrogateResiduals r;

    auto omega_balanced = [&](const CVec& a, const CMat& Y, const CMat& Y0) {
        const CVec v0 = ch.G.adjoint() * a.conjugate().cwiseProduct(exp.theta0.conjugate());
        const CVec y0b = Y0 * (Y0.adjoint() * v0);
        const double mu = (v0.norm() > 0.0 && y0b.norm() > 0.0) ? std::sqrt(v0.norm() / y0b.norm()) : 1.0;
        return omega_lower_bound(a, ch.G, bf.theta / mu, exp.theta0 / mu, mu * Y, mu * Y0);
    };

    r.echo = std::max(0.0, (t - omega_balanced(ch.c, bf.W, exp.W0)) / exp.t0);
    r.noise = std::max(0.0, (echo_noise_power(cfg, ch, bf) - q) / exp.q0);
    r.power = std::max(0.0, (bounded_power(cfg, ch, bf) - cfg.p_max) / cfg.p_max);
    r.amplitude = std::max(0.0, (bf.theta.cwiseAbs().maxCoeff() - cfg.a_max) / cfg.a_max);

    const double col_ref = std::sqrt(cfg.p_max) / std::sqrt(static_cast<double>(J));
    for (int k = 0; k < K; ++k) {
        const CMat HG = ch.h[k].asDiagonal() * ch.G;
        const cplx gain = (ch.h[k].cwiseProduct(exp.theta0)).transpose() * (ch.G * exp.W0.col(k));
        const double S = std::norm(gain);
        const double sk = lay.slack_scale[k];
        const double g_ref = HG.norm() * col_ref / std::sqrt(static_cast<double>(M));
        double interference = 0.0;
        for (int j = 0; j < J - 1; ++j) {
            const int i = lay.interferer[k * (J - 1) + j];
            const double tau = sk * x(lay.tau[k][j]);
            const double varpi = sk * x(lay.varpi[k][j]);
            const double ng = (HG * exp.W0.col(i)).norm();
            const double nu = exp.theta0.norm();
            const double gn = ng > 0.0 ? ng : g_ref;
            const double mu = (nu > 0.0 && gn > 0.0) ? std::sqrt(gn / nu) : 1.0;
            for (auto v : kVariants) {
                const double lam = lambda_value(ch.h[k], ch.G, mu * bf.theta, mu * exp.theta0, bf.W.col(i) / mu,
                                                exp.W0.col(i) / mu, v);
                const double slack = (v == LambdaVariant::plus || v == LambdaVariant::minus) ? tau : varpi;
                r.interference = std::max(r.interference, (lam - slack) / sk);
            }
            interference += tau * tau + varpi * varpi;
        }
        const double ris = cfg.sigma_d2 * ch.h[k].cwiseProduct(bf.theta).squaredNorm();
        const double signal = omega_balanced(ch.h[k], bf.W.col(k), exp.W0.col(k));
        r.qos = std::max(r.qos, (cfg.gamma[k] * (interference + ris + cfg.sigma_k2[k]) - signal) / S);
    }
    return r;
}

CheckResult check_subproblem_correctness(const SystemConfig& cfg, int points, std::uint64_t seed, double point_tol,
                                         double solution_tol, double solver_tolerance) {
    const auto start = Clock::now();
    double worst_point = 0.0, worst_point_prog = 0.0, worst_sol = 0.0, worst_sol_prog = 0.0;
    int solved = 0;
    std::ostringstream notes;
    for (int p = 0; p < points; ++p) {
        const Rng stream = Rng(seed).split(static_cast<std::uint64_t>(p));
        Rng ch_rng = stream.split(0), init_rng = stream.split(1);
        const ChannelSet ch = generate_channel_set(cfg, ch_rng);
        SolveOptions opts = SolveOptions::from(cfg);
        opts.init_strategy = p % 2 == 0 ? InitStrategy::random_phase : InitStrategy::mrt_scaled;
        InitialPoint ip;
        try {
            ip = initialize(cfg, ch, init_rng, opts);
        } catch (const InitializationFailure&) {
            notes << " point " << p << ": no feasible start;";
            continue;
        }
        // move off the initializer's structure with a couple of ascent steps on odd points
        BeamformerSet bf = ip.beamformers;
        if (p % 2 == 1) {
            opts.init_strategy = InitStrategy::warm_start;
            opts.warm_start = bf;
            opts.max_iters = 2;
            Rng r2 = stream.split(2);
            bf = run(cfg, ch, r2, opts).beamformers;
        }
        const ExpansionPoint exp = expansion_point(cfg, ch, bf);
        const Subproblem sub = build_subproblem(cfg, ch, bf.u, exp);
        const RVec x0 = encode_expansion_point(cfg, ch, sub, exp);
        worst_point = std::max(worst_point, surrogate_residuals(cfg, ch, exp, sub, x0).max());
        worst_point_prog = std::max(worst_point_prog, conic::constraint_violation(sub.program, x0).max());

        const auto sol = conic::solve(sub.program, solver_tolerance);
        if (sol.status != conic::SolveStatus::optimal) {
            notes << " point " << p << ": solver status " << conic::to_string(sol.status) << ";";
            worst_sol = std::max(worst_sol, 1.0);
            continue;
        }
        ++solved;
        worst_sol = std::max(worst_sol, surrogate_residuals(cfg, ch, exp, sub, sol.x).max());
        worst_sol_prog = std::max(worst_sol_prog, conic::constraint_violation(sub.program, sol.x).max());
    }
    CheckResult r;
    r.name = "subproblem correctness";
    r.passed = solved == points && worst_point <= point_tol && worst_point_prog <= point_tol &&
               worst_sol <= solution_tol && worst_sol_prog <= solution_tol;
    r.detail = std::to_string(solved) + "/" + std::to_string(points) + " solved; expansion-point residual " +
               sci(worst_point) + " (program rows " + sci(worst_point_prog) + "); optimum residual " +
               sci(worst_sol) + " (program rows " + sci(worst_sol_prog) + ")" + notes.str();
    r.seconds = since(start);
    return r;
}

std::vector<RunSummary> sca_run_summaries(const SystemConfig& cfg, int runs, std::uint64_t seed_base,
                                          double monotone_slack) {
    std::vector<RunSummary> out;
    const Variant v{"active", cfg.a_max, false};
    for (int i = 0; i < runs; ++i) {
        const TrialRecord rec = run_trial({cfg, v, 0.0, i}, seed_base, 1e-8);
        RunSummary s;
        s.seed = seed_base;
        s.iterations = rec.iterations;
        s.converged = rec.converged;
        s.feasible = rec.usable();
        s.stop_reason = rec.error.empty() ? rec.stop_reason : rec.error;
        s.seconds = rec.wall_time;
        s.monotone = !rec.gamma_r_trace.empty();
        for (std::size_t k = 1; k < rec.gamma_r_trace.size(); ++k) {
            const double prev = rec.gamma_r_trace[k - 1];
            const double drop = (prev - rec.gamma_r_trace[k]) / std::max(1.0, prev);
            s.worst_drop = std::max(s.worst_drop, drop);
        }
        s.monotone = s.monotone && s.worst_drop <= monotone_slack;
        if (!rec.gamma_r_trace.empty()) {
            s.first_db = to_db(rec.gamma_r_trace.front());
            s.final_db = to_db(rec.gamma_r_trace.back());
        }
        out.push_back(s);
    }
    return out;
}

}  // namespace sarisac
