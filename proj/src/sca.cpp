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

#include "sarisac/sca.hpp"

#include <Eigen/Cholesky>
#include <chrono>
#include <cmath>
#include <sstream>

#include "sarisac/error.hpp"
#include "sarisac/rx_beamformer.hpp"

namespace sarisac {

using conic::AffineExpr;
using conic::ComplexAffineVec;

namespace {

constexpr double pi = 3.14159265358979323846;

ComplexAffineVec column_expr(const conic::ComplexHandle& W, int M, int j) {
    ComplexAffineVec v(M);
    for (int m = 0; m < M; ++m) {
        v.re(m) = AffineExpr::variable(W.re(j * M + m), W.scale);
        v.im(m) = AffineExpr::variable(W.im(j * M + m), W.scale);
    }
    return v;
}

ComplexAffineVec offset(ComplexAffineVec v, const CVec& c) { return v.add_constant(-c); }

std::vector<AffineExpr> scaled(std::vector<AffineExpr> rows, double s) {
    for (auto& r : rows) r *= s;
    return rows;
}

void append(std::vector<AffineExpr>& dst, const std::vector<AffineExpr>& src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

// ‖Yᴴ v(θ)‖² >= value - ‖rest‖², v(θ) = Gᴴ diag(a*) θ*, tight at (θ0, Y0).
struct OmegaPieces {
    AffineExpr value;
    std::vector<AffineExpr> rest;
};

OmegaPieces omega_pieces(const CVec& a, const CMat& G, const ComplexAffineVec& theta_conj,
                         const CVec& theta0, const std::vector<ComplexAffineVec>& Y, const CMat& Y0) {
    const CMat Va = G.adjoint() * a.conjugate().asDiagonal();
    const ComplexAffineVec v = Va * theta_conj;
    const CVec v0 = Va * theta0.conjugate();
    const CVec b = Y0.adjoint() * v0;
    const CVec y0b = Y0 * b;

    ComplexAffineVec yb(static_cast<int>(G.cols()));
    for (int j = 0; j < static_cast<int>(Y.size()); ++j) {
        ComplexAffineVec col = Y[j];
        col *= b(j);
        yb += col;
    }
    const double nv = v0.norm(), ny = y0b.norm();
    const double mu = (nv > 0.0 && ny > 0.0) ? std::sqrt(nv / ny) : 1.0;

    OmegaPieces out;
    out.value = 2.0 * yb.real_inner(v0) + 2.0 * v.real_inner(y0b);
    out.value.add_constant(-3.0 * b.squaredNorm());
    ComplexAffineVec delta = offset(yb, y0b);
    delta *= mu / std::sqrt(2.0);
    ComplexAffineVec dv = offset(v, v0);
    dv *= 1.0 / (mu * std::sqrt(2.0));
    delta -= dv;
    out.rest = delta.compact().flatten();
    return out;
}

// Re{uᴴg} <= value + ‖rest‖² with u = θ*, g = diag(h) G y, tight at (θ0, y0).
struct LambdaPieces {
    AffineExpr value;
    std::vector<AffineExpr> rest;
};

LambdaPieces lambda_pieces(const ComplexAffineVec& u, const CVec& u0, const ComplexAffineVec& g,
                           const CVec& g0, double g_ref) {
    const double nu = u0.norm();
    const double ng = g0.norm() > 0.0 ? g0.norm() : g_ref;
    const double mu = (nu > 0.0 && ng > 0.0) ? std::sqrt(ng / nu) : 1.0;

    LambdaPieces out;
    out.value = g.real_inner(u0) + u.real_inner(g0);
    out.value.add_constant(-u0.dot(g0).real());
    ComplexAffineVec q = offset(u, u0);
    q *= 0.5 * mu;
    ComplexAffineVec dg = offset(g, g0);
    dg *= 0.5 / mu;
    q += dg;
    out.rest = q.compact().flatten();
    return out;
}

cplx variant_factor(LambdaVariant v) {
    switch (v) {
        case LambdaVariant::plus: return {1.0, 0.0};
        case LambdaVariant::minus: return {-1.0, 0.0};
        case LambdaVariant::j: return {0.0, 1.0};
        case LambdaVariant::minus_j: return {0.0, -1.0};
    }
    return {1.0, 0.0};
}

cplx cascade(const CVec& a, const CVec& theta, const CMat& G, const CVec& w) {
    return (a.cwiseProduct(theta)).transpose() * (G * w);
}

double user_signal(const ChannelSet& ch, const CVec& theta, const CMat& W, int k) {
    return std::norm(cascade(ch.h[k], theta, ch.G, W.col(k)));
}

}  // namespace

// ---- options ---------------------------------------------------------------

SolveOptions SolveOptions::from(const SystemConfig& cfg) {
    SolveOptions o;
    o.epsilon = cfg.epsilon;
    o.max_iters = cfg.max_iters;
    return o;
}

void SolveOptions::validate() const {
    if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be > 0");
    if (max_iters < 1) throw InvalidInput("max_iters must be >= 1");
    if (!(solver_tolerance > 0.0)) throw InvalidInput("solver_tolerance must be > 0");
    if (max_init_attempts < 1) throw InvalidInput("max_init_attempts must be >= 1");
    if (init_strategy == InitStrategy::warm_start && !warm_start)
        throw InvalidInput("warm_start strategy needs a beamformer set");
}

ExpansionPoint expansion_point(const SystemConfig& cfg, const ChannelSet& ch, const BeamformerSet& bf) {
    ExpansionPoint e;
    e.theta0 = bf.theta;
    e.W0 = bf.W;
    e.t0 = echo_signal_power(ch, bf);
    e.q0 = echo_noise_power(cfg, ch, bf);
    return e;
}

// ---- subproblem ------------------------------------------------------------

Subproblem build_subproblem(const SystemConfig& cfg, const ChannelSet& ch, const CVec& u,
                            const ExpansionPoint& exp) {
    const int M = cfg.M, N = cfg.N, K = cfg.K, J = cfg.columns();
    BeamformerSet probe{exp.W0, exp.theta0, u};
    check_dimensions(cfg, ch, probe);
    if (!(exp.t0 > 0.0) || !(exp.q0 > 0.0) || !std::isfinite(exp.t0) || !std::isfinite(exp.q0))
        throw InvalidInput("expansion point needs t0 > 0 and q0 > 0");

    Subproblem sub;
    sub.u = u;
    auto& prog = sub.program;
    auto& lay = sub.layout;
    const double sqrt_p = std::sqrt(cfg.p_max);
    lay.W = conic::add_complex_variable(prog, M * J, "W", sqrt_p);
    lay.theta = conic::add_complex_variable(prog, N, "theta", cfg.a_max);
    lay.t = prog.add_variable("t");
    lay.q = prog.add_variable("q");
    lay.tau.assign(K, {});
    lay.varpi.assign(K, {});
    for (int k = 0; k < K; ++k) {
        for (int i = 0; i < J; ++i) {
            if (i == k) continue;
            const std::string tag = "[" + std::to_string(k) + "," + std::to_string(i) + "]";
            lay.tau[k].push_back(prog.add_variable("tau" + tag));
            lay.varpi[k].push_back(prog.add_variable("varpi" + tag));
            lay.interferer.push_back(i);
        }
    }

    const ComplexAffineVec theta = ComplexAffineVec::variable(lay.theta);
    const ComplexAffineVec theta_conj = ComplexAffineVec::variable(lay.theta, true);
    std::vector<ComplexAffineVec> cols;
    for (int j = 0; j < J; ++j) cols.push_back(column_expr(lay.W, M, j));

    const AffineExpr t = AffineExpr::variable(lay.t);
    const AffineExpr q = AffineExpr::variable(lay.q);
    sub.objective_scale = exp.t0;
    prog.set_objective(t - q);

    // echo signal: t0·t ≤ Ω_c
    {
        const OmegaPieces om = omega_pieces(ch.c, ch.G, theta_conj, exp.theta0, cols, exp.W0);
        conic::add_squared_norm_epigraph(prog, scaled(om.rest, 1.0 / std::sqrt(exp.t0)),
                                         (1.0 / exp.t0) * om.value - t);
    }

    // echo noise: q0·q ≥ ς²σ_d²|uᴴd|²‖c∘θ‖² + σ_r²
    {
        const double ud2 = std::norm(u.dot(ch.d));
        const double w = std::sqrt(cfg.varsigma_t2 * cfg.sigma_d2 * ud2 / exp.q0);
        ComplexAffineVec e = conic::diag_mul(ch.c, theta);
        e *= w;
        conic::add_squared_norm_epigraph(prog, e, q - AffineExpr(cfg.sigma_r2 / exp.q0));
    }

    // power: ‖W‖² + a²‖GW‖² + σ_d²‖θ‖² ≤ P
    {
        CMat gram = cfg.a_max * cfg.a_max * (ch.G.adjoint() * ch.G);
        gram.diagonal().array() += 1.0;
        const CMat R = Eigen::LLT<CMat>(gram).matrixU();
        std::vector<AffineExpr> rows;
        for (int j = 0; j < J; ++j) append(rows, (R * cols[j]).flatten());
        ComplexAffineVec th = theta;
        th *= std::sqrt(cfg.sigma_d2);
        append(rows, th.flatten());
        conic::add_squared_norm_epigraph(prog, scaled(rows, 1.0 / sqrt_p), AffineExpr(1.0));
    }

    // amplitudes
    for (int n = 0; n < N; ++n)
        prog.add_soc({AffineExpr::variable(lay.theta.re(n)), AffineExpr::variable(lay.theta.im(n))},
                     AffineExpr(1.0));

    // interference majorants and QoS
    const CVec u0 = exp.theta0.conjugate();
    const double col_ref = sqrt_p / std::sqrt(static_cast<double>(J));
    lay.slack_scale.assign(K, 1.0);
    for (int k = 0; k < K; ++k) {
        const double gamma = cfg.gamma[k];
        const double S = user_signal(ch, exp.theta0, exp.W0, k);
        if (!(S > 0.0)) throw InvalidInput("expansion point has zero signal for a user");
        const double sk = std::sqrt(S / gamma);
        lay.slack_scale[k] = sk;

        const CMat HG = ch.h[k].asDiagonal() * ch.G;
        const double g_ref = HG.norm() * col_ref / std::sqrt(static_cast<double>(M));
        std::vector<AffineExpr> qos_rows;
        for (int j = 0; j < J - 1; ++j) {
            const int i = lay.interferer[k * (J - 1) + j];
            const ComplexAffineVec g_base = HG * cols[i];
            const CVec g0_base = HG * exp.W0.col(i);
            for (auto v : {LambdaVariant::plus, LambdaVariant::minus, LambdaVariant::j, LambdaVariant::minus_j}) {
                const cplx s = variant_factor(v);
                ComplexAffineVec g = g_base;
                g *= s;
                const LambdaPieces lp = lambda_pieces(theta_conj, u0, g, s * g0_base, g_ref);
                const int slack = (v == LambdaVariant::plus || v == LambdaVariant::minus) ? lay.tau[k][j]
                                                                                          : lay.varpi[k][j];
                conic::add_squared_norm_epigraph(prog, scaled(lp.rest, 1.0 / std::sqrt(sk)),
                                                 AffineExpr::variable(slack) - (1.0 / sk) * lp.value);
            }
            qos_rows.push_back(AffineExpr::variable(lay.tau[k][j]));
            qos_rows.push_back(AffineExpr::variable(lay.varpi[k][j]));
        }
        ComplexAffineVec hn = conic::diag_mul(ch.h[k], theta);
        hn *= std::sqrt(gamma * cfg.sigma_d2 / S);
        append(qos_rows, hn.flatten());
        const OmegaPieces om = omega_pieces(ch.h[k], ch.G, theta_conj, exp.theta0, {cols[k]},
                                            CMat(exp.W0.col(k)));
        append(qos_rows, scaled(om.rest, 1.0 / std::sqrt(S)));
        AffineExpr upper = (1.0 / S) * om.value;
        upper.add_constant(-gamma * cfg.sigma_k2[k] / S);
        conic::add_squared_norm_epigraph(prog, qos_rows, upper);
    }
    return sub;
}

RVec encode_expansion_point(const SystemConfig& cfg, const ChannelSet& ch, const Subproblem& sub,
                            const ExpansionPoint& exp) {
    const auto& lay = sub.layout;
    const int M = cfg.M, K = cfg.K, J = cfg.columns();
    RVec x = RVec::Zero(sub.program.num_vars);
    conic::encode(lay.W, Eigen::Map<const CVec>(exp.W0.data(), M * J), x);
    conic::encode(lay.theta, exp.theta0, x);
    const BeamformerSet bf{exp.W0, exp.theta0, sub.u};
    x(lay.t) = echo_signal_power(ch, bf) / exp.t0;
    x(lay.q) = echo_noise_power(cfg, ch, bf) / exp.q0;
    for (int k = 0; k < K; ++k) {
        for (int j = 0; j < J - 1; ++j) {
            const int i = lay.interferer[k * (J - 1) + j];
            const cplx v = cascade(ch.h[k], exp.theta0, ch.G, exp.W0.col(i));
            x(lay.tau[k][j]) = std::abs(v.real()) / lay.slack_scale[k];
            x(lay.varpi[k][j]) = std::abs(v.imag()) / lay.slack_scale[k];
        }
    }
    return x;
}

BeamformerSet decode_beamformers(const Subproblem& sub, const RVec& x, const CVec& u, int M, int columns) {
    BeamformerSet bf;
    const CVec w = conic::decode(sub.layout.W, x);
    bf.W = Eigen::Map<const CMat>(w.data(), M, columns);
    bf.theta = conic::decode(sub.layout.theta, x);
    bf.u = u;
    return bf;
}

// ---- initialization --------------------------------------------------------

namespace {

CMat power_factor(const SystemConfig& cfg, const ChannelSet& ch) {
    CMat gram = cfg.a_max * cfg.a_max * (ch.G.adjoint() * ch.G);
    gram.diagonal().array() += 1.0;
    return Eigen::LLT<CMat>(gram).matrixU();
}

// Zero-forcing communication columns, matched radar columns and the largest
// radar share that keeps every SINR target and the conservative power bound.
std::optional<CMat> beamformers_for(const SystemConfig& cfg, const ChannelSet& ch, const CVec& theta) {
    const int M = cfg.M, K = cfg.K, Q = cfg.Q;
    CMat H(K, M);
    for (int k = 0; k < K; ++k) H.row(k) = (ch.h[k].cwiseProduct(theta)).transpose() * ch.G;
    CMat HHt = H * H.adjoint();
    const double reg = 1e-10 * std::max(HHt.diagonal().real().maxCoeff(), 1e-300);
    HHt.diagonal().array() += reg;
    CMat F = H.adjoint() * HHt.ldlt().solve(CMat::Identity(K, K));
    for (int k = 0; k < K; ++k) {
        const double nf = F.col(k).norm();
        if (!(nf > 0.0) || !std::isfinite(nf)) return std::nullopt;
        F.col(k) /= nf;
    }
    CVec r = (ch.G.transpose() * ch.c.cwiseProduct(theta)).conjugate();
    if (!(r.norm() > 0.0)) return std::nullopt;
    r /= r.norm();

    const CMat R = power_factor(cfg, ch);
    const double margin = 1e-3;
    RMat gains(K, K);
    RVec radar_gain(K), noise(K);
    for (int k = 0; k < K; ++k) {
        for (int i = 0; i < K; ++i) gains(k, i) = std::norm(H.row(k).dot(F.col(i).conjugate()));
        radar_gain(k) = std::norm((H.row(k) * r)(0));
        noise(k) = cfg.sigma_d2 * ch.h[k].cwiseProduct(theta).squaredNorm() + cfg.sigma_k2[k];
    }
    RVec fcost(K);
    for (int k = 0; k < K; ++k) fcost(k) = (R * F.col(k)).squaredNorm();
    const double rcost = (R * r).squaredNorm();
    const double static_power = cfg.sigma_d2 * theta.squaredNorm();
    const double budget = cfg.p_max * (1.0 - 1e-4);

    auto comm_powers = [&](double pr) -> std::optional<RVec> {
        RMat A(K, K);
        RVec rhs(K);
        for (int k = 0; k < K; ++k) {
            for (int i = 0; i < K; ++i) A(k, i) = -gains(k, i);
            A(k, k) = gains(k, k) / (cfg.gamma[k] * (1.0 + margin));
            rhs(k) = pr * radar_gain(k) + noise(k);
        }
        const RVec p = A.partialPivLu().solve(rhs);
        if (!p.allFinite() || (p.array() <= 0.0).any()) return std::nullopt;
        if (p.dot(fcost) + pr * rcost + static_power > budget) return std::nullopt;
        return p;
    };

    double lo = cfg.p_max * 1e-9 / rcost, hi = cfg.p_max / rcost;
    if (!comm_powers(lo)) return std::nullopt;
    if (comm_powers(hi)) lo = hi;
    for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (comm_powers(mid))
            lo = mid;
        else
            hi = mid;
    }
    const RVec p = *comm_powers(lo);
    CMat W(M, K + Q);
    for (int k = 0; k < K; ++k) W.col(k) = std::sqrt(p(k)) * F.col(k);
    for (int j = 0; j < Q; ++j) W.col(K + j) = std::sqrt(lo / Q) * r;
    return W;
}

CVec target_aligned_phases(const SystemConfig& cfg, const ChannelSet& ch) {
    Eigen::JacobiSVD<CMat> svd(ch.c.asDiagonal() * ch.G, Eigen::ComputeThinV);
    CVec w = svd.matrixV().col(0);
    CVec theta(cfg.N);
    for (int it = 0; it < 10; ++it) {
        const CVec cg = ch.c.cwiseProduct(ch.G * w);
        for (int n = 0; n < cfg.N; ++n) theta(n) = cfg.a_max * std::polar(1.0, -std::arg(cg(n)));
        w = (ch.G.transpose() * ch.c.cwiseProduct(theta)).conjugate();
        w /= w.norm();
    }
    return theta;
}

CVec random_phases(const SystemConfig& cfg, Rng& rng) {
    CVec theta(cfg.N);
    for (int n = 0; n < cfg.N; ++n) theta(n) = cfg.a_max * std::polar(1.0, 2.0 * pi * rng.uniform());
    return theta;
}

}  // namespace

InitialPoint initialize(const SystemConfig& cfg, const ChannelSet& ch, Rng& rng, const SolveOptions& opts) {
    cfg.validate();
    opts.validate();
    const EchoNoise noise = EchoNoise::from(cfg);
    InitialPoint out;

    auto finalize = [&](BeamformerSet bf, bool keep_u) -> std::optional<InitialPoint> {
        if (!keep_u || bf.u.size() != cfg.L) bf.u = optimal_receive_beamformer(ch.d, ch.c, bf.theta, noise);
        check_dimensions(cfg, ch, bf);
        if (!check_feasibility(cfg, ch, bf).all_ok()) return std::nullopt;
        if (bounded_power(cfg, ch, bf) > cfg.p_max) return std::nullopt;
        InitialPoint ip;
        ip.t0 = echo_signal_power(ch, bf);
        ip.q0 = echo_noise_power(cfg, ch, bf);
        if (!(ip.t0 > 0.0)) return std::nullopt;
        ip.beamformers = std::move(bf);
        return ip;
    };

    if (opts.init_strategy == InitStrategy::warm_start) {
        auto ip = finalize(*opts.warm_start, true);
        if (!ip) throw InitializationFailure("warm start is not feasible");
        ip->attempts = 1;
        return *ip;
    }

    std::ostringstream diag;
    const int attempts = opts.infeasible_policy == InfeasiblePolicy::resample_init ? opts.max_init_attempts : 1;
    for (int a = 0; a < attempts; ++a) {
        CVec theta = (a == 0 && opts.init_strategy == InitStrategy::mrt_scaled) ? target_aligned_phases(cfg, ch)
                                                                                 : random_phases(cfg, rng);
        const auto W = beamformers_for(cfg, ch, theta);
        if (!W) {
            diag << " attempt " << a + 1 << ": no power allocation meets the SINR targets;";
            continue;
        }
        auto ip = finalize(BeamformerSet{*W, theta, CVec()}, false);
        if (!ip) {
            diag << " attempt " << a + 1 << ": start failed the feasibility check;";
            continue;
        }
        ip->attempts = a + 1;
        return *ip;
    }
    throw InitializationFailure("no feasible starting point after " + std::to_string(attempts) +
                                " attempt(s):" + diag.str());
}

// ---- Algorithm loop --------------------------------------------------------

SolveResult run(const SystemConfig& cfg, const ChannelSet& ch, Rng& rng, const SolveOptions& opts) {
    opts.validate();
    const InitialPoint init = initialize(cfg, ch, rng, opts);
    SolveResult res;
    res.init_attempts = init.attempts;
    BeamformerSet bf = init.beamformers;
    const CVec u = bf.u;
    double gamma = radar_snr(cfg, ch, bf);
    res.gamma_r_trace.push_back(gamma);
    res.stop_reason = "max_iters";

    int flat = 0;
    for (int it = 0; it < opts.max_iters; ++it) {
        const ExpansionPoint exp = expansion_point(cfg, ch, bf);
        const Subproblem sub = build_subproblem(cfg, ch, u, exp);

        const auto t_start = std::chrono::steady_clock::now();
        conic::ConicSolution sol = conic::solve(sub.program, opts.solver_tolerance);
        if (sol.status != conic::SolveStatus::optimal)
            sol = conic::solve(sub.program, 0.1 * opts.solver_tolerance);
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

        if (sol.status != conic::SolveStatus::optimal) {
            res.stop_reason = "subproblem_" + conic::to_string(sol.status);
            break;
        }
        BeamformerSet cand = decode_beamformers(sub, sol.x, u, cfg.M, cfg.columns());
        const FeasibilityReport rep = check_feasibility(cfg, ch, cand);
        const double g_new = radar_snr(cfg, ch, cand);
        if (!rep.all_ok()) {
            res.stop_reason = "iterate_infeasible";
            break;
        }
        if (!(g_new >= gamma - 1e-6 * std::max(1.0, gamma))) {
            res.stop_reason = "objective_decrease";
            break;
        }
        bf = std::move(cand);
        res.gamma_r_trace.push_back(g_new);
        res.subproblem_times.push_back(elapsed);
        res.solver_iterations.push_back(sol.solver_iterations);
        res.surrogate_trace.push_back(sol.objective_value * sub.objective_scale);
        res.iterations = it + 1;

        const double change = std::abs(g_new - gamma);
        gamma = g_new;
        if (change <= opts.epsilon) {
            res.converged = true;
            res.stop_reason = "converged";
            break;
        }
        flat = sol.objective_value <= opts.solver_tolerance ? flat + 1 : 0;
        if (flat >= 3) {
            res.stop_reason = "stalled";
            break;
        }
    }
    res.beamformers = bf;
    res.feasibility = check_feasibility(cfg, ch, bf);
    return res;
}

}  // namespace sarisac
