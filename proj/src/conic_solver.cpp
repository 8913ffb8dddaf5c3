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

// Primal-dual interior-point method on the homogeneous self-dual embedding of
//
//   minimize cᵀx  s.t.  A x = b,  G x + s = h,  s ∈ R₊ˡ × Q₁ × ... × Q_k
//
// with Nesterov-Todd scaling and Mehrotra predictor-corrector steps. The
// Newton systems are reduced to the n×n normal matrix H = Gᵀ W⁻² G, which is
// assembled cone by cone from the per-cone constant GᵀJG and a rank-one term.

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/SparseCore>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "sarisac/conic.hpp"
#include "sarisac/error.hpp"

namespace sarisac::conic {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct Block {
    bool soc = false;
    int offset = 0;
    int rows = 0;
    std::vector<int> cols;  // sorted support
    SpMat G;                // rows x cols.size()
    RMat P;                 // GᵀJG for cones
};

struct Standard {
    int n = 0;
    int p = 0;
    int m = 0;
    int degree = 0;
    RVec c;
    RMat A;
    RVec b;
    RVec h;
    std::vector<Block> blocks;
    RVec col_scale;
    RVec eq_scale;
    RVec row_scale;  // length m
};

// Scaling data per block.
struct Scaling {
    RVec d;       // LP: sqrt(s/z)
    double beta = 1.0;
    RVec w;       // cone: w̄
};

void add_support(std::vector<int>& cols, const SparseRow& row) {
    for (const auto& t : row) cols.push_back(t.var);
}

Block make_block(bool soc, int offset, const std::vector<const SparseRow*>& rows,
                 const std::vector<double>& signs) {
    Block blk;
    blk.soc = soc;
    blk.offset = offset;
    blk.rows = static_cast<int>(rows.size());
    for (const auto* r : rows) add_support(blk.cols, *r);
    std::sort(blk.cols.begin(), blk.cols.end());
    blk.cols.erase(std::unique(blk.cols.begin(), blk.cols.end()), blk.cols.end());
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < blk.rows; ++i) {
        for (const auto& t : *rows[i]) {
            const auto it = std::lower_bound(blk.cols.begin(), blk.cols.end(), t.var);
            trip.emplace_back(i, static_cast<int>(it - blk.cols.begin()), signs[i] * t.coef);
        }
    }
    blk.G.resize(blk.rows, static_cast<Eigen::Index>(blk.cols.size()));
    blk.G.setFromTriplets(trip.begin(), trip.end());
    blk.G.prune(0.0);
    return blk;
}

Standard to_standard(const ConicProgram& prog) {
    Standard sp;
    sp.n = prog.num_vars;
    sp.p = static_cast<int>(prog.eq_constraints.size());
    sp.c = RVec::Zero(sp.n);
    for (const auto& t : prog.objective) sp.c(t.var) -= t.coef;

    sp.A = RMat::Zero(sp.p, sp.n);
    sp.b = RVec::Zero(sp.p);
    for (int i = 0; i < sp.p; ++i) {
        for (const auto& t : prog.eq_constraints[i].row) sp.A(i, t.var) += t.coef;
        sp.b(i) = prog.eq_constraints[i].rhs;
    }

    std::vector<double> h;
    int offset = 0;
    if (!prog.ineq_constraints.empty()) {
        std::vector<const SparseRow*> rows;
        std::vector<double> signs;
        for (const auto& c : prog.ineq_constraints) {
            rows.push_back(&c.row);
            signs.push_back(1.0);
            h.push_back(c.rhs);
        }
        sp.blocks.push_back(make_block(false, offset, rows, signs));
        offset += static_cast<int>(rows.size());
        sp.degree += static_cast<int>(rows.size());
    }
    for (const auto& s : prog.soc_constraints) {
        std::vector<const SparseRow*> rows{&s.c};
        std::vector<double> signs{-1.0};
        h.push_back(s.e);
        for (std::size_t r = 0; r < s.A.size(); ++r) {
            rows.push_back(&s.A[r]);
            signs.push_back(-1.0);
            h.push_back(s.b[r]);
        }
        sp.blocks.push_back(make_block(true, offset, rows, signs));
        offset += static_cast<int>(rows.size());
        sp.degree += 1;
    }
    sp.m = offset;
    sp.h = Eigen::Map<RVec>(h.data(), static_cast<Eigen::Index>(h.size()));
    sp.col_scale = RVec::Ones(sp.n);
    sp.eq_scale = RVec::Ones(sp.p);
    sp.row_scale = RVec::Ones(sp.m);
    return sp;
}

// Ruiz equilibration; cone rows share one scale factor.
void equilibrate(Standard& sp, int passes) {
    auto inv_sqrt = [](double v) { return v > 0.0 ? 1.0 / std::sqrt(v) : 1.0; };
    for (int pass = 0; pass < passes; ++pass) {
        RVec colmax = RVec::Zero(sp.n);
        for (int i = 0; i < sp.p; ++i)
            for (int j = 0; j < sp.n; ++j) colmax(j) = std::max(colmax(j), std::abs(sp.A(i, j)));
        for (const auto& blk : sp.blocks)
            for (int i = 0; i < blk.rows; ++i)
                for (SpMat::InnerIterator it(blk.G, i); it; ++it)
                    colmax(blk.cols[it.col()]) = std::max(colmax(blk.cols[it.col()]), std::abs(it.value()));

        RVec dc(sp.n);
        for (int j = 0; j < sp.n; ++j) dc(j) = inv_sqrt(colmax(j));

        for (int i = 0; i < sp.p; ++i) {
            const double r = inv_sqrt(sp.A.row(i).cwiseAbs().maxCoeff());
            sp.A.row(i) *= r;
            sp.eq_scale(i) *= r;
        }
        for (auto& blk : sp.blocks) {
            RVec rowmax = RVec::Zero(blk.rows);
            for (int i = 0; i < blk.rows; ++i)
                for (SpMat::InnerIterator it(blk.G, i); it; ++it)
                    rowmax(i) = std::max(rowmax(i), std::abs(it.value()));
            RVec r(blk.rows);
            if (blk.soc)
                r.setConstant(inv_sqrt(blk.rows ? rowmax.maxCoeff() : 0.0));
            else
                for (int i = 0; i < blk.rows; ++i) r(i) = inv_sqrt(rowmax(i));
            for (int i = 0; i < blk.rows; ++i)
                for (SpMat::InnerIterator it(blk.G, i); it; ++it) it.valueRef() *= r(i) * dc(blk.cols[it.col()]);
            sp.row_scale.segment(blk.offset, blk.rows).array() *= r.array();
        }
        for (int j = 0; j < sp.n; ++j) sp.A.col(j) *= dc(j);
        sp.col_scale.array() *= dc.array();
    }
    sp.b.array() *= sp.eq_scale.array();
    sp.h.array() *= sp.row_scale.array();
    sp.c.array() *= sp.col_scale.array();
}

void precompute(Standard& sp) {
    for (auto& blk : sp.blocks) {
        if (!blk.soc) continue;
        SpMat JG = blk.G;
        JG.bottomRows(blk.rows - 1) *= -1.0;
        blk.P = RMat(SpMat(blk.G.transpose()) * JG);
    }
}

RVec G_mul(const Standard& sp, const RVec& x) {
    RVec out(sp.m);
    for (const auto& blk : sp.blocks) {
        RVec xs(blk.cols.size());
        for (std::size_t j = 0; j < blk.cols.size(); ++j) xs(j) = x(blk.cols[j]);
        out.segment(blk.offset, blk.rows).noalias() = blk.G * xs;
    }
    return out;
}

RVec Gt_mul(const Standard& sp, const RVec& z) {
    RVec out = RVec::Zero(sp.n);
    for (const auto& blk : sp.blocks) {
        const RVec v = blk.G.transpose() * z.segment(blk.offset, blk.rows);
        for (std::size_t j = 0; j < blk.cols.size(); ++j) out(blk.cols[j]) += v(j);
    }
    return out;
}

// ---- cone algebra --------------------------------------------------------

double jnorm2(const Eigen::Ref<const RVec>& v) { return v(0) * v(0) - v.tail(v.size() - 1).squaredNorm(); }

RVec identity_element(const Standard& sp) {
    RVec e = RVec::Zero(sp.m);
    for (const auto& blk : sp.blocks) {
        if (blk.soc)
            e(blk.offset) = 1.0;
        else
            e.segment(blk.offset, blk.rows).setOnes();
    }
    return e;
}

// x∘y
RVec jprod(const Standard& sp, const RVec& x, const RVec& y) {
    RVec out(sp.m);
    for (const auto& blk : sp.blocks) {
        const auto xs = x.segment(blk.offset, blk.rows);
        const auto ys = y.segment(blk.offset, blk.rows);
        auto o = out.segment(blk.offset, blk.rows);
        if (!blk.soc) {
            o = xs.cwiseProduct(ys);
            continue;
        }
        o(0) = xs.dot(ys);
        const int r = blk.rows - 1;
        o.tail(r) = xs(0) * ys.tail(r) + ys(0) * xs.tail(r);
    }
    return out;
}

// λ\v
RVec jdiv(const Standard& sp, const RVec& lam, const RVec& v) {
    RVec out(sp.m);
    for (const auto& blk : sp.blocks) {
        const auto l = lam.segment(blk.offset, blk.rows);
        const auto vs = v.segment(blk.offset, blk.rows);
        auto o = out.segment(blk.offset, blk.rows);
        if (!blk.soc) {
            o = vs.cwiseQuotient(l);
            continue;
        }
        const int r = blk.rows - 1;
        const double w0 = (l(0) * vs(0) - l.tail(r).dot(vs.tail(r))) / jnorm2(l);
        o(0) = w0;
        o.tail(r) = (vs.tail(r) - w0 * l.tail(r)) / l(0);
    }
    return out;
}

std::vector<Scaling> compute_scaling(const Standard& sp, const RVec& s, const RVec& z, RVec& lam) {
    std::vector<Scaling> sc(sp.blocks.size());
    lam.resize(sp.m);
    for (std::size_t k = 0; k < sp.blocks.size(); ++k) {
        const auto& blk = sp.blocks[k];
        const auto ss = s.segment(blk.offset, blk.rows);
        const auto zs = z.segment(blk.offset, blk.rows);
        if (!blk.soc) {
            sc[k].d = (ss.array() / zs.array()).sqrt();
            lam.segment(blk.offset, blk.rows) = (ss.array() * zs.array()).sqrt();
            continue;
        }
        const int r = blk.rows - 1;
        const double sn = std::sqrt(std::max(jnorm2(ss), std::numeric_limits<double>::min()));
        const double zn = std::sqrt(std::max(jnorm2(zs), std::numeric_limits<double>::min()));
        const RVec sb = ss / sn;
        const RVec zb = zs / zn;
        const double gamma = std::sqrt(std::max((1.0 + sb.dot(zb)) / 2.0, 0.0));
        RVec w(blk.rows);
        w(0) = (sb(0) + zb(0)) / (2.0 * gamma);
        w.tail(r) = (sb.tail(r) - zb.tail(r)) / (2.0 * gamma);
        // restore ‖w‖_J = 1 against rounding
        w(0) = std::sqrt(1.0 + w.tail(r).squaredNorm());
        sc[k].w = w;
        sc[k].beta = std::sqrt(sn / zn);
        // λ = W z; for NT scaling it also equals sqrt(sn zn) times the normalized product
        auto l = lam.segment(blk.offset, blk.rows);
        l(0) = gamma;
        l.tail(r) = ((gamma + zb(0)) * sb.tail(r) + (gamma + sb(0)) * zb.tail(r)) /
                    (sb(0) + zb(0) + 2.0 * gamma);
        l *= std::sqrt(sn * zn);
    }
    return sc;
}

// W̄ v with W̄ = [[w0, w1ᵀ], [w1, I + w1w1ᵀ/(1+w0)]]
void wbar_apply(const RVec& w, Eigen::Ref<RVec> v, bool inverse) {
    const int r = static_cast<int>(w.size()) - 1;
    const double w0 = w(0);
    const double sgn = inverse ? -1.0 : 1.0;
    const double v0 = v(0);
    const double wv = w.tail(r).dot(v.tail(r));
    // W̄⁻¹ = J W̄ J flips the sign of w1
    v(0) = w0 * v0 + sgn * wv;
    v.tail(r) += (sgn * v0 + wv / (1.0 + w0)) * w.tail(r);
}

enum class WOp { W, Winv, W2, W2inv };

RVec scale_apply(const Standard& sp, const std::vector<Scaling>& sc, const RVec& v, WOp op) {
    RVec out = v;
    for (std::size_t k = 0; k < sp.blocks.size(); ++k) {
        const auto& blk = sp.blocks[k];
        auto o = out.segment(blk.offset, blk.rows);
        if (!blk.soc) {
            switch (op) {
                case WOp::W: o.array() *= sc[k].d.array(); break;
                case WOp::Winv: o.array() /= sc[k].d.array(); break;
                case WOp::W2: o.array() *= sc[k].d.array().square(); break;
                case WOp::W2inv: o.array() /= sc[k].d.array().square(); break;
            }
            continue;
        }
        const double beta = sc[k].beta;
        switch (op) {
            case WOp::W:
                wbar_apply(sc[k].w, o, false);
                o *= beta;
                break;
            case WOp::Winv:
                wbar_apply(sc[k].w, o, true);
                o /= beta;
                break;
            case WOp::W2:
                wbar_apply(sc[k].w, o, false);
                wbar_apply(sc[k].w, o, false);
                o *= beta * beta;
                break;
            case WOp::W2inv:
                wbar_apply(sc[k].w, o, true);
                wbar_apply(sc[k].w, o, true);
                o /= beta * beta;
                break;
        }
    }
    return out;
}

// Largest α with x + α dx in the cone (inf if unrestricted).
double max_step(const Standard& sp, const RVec& x, const RVec& dx) {
    double alpha = inf;
    for (const auto& blk : sp.blocks) {
        const auto xs = x.segment(blk.offset, blk.rows);
        const auto ds = dx.segment(blk.offset, blk.rows);
        if (!blk.soc) {
            for (int i = 0; i < blk.rows; ++i)
                if (ds(i) < 0.0) alpha = std::min(alpha, -xs(i) / ds(i));
            continue;
        }
        const int r = blk.rows - 1;
        const double a = ds(0) * ds(0) - ds.tail(r).squaredNorm();
        const double b = xs(0) * ds(0) - xs.tail(r).dot(ds.tail(r));
        const double c = std::max(jnorm2(xs), 0.0);
        // smallest positive root of a α² + 2 b α + c
        double root = inf;
        if (a == 0.0) {
            if (b < 0.0) root = -c / (2.0 * b);
        } else {
            const double disc = b * b - a * c;
            if (disc >= 0.0) {
                const double q = -(b + std::copysign(std::sqrt(disc), b));
                for (double cand : {q / a, q != 0.0 ? c / q : inf})
                    if (cand > 0.0) root = std::min(root, cand);
            }
        }
        alpha = std::min(alpha, root);
    }
    return alpha;
}

// ---- linear algebra -------------------------------------------------------

class KktSolver {
  public:
    KktSolver(const Standard& sp, const std::vector<Scaling>& sc) : sp_(sp), sc_(sc) {}

    bool factor() {
        const int n = sp_.n;
        H_ = RMat::Zero(n, n);
        for (std::size_t k = 0; k < sp_.blocks.size(); ++k) {
            const auto& blk = sp_.blocks[k];
            const auto& cols = blk.cols;
            const int sn = static_cast<int>(cols.size());
            if (sn == 0) continue;
            if (!blk.soc) {
                const RVec wt = sc_[k].d.array().square().inverse().matrix();
                const SpMat local = SpMat(blk.G.transpose()) * wt.asDiagonal() * blk.G;
                for (int i = 0; i < local.outerSize(); ++i)
                    for (SpMat::InnerIterator it(local, i); it; ++it) H_(cols[i], cols[it.col()]) += it.value();
                continue;
            }
            RVec jw = sc_[k].w;
            jw.tail(blk.rows - 1) *= -1.0;
            const RVec a = 2.0 * (blk.G.transpose() * jw);
            const RVec ah = 0.5 * a;
            const double ib2 = 1.0 / (sc_[k].beta * sc_[k].beta);
            for (int j = 0; j < sn; ++j) {
                double* hc = H_.col(cols[j]).data();
                const double aj = ah(j);
                const double* pc = blk.P.col(j).data();
                for (int i = 0; i < sn; ++i) hc[cols[i]] += ib2 * (a(i) * aj - pc[i]);
            }
        }
        const double diag = std::max(1.0, H_.diagonal().cwiseAbs().maxCoeff());
        for (double reg : {1e-14, 1e-11, 1e-8}) {
            delta_ = reg * diag;
            if (sp_.p == 0) {
                RMat Hr = H_;
                Hr.diagonal().array() += delta_;
                llt_.compute(Hr);
                if (llt_.info() == Eigen::Success) return true;
            } else {
                RMat K = RMat::Zero(n + sp_.p, n + sp_.p);
                K.topLeftCorner(n, n) = H_;
                K.topLeftCorner(n, n).diagonal().array() += delta_;
                K.topRightCorner(n, sp_.p) = sp_.A.transpose();
                K.bottomLeftCorner(sp_.p, n) = sp_.A;
                K.bottomRightCorner(sp_.p, sp_.p).diagonal().array() = -delta_;
                lu_.compute(K);
                if (std::isfinite(lu_.rcond()) && lu_.rcond() > 1e-300) return true;
            }
        }
        return false;
    }

    // Solves [0 Aᵀ Gᵀ; A 0 0; G 0 −W²] (x, y, z) = (bx, by, bz).
    void solve(const RVec& bx, const RVec& by, const RVec& bz, RVec& x, RVec& y, RVec& z) const {
        reduced(bx, by, bz, x, y, z);
        const double bnorm = std::sqrt(bx.squaredNorm() + by.squaredNorm() + bz.squaredNorm());
        for (int it = 0; it < 2; ++it) {
            const RVec ex = bx - (sp_.p ? RVec(sp_.A.transpose() * y) : RVec::Zero(sp_.n)) - Gt_mul(sp_, z);
            const RVec ey = sp_.p ? RVec(by - sp_.A * x) : RVec();
            const RVec ez = bz - G_mul(sp_, x) + scale_apply(sp_, sc_, z, WOp::W2);
            const double enorm = std::sqrt(ex.squaredNorm() + ey.squaredNorm() + ez.squaredNorm());
            if (enorm <= 1e-12 * bnorm) break;
            RVec cx, cy, cz;
            reduced(ex, ey, ez, cx, cy, cz);
            x += cx;
            if (sp_.p) y += cy;
            z += cz;
        }
    }

  private:
    void reduced(const RVec& bx, const RVec& by, const RVec& bz, RVec& x, RVec& y, RVec& z) const {
        const RVec w2bz = scale_apply(sp_, sc_, bz, WOp::W2inv);
        const RVec r = bx + Gt_mul(sp_, w2bz);
        if (sp_.p == 0) {
            x = llt_.solve(r);
            y = RVec();
        } else {
            RVec rhs(sp_.n + sp_.p);
            rhs << r, by;
            const RVec sol = lu_.solve(rhs);
            x = sol.head(sp_.n);
            y = sol.tail(sp_.p);
        }
        z = scale_apply(sp_, sc_, RVec(G_mul(sp_, x) - bz), WOp::W2inv);
    }

    const Standard& sp_;
    const std::vector<Scaling>& sc_;
    RMat H_;
    double delta_ = 0.0;
    Eigen::LLT<RMat> llt_;
    Eigen::PartialPivLU<RMat> lu_;
};

bool all_finite(const RVec& v) { return v.allFinite(); }

struct Iterate {
    RVec x, y, s, z;
    double tau = 1.0, kappa = 1.0;
};

struct Metrics {
    double pres = inf, dres = inf, gap = inf, relgap = inf, pcost = 0.0, dcost = 0.0;
    double pinf = inf, dinf = inf;
};

}  // namespace

ConicSolution solve(const ConicProgram& prog, const SolverSettings& settings) {
    const auto t_start = std::chrono::steady_clock::now();
    ConicSolution out;
    auto finish = [&](ConicSolution& o) -> ConicSolution {
        o.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        return o;
    };

    try {
        prog.validate();
    } catch (const InvalidInput&) {
        out.status = SolveStatus::numerical_failure;
        return finish(out);
    }
    if (!(settings.tolerance > 0.0) || settings.max_iterations < 1)
        throw InvalidInput("solver tolerance must be > 0 and max_iterations >= 1");

    const double tol = settings.tolerance;
    Standard sp = to_standard(prog);
    if (settings.equilibrate) equilibrate(sp, 15);
    precompute(sp);

    const RVec e = identity_element(sp);
    const double bnorm = std::max(1.0, sp.b.norm());
    const double hnorm = std::max(1.0, sp.h.norm());
    const double cnorm = std::max(1.0, sp.c.norm());

    Iterate v;
    v.x = RVec::Zero(sp.n);
    v.y = RVec::Zero(sp.p);
    v.s = e;
    v.z = e;

    auto recover = [&](const Iterate& it) {
        RVec x = sp.col_scale.cwiseProduct(it.x) / it.tau;
        return x;
    };
    auto metrics = [&](const Iterate& it, const RVec& rx, const RVec& ry, const RVec& rz) {
        Metrics mt;
        const double tau = it.tau;
        mt.pres = std::max(sp.p ? ry.norm() / tau / bnorm : 0.0, sp.m ? rz.norm() / tau / hnorm : 0.0);
        mt.dres = rx.norm() / tau / cnorm;
        mt.pcost = sp.c.dot(it.x) / tau;
        mt.dcost = -(sp.b.dot(it.y) + sp.h.dot(it.z)) / tau;
        mt.gap = it.s.dot(it.z) / (tau * tau);
        mt.relgap = std::max(mt.gap, std::abs(mt.pcost - mt.dcost)) /
                    (1.0 + std::min(std::abs(mt.pcost), std::abs(mt.dcost)));
        const double hz_by = sp.h.dot(it.z) + sp.b.dot(it.y);
        if (hz_by < 0.0) {
            const RVec aty = (sp.p ? RVec(sp.A.transpose() * it.y) : RVec::Zero(sp.n)) + Gt_mul(sp, it.z);
            mt.pinf = aty.norm() / cnorm / (-hz_by);
        }
        const double cx = sp.c.dot(it.x);
        if (cx < 0.0) {
            const double ax = sp.p ? (sp.A * it.x).norm() / bnorm : 0.0;
            const double gxs = sp.m ? (G_mul(sp, it.x) + it.s).norm() / hnorm : 0.0;
            mt.dinf = std::max(ax, gxs) / (-cx);
        }
        return mt;
    };
    auto accept = [&](const Iterate& it, const Metrics& mt) {
        out.x = recover(it);
        out.primal_residual = mt.pres;
        out.dual_residual = mt.dres;
        out.gap = mt.relgap;
        out.max_violation = constraint_violation(prog, out.x).max();
        if (!(out.max_violation <= tol) || !all_finite(out.x)) {
            out.x = RVec();
            return false;
        }
        out.status = SolveStatus::optimal;
        out.objective_value = prog.objective_value(out.x);
        return true;
    };

    Metrics last;
    Iterate best = v;
    bool stalled = false;
    for (int iter = 0; iter <= settings.max_iterations; ++iter) {
        out.solver_iterations = iter;
        const RVec Aty = sp.p ? RVec(sp.A.transpose() * v.y) : RVec::Zero(sp.n);
        const RVec rx = Aty + Gt_mul(sp, v.z) + sp.c * v.tau;
        const RVec ry = sp.p ? RVec(sp.b * v.tau - sp.A * v.x) : RVec();
        const RVec rz = v.s + G_mul(sp, v.x) - sp.h * v.tau;
        const double rt = v.kappa + sp.c.dot(v.x) + sp.b.dot(v.y) + sp.h.dot(v.z);
        const double mu = (v.s.dot(v.z) + v.tau * v.kappa) / (sp.degree + 1);

        last = metrics(v, rx, ry, rz);
        best = v;
        if (last.pres <= tol && last.dres <= tol && last.relgap <= tol) {
            if (accept(v, last)) return finish(out);
        }
        if (last.pinf <= tol) {
            out.status = SolveStatus::infeasible;
            return finish(out);
        }
        if (last.dinf <= tol) {
            out.status = SolveStatus::unbounded;
            return finish(out);
        }
        if (iter == settings.max_iterations) break;

        RVec lam;
        const auto sc = compute_scaling(sp, v.s, v.z, lam);
        if (!all_finite(lam)) {
            stalled = true;
            break;
        }
        KktSolver kkt(sp, sc);
        if (!kkt.factor()) {
            stalled = true;
            break;
        }

        RVec x2, y2, z2;
        kkt.solve(-sp.c, sp.b, sp.h, x2, y2, z2);
        const double den_base = sp.c.dot(x2) + sp.b.dot(y2) + sp.h.dot(z2);

        struct Dir {
            RVec dx, dy, dz, ds;
            double dtau = 0.0, dkappa = 0.0;
        };
        auto direction = [&](double eta, const RVec& d_s, double d_k) {
            Dir d;
            const RVec ld = jdiv(sp, lam, d_s);
            const RVec bz = -eta * rz - scale_apply(sp, sc, ld, WOp::W);
            RVec x1, y1, z1;
            kkt.solve(-eta * rx, sp.p ? RVec(eta * ry) : RVec(), bz, x1, y1, z1);
            const double num = -eta * rt - d_k / v.tau - sp.c.dot(x1) - sp.b.dot(y1) - sp.h.dot(z1);
            const double den = -v.kappa / v.tau + den_base;
            d.dtau = num / den;
            d.dx = x1 + d.dtau * x2;
            d.dy = sp.p ? RVec(y1 + d.dtau * y2) : RVec();
            d.dz = z1 + d.dtau * z2;
            d.ds = scale_apply(sp, sc, RVec(ld - scale_apply(sp, sc, d.dz, WOp::W)), WOp::W);
            d.dkappa = (d_k - v.kappa * d.dtau) / v.tau;
            return d;
        };
        auto step_length = [&](const Dir& d) {
            double a = std::min(max_step(sp, v.s, d.ds), max_step(sp, v.z, d.dz));
            if (d.dtau < 0.0) a = std::min(a, -v.tau / d.dtau);
            if (d.dkappa < 0.0) a = std::min(a, -v.kappa / d.dkappa);
            return a;
        };

        const RVec ll = jprod(sp, lam, lam);
        const Dir aff = direction(1.0, -ll, -v.tau * v.kappa);
        const double alpha_aff = std::min(1.0, step_length(aff));
        const double sigma = std::pow(1.0 - alpha_aff, 3);

        const RVec ds_t = scale_apply(sp, sc, aff.ds, WOp::Winv);
        const RVec dz_t = scale_apply(sp, sc, aff.dz, WOp::W);
        const RVec d_s = -ll + sigma * mu * e - jprod(sp, ds_t, dz_t);
        const double d_k = -v.tau * v.kappa + sigma * mu - aff.dtau * aff.dkappa;
        const Dir cmb = direction(1.0 - sigma, d_s, d_k);
        const double alpha = std::min(1.0, 0.99 * step_length(cmb));

        if (!(alpha > 1e-12) || !all_finite(cmb.dx) || !all_finite(cmb.dz) || !all_finite(cmb.ds) ||
            !std::isfinite(cmb.dtau)) {
            stalled = true;
            break;
        }
        v.x += alpha * cmb.dx;
        if (sp.p) v.y += alpha * cmb.dy;
        v.z += alpha * cmb.dz;
        v.s += alpha * cmb.ds;
        v.tau += alpha * cmb.dtau;
        v.kappa += alpha * cmb.dkappa;

        // keep tau and kappa scale bounded: HSDE is homogeneous
        const double scale = std::max(v.tau, v.kappa);
        if (scale > 1e8 || scale < 1e-8) {
            v.x /= scale;
            v.y /= scale;
            v.z /= scale;
            v.s /= scale;
            v.tau /= scale;
            v.kappa /= scale;
        }
    }

    // reduced-accuracy acceptance
    (void)stalled;
    const double loose = 100.0 * tol;
    if (last.pres <= loose && last.dres <= loose && last.relgap <= loose && accept(best, last))
        return finish(out);
    if (last.pinf <= loose) {
        out.status = SolveStatus::infeasible;
        return finish(out);
    }
    if (last.dinf <= loose) {
        out.status = SolveStatus::unbounded;
        return finish(out);
    }
    out.status = SolveStatus::numerical_failure;
    return finish(out);
}

}  // namespace sarisac::conic
