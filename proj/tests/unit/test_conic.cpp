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

#include <random>
#include <sstream>

#include "doctest.h"
#include "sarisac/conic.hpp"
#include "sarisac/error.hpp"

using namespace sarisac;
using namespace sarisac::conic;

namespace {

AffineExpr var(int i, double c = 1.0) { return AffineExpr::variable(i, c); }
AffineExpr cst(double c) { return AffineExpr(c); }

}  // namespace

TEST_CASE("add_complex_variable allocates disjoint blocks") {
    ConicProgram p;
    const auto a = add_complex_variable(p, 3, "a");
    CHECK(p.num_vars == 6);
    const auto b = add_complex_variable(p, 2, "b");
    CHECK(p.num_vars == 10);
    CHECK(b.offset >= a.offset + 2 * a.length);
    CHECK(p.var_names.size() == 10);
}

TEST_CASE("encode and decode round-trip exactly") {
    ConicProgram p;
    const auto h = add_complex_variable(p, 3, "v", 0.37);
    CVec v(3);
    v << cplx(1.25, -3.5), cplx(0.0, 1e-9), cplx(-7.0, 2.0);
    RVec x = RVec::Zero(p.num_vars);
    encode(h, v, x);
    const CVec w = decode(h, x);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(w(i) - v(i)) <= 1e-15 * std::abs(v(i)));
}

TEST_CASE("complex affine algebra evaluates like complex arithmetic") {
    ConicProgram p;
    const auto h = add_complex_variable(p, 2, "v");
    CVec v(2);
    v << cplx(0.3, -1.1), cplx(2.0, 0.5);
    RVec x = RVec::Zero(p.num_vars);
    encode(h, v, x);

    CMat M(3, 2);
    M << cplx(1, 2), cplx(0, -1), cplx(3, 0), cplx(-2, 1), cplx(0.5, 0.5), cplx(0, 0);
    CVec c(3);
    c << cplx(1, 1), cplx(-1, 0), cplx(0, 2);
    const cplx s(0.7, -0.2);
    CVec d(3);
    d << cplx(2, 0), cplx(0, 1), cplx(-1, -1);

    ComplexAffineVec e = M * ComplexAffineVec::variable(h, true);
    e.add_constant(c);
    e *= s;
    e = diag_mul(d, e);
    const CVec expect = d.cwiseProduct(s * (M * v.conjugate() + c));
    const CVec got = e.evaluate(x);
    CHECK((got - expect).norm() == doctest::Approx(0.0).epsilon(1e-12));

    const CVec a = CVec::Random(3);
    CHECK(e.real_inner(a).evaluate(x) == doctest::Approx(a.dot(expect).real()).epsilon(1e-12));
}

TEST_CASE("maximize x subject to x <= 1") {
    ConicProgram p;
    const int x = p.add_variable("x");
    p.set_objective(var(x));
    p.add_inequality(var(x), cst(1.0));
    const auto sol = solve(p, 1e-9);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.x(x) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(sol.objective_value == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("maximize x subject to a cone boundary") {
    ConicProgram p;
    const int x = p.add_variable("x");
    p.set_objective(var(x));
    p.add_soc({var(x), cst(1.0)}, cst(std::sqrt(2.0)));
    const auto sol = solve(p, 1e-9);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.x(x) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("three-variable SOCP matches the hand solution") {
    // max x1 + x2 + x3 s.t. ||x|| <= 1 -> sqrt(3) at x = 1/sqrt(3)
    ConicProgram p;
    for (int i = 0; i < 3; ++i) p.add_variable("x" + std::to_string(i));
    p.set_objective(var(0) + var(1) + var(2));
    p.add_soc({var(0), var(1), var(2)}, cst(1.0));
    const auto sol = solve(p, 1e-9);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.objective_value == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
    for (int i = 0; i < 3; ++i) CHECK(sol.x(i) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-6));
}

TEST_CASE("distance to a line through an equality constraint") {
    // min r s.t. ||(x1 - 1, x2 - 2)|| <= r, x1 + x2 = 0 -> 3/sqrt(2)
    ConicProgram p;
    const int x1 = p.add_variable("x1"), x2 = p.add_variable("x2"), r = p.add_variable("r");
    p.set_objective(var(r, -1.0));
    p.add_soc({var(x1) - cst(1.0), var(x2) - cst(2.0)}, var(r));
    p.add_equality(var(x1) + var(x2), cst(0.0));
    const auto sol = solve(p, 1e-9);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.x(r) == doctest::Approx(3.0 / std::sqrt(2.0)).epsilon(1e-6));
    CHECK(sol.x(x1) == doctest::Approx(-0.5).epsilon(1e-6));
    CHECK(sol.x(x2) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("squared-norm epigraph: zero expression with zero bound is feasible") {
    ConicProgram p;
    const int x = p.add_variable("x");
    p.set_objective(var(x, -1.0));
    p.add_inequality(cst(0.0), var(x));
    add_squared_norm_epigraph(p, std::vector<AffineExpr>{cst(0.0)}, cst(0.0));
    const auto sol = solve(p, 1e-8);
    CHECK(sol.status == SolveStatus::optimal);
}

TEST_CASE("squared-norm epigraph: constant above its bound is infeasible") {
    ConicProgram p;
    const int x = p.add_variable("x");
    p.set_objective(var(x));
    p.add_inequality(var(x), cst(1.0));
    add_squared_norm_epigraph(p, std::vector<AffineExpr>{cst(2.0), cst(1.0)}, cst(4.0));
    const auto sol = solve(p, 1e-8);
    CHECK(sol.status == SolveStatus::infeasible);
    CHECK(sol.x.size() == 0);
}

TEST_CASE("squared-norm epigraph: random affine case against direct evaluation") {
    // min u s.t. ||M x + c||^2 <= u, |x_i| <= 1
    std::mt19937_64 gen(11);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 5; ++trial) {
        ConicProgram p;
        const int n = 4;
        for (int i = 0; i < n; ++i) p.add_variable("x" + std::to_string(i));
        const int u = p.add_variable("u");
        std::vector<AffineExpr> rows;
        RMat M(3, n);
        RVec c(3);
        for (int r = 0; r < 3; ++r) {
            AffineExpr e(c(r) = nd(gen) * 3.0);
            for (int i = 0; i < n; ++i) e.add_term(i, M(r, i) = nd(gen));
            rows.push_back(e);
        }
        for (int i = 0; i < n; ++i) {
            p.add_inequality(var(i), cst(1.0));
            p.add_inequality(var(i, -1.0), cst(1.0));
        }
        add_squared_norm_epigraph(p, rows, var(u), 4.0);
        p.set_objective(var(u, -1.0));
        const auto sol = solve(p, 1e-9);
        REQUIRE(sol.status == SolveStatus::optimal);
        const RVec xs = sol.x.head(n);
        const double direct = (M * xs + c).squaredNorm();
        CHECK(sol.x(u) == doctest::Approx(direct).epsilon(1e-6));
        // no feasible random point does better
        std::uniform_real_distribution<double> ud(-1.0, 1.0);
        for (int k = 0; k < 200; ++k) {
            RVec y(n);
            for (int i = 0; i < n; ++i) y(i) = ud(gen);
            CHECK((M * y + c).squaredNorm() >= direct - 1e-6);
        }
    }
}

TEST_CASE("unbounded program") {
    ConicProgram p;
    const int x = p.add_variable("x"), y = p.add_variable("y");
    p.set_objective(var(x));
    p.add_inequality(var(y), cst(1.0));
    p.add_inequality(var(x, -1.0), cst(0.0));
    const auto sol = solve(p, 1e-8);
    CHECK(sol.status == SolveStatus::unbounded);
}

TEST_CASE("pathological input does not throw") {
    ConicProgram p;
    const int x = p.add_variable("x");
    p.set_objective(var(x));
    p.add_inequality(var(x, std::numeric_limits<double>::quiet_NaN()), cst(1.0));
    ConicSolution sol;
    CHECK_NOTHROW(sol = solve(p, 1e-8));
    CHECK(sol.status == SolveStatus::numerical_failure);
}

TEST_CASE("random feasible SOCPs: optimum beats sampled feasible points") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 6;
        ConicProgram p;
        for (int i = 0; i < n; ++i) p.add_variable("x" + std::to_string(i));
        AffineExpr obj;
        RVec cvec(n);
        for (int i = 0; i < n; ++i) obj.add_term(i, cvec(i) = nd(gen));
        p.set_objective(obj);
        // ball around the origin keeps it bounded; extra cones through x = 0 interior
        std::vector<AffineExpr> ball;
        for (int i = 0; i < n; ++i) ball.push_back(var(i));
        p.add_soc(ball, cst(2.0));
        for (int k = 0; k < 3; ++k) {
            std::vector<AffineExpr> rows;
            for (int r = 0; r < 3; ++r) {
                AffineExpr e(nd(gen) * 0.1);
                for (int i = 0; i < n; ++i) e.add_term(i, nd(gen));
                rows.push_back(e);
            }
            AffineExpr bound(1.0);
            for (int i = 0; i < n; ++i) bound.add_term(i, 0.3 * nd(gen));
            p.add_soc(rows, bound);
        }
        const auto sol = solve(p, 1e-9);
        REQUIRE(sol.status == SolveStatus::optimal);
        CHECK(constraint_violation(p, sol.x).max() <= 1e-9);
        for (int s = 0; s < 500; ++s) {
            RVec y(n);
            for (int i = 0; i < n; ++i) y(i) = nd(gen) * 0.3;
            if (constraint_violation(p, y).max() > 0.0) continue;
            CHECK(p.objective_value(y) <= sol.objective_value + 1e-7);
        }
        // deterministic re-solve
        const auto again = solve(p, 1e-9);
        CHECK(again.objective_value == sol.objective_value);
    }
}

TEST_CASE("text interchange round-trips") {
    ConicProgram p;
    const auto h = add_complex_variable(p, 2, "w");
    const int t = p.add_variable("t");
    p.set_objective(var(t) + cst(0.1));
    p.add_inequality(var(h.re(0)) + var(h.im(1), 1.0 / 3.0), cst(2.0));
    p.add_equality(var(t), cst(0.5));
    add_squared_norm_epigraph(p, ComplexAffineVec::variable(h), var(t), 0.25);
    std::stringstream ss;
    write_program(ss, p);
    const ConicProgram q = read_program(ss);
    std::stringstream s2;
    write_program(s2, q);
    CHECK(ss.str() == s2.str());
    CHECK(q.num_vars == p.num_vars);
    CHECK(q.soc_constraints.size() == 1);
    CHECK(q.var_names == p.var_names);
}

TEST_CASE("validate rejects out-of-range indices") {
    ConicProgram p;
    p.add_variable("x");
    p.ineq_constraints.push_back({{{3, 1.0}}, 1.0});
    CHECK_THROWS_AS(p.validate(), InvalidInput);
    ConicProgram q;
    q.add_variable("x");
    CHECK_THROWS_AS(q.add_soc({}, cst(1.0)), InvalidInput);
}
