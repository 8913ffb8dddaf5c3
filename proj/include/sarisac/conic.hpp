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

#include <iosfwd>
#include <string>
#include <vector>

#include "sarisac/core_model.hpp"

namespace sarisac::conic {

struct Term {
    int var = 0;
    double coef = 0.0;
};

using SparseRow = std::vector<Term>;

/// Real scalar affine expression Σ coef·x[var] + constant.
class AffineExpr {
  public:
    AffineExpr() = default;
    explicit AffineExpr(double constant) : constant_(constant) {}
    static AffineExpr variable(int var, double coef = 1.0);

    AffineExpr& add_term(int var, double coef);
    AffineExpr& add_constant(double c) {
        constant_ += c;
        return *this;
    }
    AffineExpr& operator+=(const AffineExpr& o);
    AffineExpr& operator-=(const AffineExpr& o);
    AffineExpr& operator*=(double s);

    /// Merge duplicate variables and drop exact zeros; terms end sorted by index.
    AffineExpr& compact();

    const SparseRow& terms() const { return terms_; }
    double constant() const { return constant_; }
    double evaluate(const RVec& x) const;

  private:
    SparseRow terms_;
    double constant_ = 0.0;
};

AffineExpr operator+(AffineExpr a, const AffineExpr& b);
AffineExpr operator-(AffineExpr a, const AffineExpr& b);
AffineExpr operator*(double s, AffineExpr a);

/// row·x <= rhs for inequalities, row·x = rhs for equalities.
struct LinearConstraint {
    SparseRow row;
    double rhs = 0.0;
};

/// ‖A x + b‖₂ <= cᵀx + e; A has at least one row.
struct SocConstraint {
    std::vector<SparseRow> A;
    std::vector<double> b;
    SparseRow c;
    double e = 0.0;
};

/// Canonical real SOCP: maximize objectiveᵀx subject to linear equalities,
/// linear inequalities and second-order cones.
struct ConicProgram {
    int num_vars = 0;
    SparseRow objective;
    double objective_constant = 0.0;
    std::vector<LinearConstraint> eq_constraints;
    std::vector<LinearConstraint> ineq_constraints;
    std::vector<SocConstraint> soc_constraints;
    std::vector<std::string> var_names;

    int add_variable(const std::string& name);
    void set_objective(const AffineExpr& obj);

    /// lhs == rhs
    void add_equality(const AffineExpr& lhs, const AffineExpr& rhs);
    /// lhs <= rhs
    void add_inequality(const AffineExpr& lhs, const AffineExpr& rhs);
    /// ‖entries‖₂ <= bound
    void add_soc(const std::vector<AffineExpr>& entries, const AffineExpr& bound);

    /// Throws InvalidInput on out-of-range indices, empty cones or non-finite data.
    void validate() const;

    double objective_value(const RVec& x) const;
};

/// Real/imaginary split of a complex variable vector. The represented complex
/// value is scale * (x[re(i)] + j x[im(i)]).
struct ComplexHandle {
    int offset = 0;
    int length = 0;
    double scale = 1.0;

    int re(int i) const { return offset + i; }
    int im(int i) const { return offset + length + i; }
};

/// Allocates 2*length real variables.
ComplexHandle add_complex_variable(ConicProgram& prog, int length, const std::string& name,
                                   double scale = 1.0);

/// Writes the program variables representing v.
void encode(const ComplexHandle& h, const CVec& v, RVec& x);
CVec decode(const ComplexHandle& h, const RVec& x);

/// Vector of complex affine expressions, stored as (real part, imaginary part).
class ComplexAffineVec {
  public:
    ComplexAffineVec() = default;
    explicit ComplexAffineVec(int n) : re_(n), im_(n) {}

    static ComplexAffineVec variable(const ComplexHandle& h, bool conjugate = false);
    static ComplexAffineVec constant(const CVec& v);

    int size() const { return static_cast<int>(re_.size()); }
    AffineExpr& re(int i) { return re_[i]; }
    AffineExpr& im(int i) { return im_[i]; }
    const AffineExpr& re(int i) const { return re_[i]; }
    const AffineExpr& im(int i) const { return im_[i]; }

    ComplexAffineVec& operator+=(const ComplexAffineVec& o);
    ComplexAffineVec& operator-=(const ComplexAffineVec& o);
    ComplexAffineVec& operator*=(cplx s);
    ComplexAffineVec& operator*=(double s);
    /// Every entry plus the matching entry of v.
    ComplexAffineVec& add_constant(const CVec& v);

    /// Re{aᴴ v} as a real affine expression.
    AffineExpr real_inner(const CVec& a) const;
    /// Real entries [Re v_0..Re v_{n-1}, Im v_0..Im v_{n-1}].
    std::vector<AffineExpr> flatten() const;
    CVec evaluate(const RVec& x) const;
    ComplexAffineVec& compact();

  private:
    std::vector<AffineExpr> re_;
    std::vector<AffineExpr> im_;
};

ComplexAffineVec operator+(ComplexAffineVec a, const ComplexAffineVec& b);
ComplexAffineVec operator-(ComplexAffineVec a, const ComplexAffineVec& b);
/// Dense complex matrix times a vector of affine expressions.
ComplexAffineVec operator*(const CMat& m, const ComplexAffineVec& v);
/// diag(d) v.
ComplexAffineVec diag_mul(const CVec& d, const ComplexAffineVec& v);

/// ‖entries‖₂² <= upper through the rotated-cone identity
/// ‖(2√s·entries, upper − s)‖₂ <= upper + s, with s = scale (1 by default).
/// scale should be of the order of upper at the solution.
void add_squared_norm_epigraph(ConicProgram& prog, const std::vector<AffineExpr>& entries,
                               const AffineExpr& upper, double scale = 1.0);
void add_squared_norm_epigraph(ConicProgram& prog, const ComplexAffineVec& entries,
                               const AffineExpr& upper, double scale = 1.0);

enum class SolveStatus { optimal, infeasible, unbounded, numerical_failure };
std::string to_string(SolveStatus s);

struct SolverSettings {
    double tolerance = 1e-8;
    int max_iterations = 100;
    bool equilibrate = true;
};

struct ConicSolution {
    SolveStatus status = SolveStatus::numerical_failure;
    RVec x;  // empty unless optimal
    double objective_value = 0.0;
    int solver_iterations = 0;
    double solve_time = 0.0;  // seconds
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double gap = 0.0;
    double max_violation = 0.0;  // independent re-check, relative units
};

/// Largest constraint violation of x, each scaled by 1/(1 + ‖constraint data rhs‖).
struct Violation {
    double eq = 0.0;
    double ineq = 0.0;
    double soc = 0.0;
    double max() const { return std::max(eq, std::max(ineq, soc)); }
};
Violation constraint_violation(const ConicProgram& prog, const RVec& x);

/// Homogeneous self-dual interior-point method with Nesterov-Todd scaling.
/// Status optimal implies constraint_violation(prog, x).max() <= tolerance.
ConicSolution solve(const ConicProgram& prog, const SolverSettings& settings = {});
inline ConicSolution solve(const ConicProgram& prog, double tolerance) {
    SolverSettings s;
    s.tolerance = tolerance;
    return solve(prog, s);
}

/// Plain-text interchange format; see README for the field order.
void write_program(std::ostream& os, const ConicProgram& prog);
ConicProgram read_program(std::istream& is);

}  // namespace sarisac::conic
