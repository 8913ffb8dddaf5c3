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

#include <algorithm>
#include <cmath>

#include "sarisac/conic.hpp"
#include "sarisac/error.hpp"

namespace sarisac::conic {

// ---- AffineExpr -----------------------------------------------------------

AffineExpr AffineExpr::variable(int var, double coef) {
    AffineExpr e;
    e.terms_.push_back({var, coef});
    return e;
}

AffineExpr& AffineExpr::add_term(int var, double coef) {
    if (coef != 0.0) terms_.push_back({var, coef});
    return *this;
}

AffineExpr& AffineExpr::operator+=(const AffineExpr& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    constant_ += o.constant_;
    return *this;
}

AffineExpr& AffineExpr::operator-=(const AffineExpr& o) {
    terms_.reserve(terms_.size() + o.terms_.size());
    for (const auto& t : o.terms_) terms_.push_back({t.var, -t.coef});
    constant_ -= o.constant_;
    return *this;
}

AffineExpr& AffineExpr::operator*=(double s) {
    for (auto& t : terms_) t.coef *= s;
    constant_ *= s;
    return *this;
}

AffineExpr& AffineExpr::compact() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    SparseRow out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        if (!out.empty() && out.back().var == t.var)
            out.back().coef += t.coef;
        else
            out.push_back(t);
    }
    std::erase_if(out, [](const Term& t) { return t.coef == 0.0; });
    terms_ = std::move(out);
    return *this;
}

double AffineExpr::evaluate(const RVec& x) const {
    double v = constant_;
    for (const auto& t : terms_) v += t.coef * x(t.var);
    return v;
}

AffineExpr operator+(AffineExpr a, const AffineExpr& b) { return a += b; }
AffineExpr operator-(AffineExpr a, const AffineExpr& b) { return a -= b; }
AffineExpr operator*(double s, AffineExpr a) { return a *= s; }

// ---- ConicProgram ---------------------------------------------------------

int ConicProgram::add_variable(const std::string& name) {
    var_names.push_back(name);
    return num_vars++;
}

void ConicProgram::set_objective(const AffineExpr& obj) {
    AffineExpr e = obj;
    e.compact();
    objective = e.terms();
    objective_constant = e.constant();
}

void ConicProgram::add_equality(const AffineExpr& lhs, const AffineExpr& rhs) {
    AffineExpr e = lhs - rhs;
    e.compact();
    eq_constraints.push_back({e.terms(), -e.constant()});
}

void ConicProgram::add_inequality(const AffineExpr& lhs, const AffineExpr& rhs) {
    AffineExpr e = lhs - rhs;
    e.compact();
    ineq_constraints.push_back({e.terms(), -e.constant()});
}

void ConicProgram::add_soc(const std::vector<AffineExpr>& entries, const AffineExpr& bound) {
    if (entries.empty()) throw InvalidInput("second-order cone needs at least one row");
    SocConstraint s;
    s.A.reserve(entries.size());
    s.b.reserve(entries.size());
    for (auto e : entries) {
        e.compact();
        s.A.push_back(e.terms());
        s.b.push_back(e.constant());
    }
    AffineExpr c = bound;
    c.compact();
    s.c = c.terms();
    s.e = c.constant();
    soc_constraints.push_back(std::move(s));
}

void ConicProgram::validate() const {
    auto check_row = [this](const SparseRow& row, const char* where) {
        for (const auto& t : row) {
            if (t.var < 0 || t.var >= num_vars)
                throw InvalidInput(std::string("variable index out of range in ") + where);
            if (!std::isfinite(t.coef)) throw InvalidInput(std::string("non-finite coefficient in ") + where);
        }
    };
    auto check_value = [](double v, const char* where) {
        if (!std::isfinite(v)) throw InvalidInput(std::string("non-finite constant in ") + where);
    };
    if (static_cast<int>(var_names.size()) != num_vars)
        throw InvalidInput("var_names must have num_vars entries");
    check_row(objective, "objective");
    for (const auto& c : eq_constraints) {
        check_row(c.row, "equality");
        check_value(c.rhs, "equality");
    }
    for (const auto& c : ineq_constraints) {
        check_row(c.row, "inequality");
        check_value(c.rhs, "inequality");
    }
    for (const auto& s : soc_constraints) {
        if (s.A.empty()) throw InvalidInput("second-order cone needs at least one row");
        if (s.A.size() != s.b.size()) throw InvalidInput("cone offset length mismatch");
        for (const auto& r : s.A) check_row(r, "cone");
        for (double v : s.b) check_value(v, "cone");
        check_row(s.c, "cone bound");
        check_value(s.e, "cone bound");
    }
}

double ConicProgram::objective_value(const RVec& x) const {
    double v = objective_constant;
    for (const auto& t : objective) v += t.coef * x(t.var);
    return v;
}

// ---- complex variables ----------------------------------------------------

ComplexHandle add_complex_variable(ConicProgram& prog, int length, const std::string& name,
                                   double scale) {
    if (length < 0) throw InvalidInput("negative complex variable length");
    if (!(scale > 0.0)) throw InvalidInput("complex variable scale must be > 0");
    ComplexHandle h{prog.num_vars, length, scale};
    for (int i = 0; i < length; ++i) prog.add_variable(name + ".re[" + std::to_string(i) + "]");
    for (int i = 0; i < length; ++i) prog.add_variable(name + ".im[" + std::to_string(i) + "]");
    return h;
}

void encode(const ComplexHandle& h, const CVec& v, RVec& x) {
    if (v.size() != h.length) throw InvalidInput("encode: length mismatch");
    if (x.size() < h.offset + 2 * h.length) throw InvalidInput("encode: invalid handle");
    for (int i = 0; i < h.length; ++i) {
        x(h.re(i)) = v(i).real() / h.scale;
        x(h.im(i)) = v(i).imag() / h.scale;
    }
}

CVec decode(const ComplexHandle& h, const RVec& x) {
    if (x.size() < h.offset + 2 * h.length) throw InvalidInput("decode: invalid handle");
    CVec v(h.length);
    for (int i = 0; i < h.length; ++i) v(i) = h.scale * cplx(x(h.re(i)), x(h.im(i)));
    return v;
}

// ---- ComplexAffineVec -----------------------------------------------------

ComplexAffineVec ComplexAffineVec::variable(const ComplexHandle& h, bool conjugate) {
    ComplexAffineVec v(h.length);
    const double sgn = conjugate ? -1.0 : 1.0;
    for (int i = 0; i < h.length; ++i) {
        v.re_[i].add_term(h.re(i), h.scale);
        v.im_[i].add_term(h.im(i), sgn * h.scale);
    }
    return v;
}

ComplexAffineVec ComplexAffineVec::constant(const CVec& c) {
    ComplexAffineVec v(static_cast<int>(c.size()));
    return v.add_constant(c);
}

ComplexAffineVec& ComplexAffineVec::operator+=(const ComplexAffineVec& o) {
    if (o.size() != size()) throw InvalidInput("complex expression length mismatch");
    for (int i = 0; i < size(); ++i) {
        re_[i] += o.re_[i];
        im_[i] += o.im_[i];
    }
    return *this;
}

ComplexAffineVec& ComplexAffineVec::operator-=(const ComplexAffineVec& o) {
    if (o.size() != size()) throw InvalidInput("complex expression length mismatch");
    for (int i = 0; i < size(); ++i) {
        re_[i] -= o.re_[i];
        im_[i] -= o.im_[i];
    }
    return *this;
}

ComplexAffineVec& ComplexAffineVec::operator*=(cplx s) {
    for (int i = 0; i < size(); ++i) {
        AffineExpr r = s.real() * re_[i] - s.imag() * im_[i];
        AffineExpr m = s.imag() * re_[i] + s.real() * im_[i];
        re_[i] = std::move(r.compact());
        im_[i] = std::move(m.compact());
    }
    return *this;
}

ComplexAffineVec& ComplexAffineVec::operator*=(double s) {
    for (int i = 0; i < size(); ++i) {
        re_[i] *= s;
        im_[i] *= s;
    }
    return *this;
}

ComplexAffineVec& ComplexAffineVec::add_constant(const CVec& c) {
    if (c.size() != size()) throw InvalidInput("complex expression length mismatch");
    for (int i = 0; i < size(); ++i) {
        re_[i].add_constant(c(i).real());
        im_[i].add_constant(c(i).imag());
    }
    return *this;
}

AffineExpr ComplexAffineVec::real_inner(const CVec& a) const {
    if (a.size() != size()) throw InvalidInput("complex expression length mismatch");
    AffineExpr out;
    for (int i = 0; i < size(); ++i) {
        // Re{conj(a) v} = Re a Re v + Im a Im v
        out += a(i).real() * re_[i];
        out += a(i).imag() * im_[i];
    }
    return out.compact();
}

std::vector<AffineExpr> ComplexAffineVec::flatten() const {
    std::vector<AffineExpr> out;
    out.reserve(2 * re_.size());
    out.insert(out.end(), re_.begin(), re_.end());
    out.insert(out.end(), im_.begin(), im_.end());
    return out;
}

CVec ComplexAffineVec::evaluate(const RVec& x) const {
    CVec v(size());
    for (int i = 0; i < size(); ++i) v(i) = cplx(re_[i].evaluate(x), im_[i].evaluate(x));
    return v;
}

ComplexAffineVec& ComplexAffineVec::compact() {
    for (int i = 0; i < size(); ++i) {
        re_[i].compact();
        im_[i].compact();
    }
    return *this;
}

ComplexAffineVec operator+(ComplexAffineVec a, const ComplexAffineVec& b) { return a += b; }
ComplexAffineVec operator-(ComplexAffineVec a, const ComplexAffineVec& b) { return a -= b; }

ComplexAffineVec operator*(const CMat& m, const ComplexAffineVec& v) {
    if (m.cols() != v.size()) throw InvalidInput("matrix-expression dimension mismatch");
    ComplexAffineVec out(static_cast<int>(m.rows()));
    for (int i = 0; i < m.rows(); ++i) {
        AffineExpr r, s;
        for (int j = 0; j < v.size(); ++j) {
            const cplx a = m(i, j);
            if (a == cplx(0.0, 0.0)) continue;
            for (const auto& t : v.re(j).terms()) {
                r.add_term(t.var, a.real() * t.coef);
                s.add_term(t.var, a.imag() * t.coef);
            }
            for (const auto& t : v.im(j).terms()) {
                r.add_term(t.var, -a.imag() * t.coef);
                s.add_term(t.var, a.real() * t.coef);
            }
            r.add_constant(a.real() * v.re(j).constant() - a.imag() * v.im(j).constant());
            s.add_constant(a.imag() * v.re(j).constant() + a.real() * v.im(j).constant());
        }
        out.re(i) = std::move(r.compact());
        out.im(i) = std::move(s.compact());
    }
    return out;
}

ComplexAffineVec diag_mul(const CVec& d, const ComplexAffineVec& v) {
    if (d.size() != v.size()) throw InvalidInput("diag_mul dimension mismatch");
    ComplexAffineVec out(v.size());
    for (int i = 0; i < v.size(); ++i) {
        out.re(i) = d(i).real() * v.re(i) - d(i).imag() * v.im(i);
        out.im(i) = d(i).imag() * v.re(i) + d(i).real() * v.im(i);
        out.re(i).compact();
        out.im(i).compact();
    }
    return out;
}

void add_squared_norm_epigraph(ConicProgram& prog, const std::vector<AffineExpr>& entries,
                               const AffineExpr& upper, double scale) {
    if (!(scale > 0.0)) throw InvalidInput("epigraph scale must be > 0");
    for (const auto& e : entries)
        for (const auto& t : e.terms())
            if (t.var < 0 || t.var >= prog.num_vars) throw InvalidInput("epigraph: invalid handle");
    for (const auto& t : upper.terms())
        if (t.var < 0 || t.var >= prog.num_vars) throw InvalidInput("epigraph: invalid handle");

    const double k = 2.0 * std::sqrt(scale);
    std::vector<AffineExpr> rows;
    rows.reserve(entries.size() + 1);
    for (const auto& e : entries) rows.push_back(k * e);
    rows.push_back(upper - AffineExpr(scale));
    prog.add_soc(rows, upper + AffineExpr(scale));
}

void add_squared_norm_epigraph(ConicProgram& prog, const ComplexAffineVec& entries,
                               const AffineExpr& upper, double scale) {
    add_squared_norm_epigraph(prog, entries.flatten(), upper, scale);
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::numerical_failure: return "numerical_failure";
    }
    return "unknown";
}

// ---- residuals ------------------------------------------------------------

namespace {

double row_dot(const SparseRow& row, const RVec& x) {
    double v = 0.0;
    for (const auto& t : row) v += t.coef * x(t.var);
    return v;
}

}  // namespace

Violation constraint_violation(const ConicProgram& prog, const RVec& x) {
    if (x.size() != prog.num_vars) throw InvalidInput("constraint_violation: wrong x length");
    Violation v;
    for (const auto& c : prog.eq_constraints)
        v.eq = std::max(v.eq, std::abs(row_dot(c.row, x) - c.rhs) / (1.0 + std::abs(c.rhs)));
    for (const auto& c : prog.ineq_constraints)
        v.ineq = std::max(v.ineq, std::max(0.0, row_dot(c.row, x) - c.rhs) / (1.0 + std::abs(c.rhs)));
    for (const auto& s : prog.soc_constraints) {
        double lhs2 = 0.0, b2 = 0.0;
        for (std::size_t r = 0; r < s.A.size(); ++r) {
            const double ar = row_dot(s.A[r], x) + s.b[r];
            lhs2 += ar * ar;
            b2 += s.b[r] * s.b[r];
        }
        const double rhs = row_dot(s.c, x) + s.e;
        const double viol = std::max(0.0, std::sqrt(lhs2) - rhs);
        v.soc = std::max(v.soc, viol / (1.0 + std::sqrt(b2 + s.e * s.e)));
    }
    return v;
}

}  // namespace sarisac::conic
