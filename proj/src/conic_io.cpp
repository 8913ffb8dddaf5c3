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

#include <cstdio>
#include <istream>
#include <ostream>

#include "sarisac/conic.hpp"
#include "sarisac/error.hpp"

// Line-oriented text format:
//   sarisac-conic 1
//   vars <n>
//   name <name>                 (n lines)
//   objective <const> <nnz> {<var> <coef>}
//   eq <count>,   then: <rhs> <nnz> {<var> <coef>}
//   ineq <count>, then: <rhs> <nnz> {<var> <coef>}
//   soc <count>,  then per cone: cone <rows>, rows of <b> <nnz> {...}, bound <e> <nnz> {...}

namespace sarisac::conic {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_row(std::ostream& os, double constant, const SparseRow& row) {
    os << fmt(constant) << ' ' << row.size();
    for (const auto& t : row) os << ' ' << t.var << ' ' << fmt(t.coef);
    os << '\n';
}

void expect(std::istream& is, const std::string& word) {
    std::string w;
    if (!(is >> w) || w != word) throw InvalidInput("read_program: expected '" + word + "'");
}

template <class T>
T read_value(std::istream& is, const char* what) {
    T v{};
    if (!(is >> v)) throw InvalidInput(std::string("read_program: bad ") + what);
    return v;
}

SparseRow read_row(std::istream& is, double& constant) {
    constant = read_value<double>(is, "constant");
    const auto nnz = read_value<long long>(is, "term count");
    if (nnz < 0) throw InvalidInput("read_program: negative term count");
    SparseRow row(static_cast<std::size_t>(nnz));
    for (auto& t : row) {
        t.var = read_value<int>(is, "variable index");
        t.coef = read_value<double>(is, "coefficient");
    }
    return row;
}

}  // namespace

void write_program(std::ostream& os, const ConicProgram& prog) {
    os << "sarisac-conic 1\n";
    os << "vars " << prog.num_vars << '\n';
    for (int i = 0; i < prog.num_vars; ++i)
        os << "name " << (i < static_cast<int>(prog.var_names.size()) ? prog.var_names[i] : "x") << '\n';
    os << "objective ";
    write_row(os, prog.objective_constant, prog.objective);
    os << "eq " << prog.eq_constraints.size() << '\n';
    for (const auto& c : prog.eq_constraints) write_row(os, c.rhs, c.row);
    os << "ineq " << prog.ineq_constraints.size() << '\n';
    for (const auto& c : prog.ineq_constraints) write_row(os, c.rhs, c.row);
    os << "soc " << prog.soc_constraints.size() << '\n';
    for (const auto& s : prog.soc_constraints) {
        os << "cone " << s.A.size() << '\n';
        for (std::size_t r = 0; r < s.A.size(); ++r) write_row(os, s.b[r], s.A[r]);
        os << "bound ";
        write_row(os, s.e, s.c);
    }
}

ConicProgram read_program(std::istream& is) {
    ConicProgram p;
    expect(is, "sarisac-conic");
    if (read_value<int>(is, "version") != 1) throw InvalidInput("read_program: unsupported version");
    expect(is, "vars");
    const int n = read_value<int>(is, "variable count");
    if (n < 0) throw InvalidInput("read_program: negative variable count");
    for (int i = 0; i < n; ++i) {
        expect(is, "name");
        p.add_variable(read_value<std::string>(is, "name"));
    }
    expect(is, "objective");
    p.objective = read_row(is, p.objective_constant);

    expect(is, "eq");
    const auto neq = read_value<long long>(is, "equality count");
    for (long long i = 0; i < neq; ++i) {
        LinearConstraint c;
        c.row = read_row(is, c.rhs);
        p.eq_constraints.push_back(std::move(c));
    }
    expect(is, "ineq");
    const auto nin = read_value<long long>(is, "inequality count");
    for (long long i = 0; i < nin; ++i) {
        LinearConstraint c;
        c.row = read_row(is, c.rhs);
        p.ineq_constraints.push_back(std::move(c));
    }
    expect(is, "soc");
    const auto nsoc = read_value<long long>(is, "cone count");
    for (long long i = 0; i < nsoc; ++i) {
        expect(is, "cone");
        const auto rows = read_value<long long>(is, "cone rows");
        if (rows <= 0) throw InvalidInput("read_program: empty cone");
        SocConstraint s;
        for (long long r = 0; r < rows; ++r) {
            double b = 0.0;
            s.A.push_back(read_row(is, b));
            s.b.push_back(b);
        }
        expect(is, "bound");
        s.c = read_row(is, s.e);
        p.soc_constraints.push_back(std::move(s));
    }
    p.validate();
    return p;
}

}  // namespace sarisac::conic
