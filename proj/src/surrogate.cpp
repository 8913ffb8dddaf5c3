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

#include "sarisac/surrogate.hpp"

#include <algorithm>

#include "sarisac/error.hpp"

namespace sarisac {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw InvalidInput(std::string("dimension mismatch: ") + what);
}

void check_bilinear(const CVec& a, const CMat& B, const CVec& x, const CVec& x0) {
    require(B.rows() == a.size(), "B must have len(a) rows");
    require(x.size() == a.size() && x0.size() == a.size(), "x, x0 must match len(a)");
}

}  // namespace

double taylor_norm_lower_bound(const CVec& v, const CVec& v0) {
    require(v.size() == v0.size(), "v and v0 must have equal length");
    return 2.0 * v0.dot(v).real() - v0.squaredNorm();
}

CVec alpha_map(const CVec& a, const CMat& B, const CVec& z1, const CVec& z2, const CMat& Z3,
               const CMat& Z4) {
    require(B.rows() == a.size(), "B must have len(a) rows");
    require(z1.size() == a.size() && z2.size() == a.size(), "z1, z2 must match len(a)");
    require(Z4.rows() == B.cols(), "Z4 must have cols(B) rows");
    require(Z3.cols() == Z4.cols(), "Z3 and Z4 must have equal column counts");

    const CVec v2 = B.adjoint() * a.conjugate().cwiseProduct(z2.conjugate());
    CVec out = Z3 * (Z4.adjoint() * v2);
    if (z1.squaredNorm() == 0.0) return out;
    require(out.size() == B.cols(), "Z3 must have cols(B) rows when z1 != 0");
    out += B.adjoint() * a.conjugate().cwiseProduct(z1.conjugate());
    return out;
}

double bilinear_norm2(const CVec& a, const CMat& B, const CVec& x, const CMat& Y) {
    check_bilinear(a, B, x, x);
    require(Y.rows() == B.cols(), "Y must have cols(B) rows");
    return (a.cwiseProduct(x).transpose() * B * Y).squaredNorm();
}

double omega_lower_bound(const CVec& a, const CMat& B, const CVec& x, const CVec& x0,
                         const CMat& Y, const CMat& Y0) {
    check_bilinear(a, B, x, x0);
    require(Y.rows() == B.cols() && Y0.rows() == B.cols(), "Y, Y0 must have cols(B) rows");
    require(Y.cols() == Y0.cols(), "Y and Y0 must have equal shapes");

    const CVec zero = CVec::Zero(a.size());
    const CMat eye = CMat::Identity(Y0.cols(), Y0.cols());
    const CVec alpha0 = alpha_map(a, B, x0, x0, Y0, Y0);
    const CVec alpha_x = alpha_map(a, B, x, x0, Y, Y0);
    const CVec alpha_mx = alpha_map(a, B, -x, x0, Y, Y0);
    const CVec alpha_c = alpha_map(a, B, zero, x0, eye, Y0);
    return alpha0.dot(alpha_x).real() - 0.5 * alpha_mx.squaredNorm() - alpha_c.squaredNorm() -
           0.5 * alpha0.squaredNorm();
}

double lambda_value(const CVec& a, const CMat& B, const CVec& x, const CVec& x0, const CVec& y,
                    const CVec& y0, LambdaVariant variant) {
    check_bilinear(a, B, x, x0);
    require(y.size() == B.cols() && y0.size() == B.cols(), "y, y0 must have cols(B) entries");

    cplx s{1.0, 0.0};
    switch (variant) {
        case LambdaVariant::plus: s = {1.0, 0.0}; break;
        case LambdaVariant::minus: s = {-1.0, 0.0}; break;
        case LambdaVariant::j: s = {0.0, 1.0}; break;
        case LambdaVariant::minus_j: s = {0.0, -1.0}; break;
    }
    const CVec ab_z3 = a.cwiseProduct(B * (s * y));
    const CVec ab_z4 = a.cwiseProduct(B * (s * y0));
    const CVec p = x.conjugate() + ab_z3;
    const CVec m = x.conjugate() - ab_z3;
    const CVec r = x0.conjugate() - ab_z4;
    return 0.25 * p.squaredNorm() - 0.5 * r.dot(m).real() + 0.25 * r.squaredNorm();
}

LambdaSlacks lambda_slacks(const CVec& a, const CMat& B, const CVec& x, const CVec& x0,
                           const CVec& y, const CVec& y0) {
    LambdaSlacks s;
    s.rho = std::max(lambda_value(a, B, x, x0, y, y0, LambdaVariant::plus),
                     lambda_value(a, B, x, x0, y, y0, LambdaVariant::minus));
    s.kappa = std::max(lambda_value(a, B, x, x0, y, y0, LambdaVariant::j),
                       lambda_value(a, B, x, x0, y, y0, LambdaVariant::minus_j));
    return s;
}

ReIm re_im_norm_identities(const CVec& v1, const CVec& v2) {
    require(v1.size() == v2.size(), "v1 and v2 must have equal length");
    const cplx jj{0.0, 1.0};
    ReIm out;
    out.re = 0.25 * ((v1 + v2).squaredNorm() - (v1 - v2).squaredNorm());
    out.im = 0.25 * ((v1 - jj * v2).squaredNorm() - (v1 + jj * v2).squaredNorm());
    return out;
}

}  // namespace sarisac
