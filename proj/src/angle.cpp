/*
 * Copyright 2026 The Wirtinger Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "wirtinger/angle.hpp"

#include <algorithm>
#include <cmath>

namespace wirtinger {

OrientedSubspace::OrientedSubspace(std::vector<Vector> vectors) : vectors_(std::move(vectors)) {
    if (vectors_.empty() || vectors_.size() % 2 != 0) {
        throw Error(ErrorKind::OddDimension,
                    "an oriented subspace needs an even, positive number of vectors, got " +
                        std::to_string(vectors_.size()));
    }
    ambient_dim_ = static_cast<std::size_t>(vectors_.front().size());
    for (const auto& v : vectors_) {
        if (static_cast<std::size_t>(v.size()) != ambient_dim_) {
            throw Error(ErrorKind::DimensionMismatch, "spanning vectors differ in dimension");
        }
        require_finite(v, "spanning vector");
    }
    if (vectors_.size() > ambient_dim_) {
        throw Error(ErrorKind::RankDeficient, "more spanning vectors than ambient dimensions");
    }
}

std::string_view to_string(Classification c) {
    switch (c) {
        case Classification::Complex: return "complex";
        case Classification::AntiComplex: return "anti-complex";
        case Classification::Isotropic: return "isotropic";
        case Classification::Generic: return "generic";
    }
    return "generic";
}

PulledBackForm pullback_form(const CompatibleStructure& s, const OrientedSubspace& w,
                             const Tolerances& tol) {
    if (w.ambient_dim() != s.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "subspace lives in dimension " +
                                                      std::to_string(w.ambient_dim()) +
                                                      ", structure in " + std::to_string(s.dim()));
    }
    PulledBackForm out;
    out.frame = orthonormalize(w.vectors(), s.metric(), tol);
    const auto k = static_cast<Eigen::Index>(out.frame.size());
    Matrix e(static_cast<Eigen::Index>(s.dim()), k);
    for (Eigen::Index i = 0; i < k; ++i) e.col(i) = out.frame[static_cast<std::size_t>(i)];
    // Omega_ij = <J e_i, e_j> = (J E)^T G E
    const Matrix raw = (s.jop() * e).transpose() * s.metric() * e;
    out.omega = SkewMatrix(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = i + 1; j < k; ++j) out.omega.set(i, j, 0.5 * (raw(i, j) - raw(j, i)));
    }
    return out;
}

double kahler_function(const CompatibleStructure& s, const OrientedSubspace& w, const Tolerances& tol) {
    return pfaffian(pullback_form(s, w, tol).omega);
}

std::vector<double> principal_angles(const CompatibleStructure& s, const OrientedSubspace& w,
                                     const Tolerances& tol) {
    return skew_canonical(pullback_form(s, w, tol).omega).lambdas;
}

Classification classify(double cos_alpha, std::span<const double> /*lambdas*/, const SkewMatrix& omega,
                        double tol) {
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "classification tolerance must be positive");
    if (cos_alpha >= 1.0 - tol) return Classification::Complex;
    if (cos_alpha <= -1.0 + tol) return Classification::AntiComplex;
    // omega|_W = 0, not merely cos alpha = 0: a single vanishing lambda already
    // kills the product when m > 1.
    if (omega.max_abs() <= tol) return Classification::Isotropic;
    return Classification::Generic;
}

double complexity_residual(const CompatibleStructure& s, const std::vector<Vector>& frame) {
    const auto dim = static_cast<Eigen::Index>(s.dim());
    const auto k = static_cast<Eigen::Index>(frame.size());
    Matrix e(dim, k);
    for (Eigen::Index i = 0; i < k; ++i) e.col(i) = frame[static_cast<std::size_t>(i)];
    const Matrix je = s.jop() * e;
    // P_W y = E E^T G y for a G-orthonormal E
    const Matrix leak = je - e * (e.transpose() * s.metric() * je);
    // |y|_G = |L^T y| with G = L L^T
    const Eigen::LLT<Matrix> llt(s.metric());
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::BadMetric, "metric is not positive definite");
    }
    const Matrix scaled = llt.matrixU() * leak;
    Eigen::JacobiSVD<Matrix> svd(scaled);
    return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()(0);
}

WirtingerCheck verify_wirtinger(const CompatibleStructure& s, const OrientedSubspace& w,
                                const Tolerances& tol) {
    const PulledBackForm pb = pullback_form(s, w, tol);
    WirtingerCheck out;
    out.cos_alpha = pfaffian(pb.omega);
    out.bound_margin = 1.0 - std::abs(out.cos_alpha);
    out.complexity_residual = complexity_residual(s, pb.frame);
    out.bound_holds = out.bound_margin >= -tol.derived;
    out.equality_consistent = out.complexity_residual > tol.equality_residual ||
                              std::abs(out.cos_alpha) >= 1.0 - tol.equality_gap;
    return out;
}

AngleReport angle_report(const CompatibleStructure& s, const OrientedSubspace& w, const Tolerances& tol) {
    const PulledBackForm pb = pullback_form(s, w, tol);
    AngleReport r;
    r.cos_alpha = pfaffian(pb.omega);
    r.alpha = std::acos(std::clamp(r.cos_alpha, -1.0, 1.0));
    r.lambdas = skew_canonical(pb.omega).lambdas;
    r.classification = classify(r.cos_alpha, r.lambdas, pb.omega, tol.classify);
    r.complexity_residual = complexity_residual(s, pb.frame);
    return r;
}

}  // namespace wirtinger
