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

#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "wirtinger/common.hpp"
#include "wirtinger/exterior.hpp"
#include "wirtinger/structures.hpp"

namespace wirtinger {

/// An ordered list of 2m ambient vectors; the order is the orientation.
class OrientedSubspace {
public:
    explicit OrientedSubspace(std::vector<Vector> vectors);

    std::size_t ambient_dim() const noexcept { return ambient_dim_; }
    /// m, half the real dimension.
    std::size_t complex_dim() const noexcept { return vectors_.size() / 2; }
    const std::vector<Vector>& vectors() const noexcept { return vectors_; }

private:
    std::size_t ambient_dim_ = 0;
    std::vector<Vector> vectors_;
};

enum class Classification { Complex, AntiComplex, Isotropic, Generic };

std::string_view to_string(Classification c);

struct PulledBackForm {
    std::vector<Vector> frame;  // metric-orthonormal, same orientation as the input
    SkewMatrix omega;           // omega(e_i, e_j)
};

struct AngleReport {
    double cos_alpha = 0.0;  // unclamped value of the Kaehler function
    double alpha = 0.0;      // arccos of the clamped value, radians in [0, pi]
    std::vector<double> lambdas;
    Classification classification = Classification::Generic;
    double complexity_residual = 0.0;
};

struct WirtingerCheck {
    double cos_alpha = 0.0;
    double bound_margin = 0.0;         // 1 - |cos alpha|, never below -1e-9 for valid input
    double complexity_residual = 0.0;  // |(I - P_W) J P_W|_2 in the metric norm
    bool bound_holds = false;
    bool equality_consistent = false;  // residual ~ 0 implies |cos alpha| ~ 1
};

PulledBackForm pullback_form(const CompatibleStructure& s, const OrientedSubspace& w,
                             const Tolerances& tol = default_tolerances());

/// cos alpha = omega^m|_W / (m! vol_W), i.e. Pf of the pulled-back form on an
/// oriented orthonormal frame.
double kahler_function(const CompatibleStructure& s, const OrientedSubspace& w,
                       const Tolerances& tol = default_tolerances());

/// Principal Kaehler cosines: the canonical-form lambdas of the pulled-back
/// form. Their product is the Kaehler function.
std::vector<double> principal_angles(const CompatibleStructure& s, const OrientedSubspace& w,
                                     const Tolerances& tol = default_tolerances());

Classification classify(double cos_alpha, std::span<const double> lambdas, const SkewMatrix& omega,
                        double tol = 1e-8);

/// Norm of the part of J(W) leaving W, measured in the metric. Zero exactly
/// when W is J-invariant; one when J(W) is orthogonal to W.
double complexity_residual(const CompatibleStructure& s, const std::vector<Vector>& frame);

WirtingerCheck verify_wirtinger(const CompatibleStructure& s, const OrientedSubspace& w,
                                const Tolerances& tol = default_tolerances());

/// Full per-point evaluation used by the CLI and the chart scans.
AngleReport angle_report(const CompatibleStructure& s, const OrientedSubspace& w,
                         const Tolerances& tol = default_tolerances());

}  // namespace wirtinger
