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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace wirtinger {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ErrorKind {
    RankDeficient,
    BadMetric,
    OddDimension,
    ConvergenceFailure,
    TooLarge,
    DimensionMismatch,
    NonFinite,
    InvalidStructure,
    NotUnit,
    UnknownCatalogEntry,
    ChartDomain,
    StepTooLarge,
    DegenerateImmersion,
    GridTooSmall,
    InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (and the
/// CLI exit-code mapping) can dispatch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Numerical cutoffs used across the library. Defaults follow the
/// contracts documented in each header; everything that compares against a
/// threshold takes it from here.
struct Tolerances {
    double algebraic = 1e-10;        // identities that hold exactly in exact arithmetic
    double derived = 1e-9;           // comparisons against independently derived values
    double rank = 1e-12;             // relative Gram determinant below which a frame is dependent
    double orthonormal = 1e-12;      // Gram matrix vs identity after orthonormalization
    double metric_symmetry = 1e-12;  // |G - G^T|_max
    double metric_conditioning = 1e-10;  // smallest / largest metric eigenvalue
    double structure = 1e-10;        // |J^2 + I|_max and |J^T G J - G|_max
    double unit = 1e-12;             // | |p| - 1 | for S^6 base points
    double classify = 1e-8;          // complex / anti-complex / isotropic cutoff
    double immersion_rank = 1e-10;   // relative Gram determinant of a chart Jacobian
    double singular = 1e-6;          // |cos alpha| >= 1 - singular flags alpha as non-smooth
    double equality_residual = 1e-8; // complexity residual considered zero
    double equality_gap = 1e-6;      // implied |cos alpha| >= 1 - equality_gap
    std::size_t oracle_max_dim = 12;
};

const Tolerances& default_tolerances();

double max_abs(const Matrix& m);
bool all_finite(const Matrix& m);
void require_finite(const Matrix& m, std::string_view what);

}  // namespace wirtinger
