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
#include <vector>

#include "wirtinger/common.hpp"

namespace wirtinger {

/// Real skew-symmetric matrix stored by its strict upper triangle, so that
/// Omega(i, j) == -Omega(j, i) holds bit-for-bit.
class SkewMatrix {
public:
    SkewMatrix() = default;
    explicit SkewMatrix(std::size_t n);

    /// Reads only the strict upper triangle of `dense`.
    static SkewMatrix from_upper(const Matrix& dense);
    /// Accepts a numerically skew matrix (|A + A^T|_max <= tol * (1 + |A|_max))
    /// and averages it into exact skewness.
    static SkewMatrix from_dense(const Matrix& dense, double tol = 1e-10);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, double value);

    Matrix dense() const;
    double max_abs() const;

private:
    std::size_t index(std::size_t i, std::size_t j) const;

    std::size_t n_ = 0;
    std::vector<double> upper_;
};

/// Orthogonal rotation (det +1) bringing Omega to 2x2 blocks [[0, l], [-l, 0]].
struct CanonicalForm {
    Matrix rotation;
    std::vector<double> lambdas;

    /// Block-diagonal matrix assembled from `lambdas`.
    Matrix blocks() const;
};

/// Gram-Schmidt in the inner product <u, v> = u^T G v. The output spans the
/// same subspace, is G-orthonormal and keeps the orientation of the input
/// order (the change of basis is upper triangular with positive diagonal).
/// Throws RankDeficient or BadMetric.
std::vector<Vector> orthonormalize(std::span<const Vector> basis, const Matrix& metric,
                                   const Tolerances& tol = default_tolerances());

/// Checks symmetry and positive definiteness; throws BadMetric.
void check_metric(const Matrix& metric, const Tolerances& tol = default_tolerances());

/// Pf(Omega) with Pf([[0, l], [-l, 0]]) = l. Row expansion for n <= 8,
/// Householder skew tridiagonalization above. Throws OddDimension.
double pfaffian(const SkewMatrix& omega);

/// Explicit Householder route, exposed for cross-checking the small-n path.
double pfaffian_householder(const SkewMatrix& omega);
double pfaffian_expansion(const SkewMatrix& omega);

/// Normal form of a skew matrix. Lambdas are sorted by descending |l|, with
/// non-negative values ahead of negative ones on ties; the product of the
/// lambdas equals Pf(Omega). Throws OddDimension or ConvergenceFailure.
CanonicalForm skew_canonical(const SkewMatrix& omega);

/// Perfect-matching expansion of Pf(Omega), i.e. the coefficient of
/// omega^m / m! against the volume form. Cost grows like (n-1)!!, so n is
/// capped at 12 (TooLarge).
double wedge_power_oracle(const SkewMatrix& omega);

}  // namespace wirtinger
