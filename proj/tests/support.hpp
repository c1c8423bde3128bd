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

// Shared generators for the test suites. Deterministic per seed.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "wirtinger/exterior.hpp"

namespace wirtinger::testing {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
    }

    Vector vector(Eigen::Index n) {
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
        return v;
    }

    Matrix matrix(Eigen::Index r, Eigen::Index c) {
        Matrix m(r, c);
        for (Eigen::Index j = 0; j < c; ++j) {
            for (Eigen::Index i = 0; i < r; ++i) m(i, j) = normal();
        }
        return m;
    }

    SkewMatrix skew(std::size_t n) {
        SkewMatrix s(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) s.set(i, j, normal());
        }
        return s;
    }

    /// Columns with relative Gram determinant (det G / prod G_ii) >= floor,
    /// i.e. comfortably above the library's rank cutoff.
    Matrix well_conditioned(Eigen::Index rows, Eigen::Index cols, double floor = 1e-6) {
        for (;;) {
            const Matrix a = matrix(rows, cols);
            const Matrix g = a.transpose() * a;
            double ratio = g.determinant();
            for (Eigen::Index i = 0; i < cols; ++i) ratio /= g(i, i);
            if (ratio >= floor) return a;
        }
    }

    /// Random invertible k x k with singular values in [0.5, 2] and the given
    /// determinant sign.
    Matrix change_of_basis(Eigen::Index k, bool positive) {
        Matrix d = Matrix::Zero(k, k);
        for (Eigen::Index i = 0; i < k; ++i) d(i, i) = uniform(0.5, 2.0);
        Matrix m = orthogonal(k) * d * orthogonal(k);
        if ((m.determinant() > 0.0) != positive) m.col(0) = -m.col(0);
        return m;
    }

    /// Haar-ish orthogonal matrix from a QR factorization with sign fix.
    Matrix orthogonal(Eigen::Index n) {
        const Matrix a = matrix(n, n);
        Eigen::HouseholderQR<Matrix> qr(a);
        Matrix q = qr.householderQ();
        const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (r(i, i) < 0.0) q.col(i) = -q.col(i);
        }
        return q;
    }

    Matrix rotation(Eigen::Index n) {
        Matrix q = orthogonal(n);
        if (q.determinant() < 0.0) q.col(0) = -q.col(0);
        return q;
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

inline Matrix block_skew(const std::vector<double>& lambdas) {
    CanonicalForm cf;
    cf.lambdas = lambdas;
    return cf.blocks();
}

}  // namespace wirtinger::testing
