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

#include "wirtinger/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wirtinger {

SkewMatrix::SkewMatrix(std::size_t n) : n_(n), upper_(n * (n > 0 ? n - 1 : 0) / 2, 0.0) {}

std::size_t SkewMatrix::index(std::size_t i, std::size_t j) const {
    // row-major strict upper triangle, i < j
    return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

double SkewMatrix::operator()(std::size_t i, std::size_t j) const {
    if (i == j) return 0.0;
    return i < j ? upper_[index(i, j)] : -upper_[index(j, i)];
}

void SkewMatrix::set(std::size_t i, std::size_t j, double value) {
    if (i == j) {
        throw Error(ErrorKind::InvalidArgument, "diagonal of a skew matrix is fixed at zero");
    }
    if (i < j) {
        upper_[index(i, j)] = value;
    } else {
        upper_[index(j, i)] = -value;
    }
}

SkewMatrix SkewMatrix::from_upper(const Matrix& dense) {
    if (dense.rows() != dense.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "skew matrix must be square");
    }
    require_finite(dense, "skew matrix");
    SkewMatrix out(static_cast<std::size_t>(dense.rows()));
    for (Eigen::Index i = 0; i < dense.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < dense.cols(); ++j) {
            out.set(i, j, dense(i, j));
        }
    }
    return out;
}

SkewMatrix SkewMatrix::from_dense(const Matrix& dense, double tol) {
    if (dense.rows() != dense.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "skew matrix must be square");
    }
    require_finite(dense, "skew matrix");
    const double defect = wirtinger::max_abs(dense + dense.transpose());
    if (defect > tol * (1.0 + wirtinger::max_abs(dense))) {
        throw Error(ErrorKind::InvalidArgument,
                    "matrix is not skew-symmetric (|A + A^T|_max = " + std::to_string(defect) + ")");
    }
    SkewMatrix out(static_cast<std::size_t>(dense.rows()));
    for (Eigen::Index i = 0; i < dense.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < dense.cols(); ++j) {
            out.set(i, j, 0.5 * (dense(i, j) - dense(j, i)));
        }
    }
    return out;
}

Matrix SkewMatrix::dense() const {
    Matrix m = Matrix::Zero(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double v = upper_[index(i, j)];
            m(i, j) = v;
            m(j, i) = -v;
        }
    }
    return m;
}

double SkewMatrix::max_abs() const {
    double best = 0.0;
    for (double v : upper_) best = std::max(best, std::abs(v));
    return best;
}

Matrix CanonicalForm::blocks() const {
    const auto n = static_cast<Eigen::Index>(2 * lambdas.size());
    Matrix b = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(2 * k);
        b(i, i + 1) = lambdas[k];
        b(i + 1, i) = -lambdas[k];
    }
    return b;
}

void check_metric(const Matrix& metric, const Tolerances& tol) {
    if (metric.rows() != metric.cols() || metric.rows() == 0) {
        throw Error(ErrorKind::BadMetric, "metric must be a non-empty square matrix");
    }
    if (!metric.allFinite()) {
        throw Error(ErrorKind::BadMetric, "metric contains NaN or infinity");
    }
    const double scale = std::max(1.0, max_abs(metric));
    if (max_abs(metric - metric.transpose()) > tol.metric_symmetry * scale) {
        throw Error(ErrorKind::BadMetric, "metric is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(metric, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
        throw Error(ErrorKind::BadMetric, "metric eigenvalues did not converge");
    }
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(hi > 0.0) || lo <= tol.metric_conditioning * hi) {
        throw Error(ErrorKind::BadMetric, "metric is not positive definite");
    }
}

std::vector<Vector> orthonormalize(std::span<const Vector> basis, const Matrix& metric,
                                   const Tolerances& tol) {
    check_metric(metric, tol);
    const Eigen::Index dim = metric.rows();
    for (const auto& v : basis) {
        if (v.size() != dim) {
            throw Error(ErrorKind::DimensionMismatch, "basis vector dimension " +
                                                          std::to_string(v.size()) +
                                                          " does not match metric " +
                                                          std::to_string(dim));
        }
        require_finite(v, "basis vector");
    }
    if (static_cast<Eigen::Index>(basis.size()) > dim) {
        throw Error(ErrorKind::RankDeficient, "more vectors than ambient dimensions");
    }

    auto inner = [&](const Vector& a, const Vector& b) { return a.dot(metric * b); };

    std::vector<Vector> frame;
    frame.reserve(basis.size());
    // Each step's squared residual ratio is det(Gram_k) / (det(Gram_{k-1}) |v_k|^2):
    // the Gram determinant gained by v_k, relative to v_k's own scale.
    for (const auto& v : basis) {
        const double norm0 = std::sqrt(inner(v, v));
        if (!(norm0 > 0.0)) {
            throw Error(ErrorKind::RankDeficient, "zero vector in basis");
        }
        Vector r = v / norm0;
        // two passes of modified Gram-Schmidt
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& e : frame) r -= inner(e, r) * e;
        }
        const double rn = std::sqrt(inner(r, r));
        if (!(rn * rn >= tol.rank)) {
            throw Error(ErrorKind::RankDeficient,
                        "basis is linearly dependent (relative Gram determinant below " +
                            std::to_string(tol.rank) + ")");
        }
        frame.push_back(r / rn);
    }
    return frame;
}

namespace {

void require_even(const SkewMatrix& omega) {
    if (omega.size() % 2 != 0) {
        throw Error(ErrorKind::OddDimension,
                    "Pfaffian needs even size, got " + std::to_string(omega.size()));
    }
}

double expand(const Matrix& a, std::vector<Eigen::Index>& idx) {
    if (idx.empty()) return 1.0;
    if (idx.size() == 2) return a(idx[0], idx[1]);
    const Eigen::Index first = idx.front();
    double sum = 0.0;
    // Pf(A) = sum_j (-1)^(j+1) a_{0j} Pf(A without rows/cols 0, j), j counted from 1
    for (std::size_t j = 1; j < idx.size(); ++j) {
        const double a0j = a(first, idx[j]);
        if (a0j == 0.0) continue;
        std::vector<Eigen::Index> rest;
        rest.reserve(idx.size() - 2);
        for (std::size_t k = 1; k < idx.size(); ++k) {
            if (k != j) rest.push_back(idx[k]);
        }
        const double sign = (j % 2 == 1) ? 1.0 : -1.0;
        sum += sign * a0j * expand(a, rest);
    }
    return sum;
}

}  // namespace

double pfaffian_expansion(const SkewMatrix& omega) {
    require_even(omega);
    const Matrix a = omega.dense();
    std::vector<Eigen::Index> idx(omega.size());
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    return expand(a, idx);
}

double pfaffian_householder(const SkewMatrix& omega) {
    require_even(omega);
    const auto n = static_cast<Eigen::Index>(omega.size());
    if (n == 0) return 1.0;
    Matrix a = omega.dense();
    double pf = 1.0;
    for (Eigen::Index i = 0; i + 2 < n; ++i) {
        const Eigen::Index len = n - i - 1;
        Vector x = a.col(i).tail(len);
        const double sigma = x.tail(len - 1).squaredNorm();
        double alpha = x(0);
        if (sigma != 0.0) {
            const double norm_x = std::sqrt(x(0) * x(0) + sigma);
            Vector v = x;
            if (x(0) <= 0.0) {
                v(0) -= norm_x;
                alpha = norm_x;
            } else {
                v(0) += norm_x;
                alpha = -norm_x;
            }
            v.normalize();
            // H A H with H = I - 2 v v^T, using v^T A v = 0 for skew A
            const Vector w = 2.0 * (a.bottomRightCorner(len, len) * v);
            a.bottomRightCorner(len, len) += v * w.transpose() - w * v.transpose();
            pf = -pf;  // det H = -1
        }
        a(i + 1, i) = alpha;
        a(i, i + 1) = -alpha;
        a.col(i).tail(len - 1).setZero();
        a.row(i).tail(len - 1).setZero();
        if (i % 2 == 0) pf *= -alpha;
    }
    pf *= a(n - 2, n - 1);
    return pf;
}

double pfaffian(const SkewMatrix& omega) {
    require_even(omega);
    return omega.size() <= 8 ? pfaffian_expansion(omega) : pfaffian_householder(omega);
}

CanonicalForm skew_canonical(const SkewMatrix& omega) {
    require_even(omega);
    const auto n = static_cast<Eigen::Index>(omega.size());
    const std::size_t m = omega.size() / 2;
    CanonicalForm out;
    out.rotation = Matrix::Identity(n, n);
    out.lambdas.assign(m, 0.0);
    if (n == 0) return out;

    const Matrix a = omega.dense();
    // -Omega^2 = Omega^T Omega has eigenvalues l_k^2 in pairs; its eigenplanes
    // are Omega-invariant. Peel off the top plane, then recurse on Omega
    // restricted to the orthogonal complement, rescaled so that small lambdas
    // keep full relative precision.
    Matrix q(n, n);
    Eigen::Index filled = 0;
    Matrix complement = Matrix::Identity(n, n);
    std::vector<std::pair<Eigen::Index, double>> block_of;  // (first column, lambda)

    auto add_plane = [&](const Vector& u, const Vector& p) {
        q.col(filled) = u;
        q.col(filled + 1) = p;
        block_of.emplace_back(filled, u.dot(a * p));
        filled += 2;
    };

    while (filled < n) {
        const Eigen::Index d = complement.cols();
        Matrix b = complement.transpose() * a * complement;
        b = 0.5 * (b - b.transpose());
        const double nb = max_abs(b);
        if (nb == 0.0) {
            for (Eigen::Index c = 0; c < d; c += 2) add_plane(complement.col(c), complement.col(c + 1));
            break;
        }
        b /= nb;
        Matrix s = b.transpose() * b;
        s = 0.5 * (s + s.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
        if (eig.info() != Eigen::Success) {
            throw Error(ErrorKind::ConvergenceFailure, "symmetric eigensolve of -Omega^2 failed");
        }
        Vector y1 = eig.eigenvectors().col(d - 1);
        Vector by = b * y1;
        double sigma = by.norm();
        if (!(sigma > 0.0)) {
            throw Error(ErrorKind::ConvergenceFailure, "top eigenvalue of -Omega^2 vanished");
        }
        Vector y2 = -by / sigma;
        y2 -= y1.dot(y2) * y1;
        y2.normalize();

        // Fix the in-plane rotation: u is the plane's projection of the first
        // standard axis it is most aligned with, p its partner -Omega u / |Omega u|.
        const Vector u0 = complement * y1;
        const Vector p0 = complement * y2;
        Eigen::Index axis = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double w = u0(i) * u0(i) + p0(i) * p0(i);
            if (w > best + 1e-12) {
                best = w;
                axis = i;
            }
        }
        const double cu = u0(axis);
        const double cp = p0(axis);
        const double cn = std::hypot(cu, cp);
        const Vector z1 = (cu * y1 + cp * y2) / cn;
        by = b * z1;
        sigma = by.norm();
        Vector z2 = -by / sigma;
        z2 -= z1.dot(z2) * z1;
        z2.normalize();
        add_plane(complement * z1, complement * z2);

        if (d == 2) break;
        Matrix pair(d, 2);
        pair << z1, z2;
        Eigen::HouseholderQR<Matrix> qr(pair);
        const Matrix full = qr.householderQ();
        complement = complement * full.rightCols(d - 2);
    }

    const double scale = std::max(1.0, omega.max_abs());
    // Order by descending |lambda| (stable: eigen order already roughly descending).
    std::vector<std::size_t> order(block_of.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return std::abs(block_of[x].second) > std::abs(block_of[y].second);
    });
    for (std::size_t k = 0; k < m; ++k) {
        const auto [col, lambda] = block_of[order[k]];
        out.rotation.col(2 * k) = q.col(col);
        out.rotation.col(2 * k + 1) = q.col(col + 1);
        out.lambdas[k] = lambda;
    }
    // Orientation: swapping the columns of the smallest block negates its lambda.
    if (out.rotation.determinant() < 0.0) {
        const auto last = static_cast<Eigen::Index>(2 * (m - 1));
        out.rotation.col(last).swap(out.rotation.col(last + 1));
        out.lambdas[m - 1] = -out.lambdas[m - 1];
    }
    // Within a run of equal |lambda|, non-negative values come first.
    for (bool swapped = true; swapped;) {
        swapped = false;
        for (std::size_t k = 0; k + 1 < m; ++k) {
            const double lk = out.lambdas[k];
            const double ln = out.lambdas[k + 1];
            if (lk < 0.0 && ln >= 0.0 && std::abs(std::abs(lk) - std::abs(ln)) <= 1e-12 * scale) {
                // exchanging two whole blocks keeps det(R)
                const auto i = static_cast<Eigen::Index>(2 * k);
                Matrix tmp = out.rotation.middleCols(i, 2);
                out.rotation.middleCols(i, 2) = out.rotation.middleCols(i + 2, 2);
                out.rotation.middleCols(i + 2, 2) = tmp;
                std::swap(out.lambdas[k], out.lambdas[k + 1]);
                swapped = true;
            }
        }
    }
    return out;
}

double wedge_power_oracle(const SkewMatrix& omega) {
    const std::size_t n = omega.size();
    if (n > default_tolerances().oracle_max_dim) {
        throw Error(ErrorKind::TooLarge, "perfect-matching enumeration is capped at n = 12");
    }
    if (n % 2 != 0) {
        throw Error(ErrorKind::OddDimension, "odd size has no perfect matching");
    }
    if (n == 0) return 1.0;

    // Enumerate every perfect matching as a permutation (a1 b1 a2 b2 ...) with
    // a_k < b_k and a_1 < a_2 < ...; the sign comes from its inversion count.
    std::vector<std::size_t> perm;
    std::vector<bool> taken(n, false);
    double total = 0.0;

    auto inversion_sign = [](const std::vector<std::size_t>& p) {
        std::size_t inv = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            for (std::size_t j = i + 1; j < p.size(); ++j) {
                if (p[i] > p[j]) ++inv;
            }
        }
        return inv % 2 == 0 ? 1.0 : -1.0;
    };

    auto recurse = [&](auto&& self) -> void {
        std::size_t first = 0;
        while (first < n && taken[first]) ++first;
        if (first == n) {
            double term = inversion_sign(perm);
            for (std::size_t k = 0; k < perm.size(); k += 2) term *= omega(perm[k], perm[k + 1]);
            total += term;
            return;
        }
        taken[first] = true;
        for (std::size_t partner = first + 1; partner < n; ++partner) {
            if (taken[partner]) continue;
            taken[partner] = true;
            perm.push_back(first);
            perm.push_back(partner);
            self(self);
            perm.pop_back();
            perm.pop_back();
            taken[partner] = false;
        }
        taken[first] = false;
    };
    recurse(recurse);
    return total;
}

}  // namespace wirtinger
