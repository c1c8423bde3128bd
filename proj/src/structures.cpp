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

#include "wirtinger/structures.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wirtinger/exterior.hpp"

namespace wirtinger {

namespace {

void require_square(const Matrix& m, std::string_view what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw Error(ErrorKind::DimensionMismatch, std::string(what) + " must be non-empty and square");
    }
}

Matrix standard_jop(std::size_t n) {
    const auto d = static_cast<Eigen::Index>(2 * n);
    Matrix j = Matrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; k += 2) {
        j(k + 1, k) = 1.0;   // e_{2k-1} -> e_{2k}
        j(k, k + 1) = -1.0;  // e_{2k} -> -e_{2k-1}
    }
    return j;
}

// residual tolerances grow with the size of the entries involved
double j_scale(const Matrix& j) {
    const double s = std::max(1.0, max_abs(j));
    return s * s;
}

}  // namespace

CompatibleStructure::CompatibleStructure(Matrix metric, Matrix jop, NoCheck)
    : metric_(std::move(metric)), jop_(std::move(jop)) {
    require_square(metric_, "metric");
    require_square(jop_, "almost complex operator");
    if (metric_.rows() != jop_.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "metric and J differ in size");
    }
    require_finite(metric_, "metric");
    require_finite(jop_, "almost complex operator");
}

CompatibleStructure::CompatibleStructure(Matrix metric, Matrix jop, const Tolerances& tol)
    : CompatibleStructure(std::move(metric), std::move(jop), NoCheck{}) {
    if (dim() % 2 != 0) {
        throw Error(ErrorKind::OddDimension, "almost complex structures need even dimension");
    }
    const auto diag = validate(*this, tol);
    if (!diag.passed) {
        throw Error(ErrorKind::InvalidStructure,
                    "J^2+I residual " + std::to_string(diag.j_square_residual) +
                        ", J^T G J - G residual " + std::to_string(diag.compatibility_residual) +
                        ", metric eigenvalues [" + std::to_string(diag.metric_min_eigenvalue) + ", " +
                        std::to_string(diag.metric_max_eigenvalue) + "]");
    }
}

CompatibleStructure CompatibleStructure::unchecked(Matrix metric, Matrix jop) {
    return CompatibleStructure(std::move(metric), std::move(jop), NoCheck{});
}

StructureDiagnostics validate(const CompatibleStructure& s, const Tolerances& tol) {
    StructureDiagnostics d;
    const Matrix& g = s.metric();
    const Matrix& j = s.jop();
    const auto n = g.rows();
    d.j_square_residual = max_abs(j * j + Matrix::Identity(n, n));
    d.compatibility_residual = max_abs(j.transpose() * g * j - g);
    d.symmetry_residual = max_abs(g - g.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (g + g.transpose()), Eigen::EigenvaluesOnly);
    if (eig.info() == Eigen::Success) {
        d.metric_min_eigenvalue = eig.eigenvalues().minCoeff();
        d.metric_max_eigenvalue = eig.eigenvalues().maxCoeff();
    } else {
        d.metric_min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
        d.metric_max_eigenvalue = std::numeric_limits<double>::quiet_NaN();
    }
    const double gs = std::max(1.0, max_abs(g));
    const double js = j_scale(j);
    d.passed = n % 2 == 0 && d.j_square_residual <= tol.structure * js &&
               d.compatibility_residual <= tol.structure * gs * js &&
               d.symmetry_residual <= tol.metric_symmetry * gs &&
               d.metric_max_eigenvalue > 0.0 &&
               d.metric_min_eigenvalue > tol.metric_conditioning * d.metric_max_eigenvalue;
    return d;
}

CompatibleStructure standard_structure(std::size_t n) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "complex dimension must be positive");
    const auto d = static_cast<Eigen::Index>(2 * n);
    return CompatibleStructure(Matrix::Identity(d, d), standard_jop(n));
}

CompatibleStructure conjugated_structure(const Matrix& a) {
    require_square(a, "conjugating matrix");
    if (a.rows() % 2 != 0) {
        throw Error(ErrorKind::OddDimension, "conjugating matrix must have even size");
    }
    const auto lu = a.fullPivLu();
    if (!lu.isInvertible()) {
        throw Error(ErrorKind::InvalidArgument, "conjugating matrix is singular");
    }
    const Matrix j0 = standard_jop(static_cast<std::size_t>(a.rows() / 2));
    Matrix g = a.transpose() * a;
    g = 0.5 * (g + g.transpose());
    Matrix j = lu.solve(j0 * a);
    return CompatibleStructure(std::move(g), std::move(j));
}

CompatibleStructure random_compatible(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "complex dimension must be positive");
    constexpr double max_condition = 100.0;
    const auto d = static_cast<Eigen::Index>(2 * n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (;;) {
        Matrix a(d, d);
        for (Eigen::Index c = 0; c < d; ++c) {
            for (Eigen::Index r = 0; r < d; ++r) a(r, c) = normal(rng);
        }
        Eigen::JacobiSVD<Matrix> svd(a);
        const auto& sv = svd.singularValues();
        if (sv(d - 1) <= 0.0 || sv(0) / sv(d - 1) > max_condition) continue;
        return conjugated_structure(a);
    }
}

double kahler_form(const CompatibleStructure& s, const Vector& u, const Vector& v) {
    const auto d = static_cast<Eigen::Index>(s.dim());
    if (u.size() != d || v.size() != d) {
        throw Error(ErrorKind::DimensionMismatch, "vectors must have the structure's dimension");
    }
    return s.apply(u).dot(s.metric() * v);
}

Vector cross7(const Vector& u, const Vector& v) {
    if (u.size() != 7 || v.size() != 7) {
        throw Error(ErrorKind::DimensionMismatch, "cross product is defined on R^7");
    }
    Vector w = Vector::Zero(7);
    for (const auto& t : OctonionTable::triples) {
        for (int shift = 0; shift < 3; ++shift) {
            const int a = t[shift] - 1;
            const int b = t[(shift + 1) % 3] - 1;
            const int c = t[(shift + 2) % 3] - 1;
            w(c) += u(a) * v(b) - u(b) * v(a);
        }
    }
    return w;
}

Matrix s6_base_rotation(const Vector& p) {
    if (p.size() != 7) throw Error(ErrorKind::DimensionMismatch, "S^6 lives in R^7");
    const Vector e7 = Vector::Unit(7, 6);
    const Vector w = e7 - p;
    const double ww = w.squaredNorm();
    if (ww == 0.0) return Matrix::Identity(7, 7);
    Matrix h = Matrix::Identity(7, 7) - (2.0 / ww) * w * w.transpose();
    h.col(0) = -h.col(0);  // reflection composed with a reflection: det +1
    return h;
}

CompatibleStructure SphereTangentStructure::intrinsic() const {
    Matrix j = tangent_basis.transpose() * jop * tangent_basis;
    return CompatibleStructure(Matrix::Identity(6, 6), std::move(j));
}

SphereTangentStructure s6_structure(const Vector& p, const Tolerances& tol) {
    if (p.size() != 7) throw Error(ErrorKind::DimensionMismatch, "S^6 lives in R^7");
    require_finite(p, "base point");
    if (std::abs(p.norm() - 1.0) > tol.unit) {
        throw Error(ErrorKind::NotUnit, "base point norm " + std::to_string(p.norm()));
    }
    SphereTangentStructure out;
    out.point = p;
    out.jop = Matrix(7, 7);
    for (Eigen::Index c = 0; c < 7; ++c) out.jop.col(c) = cross7(p, Vector::Unit(7, c));
    out.tangent_basis = s6_base_rotation(p).leftCols(6);
    return out;
}

CompatibleStructure StructureField::at(const Vector& x) const {
    if (static_cast<std::size_t>(x.size()) != chart_dim) {
        throw Error(ErrorKind::DimensionMismatch, "chart point has wrong dimension");
    }
    if (!(x.norm() < domain_radius)) {
        throw Error(ErrorKind::ChartDomain, name + " chart is defined for |x| < " +
                                                std::to_string(domain_radius));
    }
    return evaluator(x);
}

StructureField chart_field(std::string_view catalog_name, std::span<const double> params,
                           double smoothness_step) {
    if (!(smoothness_step > 0.0) || !std::isfinite(smoothness_step)) {
        throw Error(ErrorKind::InvalidArgument, "smoothness step must be positive");
    }
    StructureField f;
    f.name = std::string(catalog_name);
    f.smoothness_step = smoothness_step;

    if (catalog_name == "flat") {
        if (params.size() != 1 || !(params[0] >= 1.0) || params[0] != std::floor(params[0])) {
            throw Error(ErrorKind::InvalidArgument, "flat field takes one parameter: complex dimension n >= 1");
        }
        const auto n = static_cast<std::size_t>(params[0]);
        const CompatibleStructure s = standard_structure(n);
        f.ambient_dim = 2 * n;
        f.chart_dim = 2 * n;
        f.evaluator = [s](const Vector&) { return s; };
        return f;
    }

    if (catalog_name == "s6-orthographic") {
        Vector base = Vector::Unit(7, 6);
        if (params.size() == 7) {
            base = Eigen::Map<const Vector>(params.data(), 7);
        } else if (!params.empty()) {
            throw Error(ErrorKind::InvalidArgument, "s6-orthographic takes no parameters or a unit base point in R^7");
        }
        require_finite(base, "base point");
        if (std::abs(base.norm() - 1.0) > default_tolerances().unit) {
            throw Error(ErrorKind::NotUnit, "base point norm " + std::to_string(base.norm()));
        }
        const Matrix rot = s6_base_rotation(base);
        f.ambient_dim = 7;
        f.chart_dim = 6;
        f.domain_radius = 1.0;
        // x -> R (x, sqrt(1 - |x|^2)); J pulled back through the differential.
        f.evaluator = [rot](const Vector& x) {
            const double r2 = x.squaredNorm();
            if (!(r2 < 1.0)) throw Error(ErrorKind::ChartDomain, "orthographic chart needs |x| < 1");
            const double h = std::sqrt(1.0 - r2);
            Vector local(7);
            local << x, h;
            const Vector q = rot * local;
            Matrix dlocal(7, 6);
            dlocal.topRows(6).setIdentity();
            dlocal.row(6) = -x.transpose() / h;
            const Matrix d = rot * dlocal;
            Matrix jd(7, 6);
            for (Eigen::Index c = 0; c < 6; ++c) jd.col(c) = cross7(q, d.col(c));
            Matrix g = d.transpose() * d;
            g = 0.5 * (g + g.transpose());
            Matrix j = g.llt().solve(d.transpose() * jd);
            return CompatibleStructure(std::move(g), std::move(j));
        };
        return f;
    }

    throw Error(ErrorKind::UnknownCatalogEntry, "no structure field named '" + std::string(catalog_name) + "'");
}

Vector nijenhuis(const StructureField& field, const Vector& x, const Vector& X, const Vector& Y) {
    const auto d = static_cast<Eigen::Index>(field.chart_dim);
    if (x.size() != d || X.size() != d || Y.size() != d) {
        throw Error(ErrorKind::DimensionMismatch, "chart point and vectors must match the chart dimension");
    }
    const double h = field.smoothness_step;
    if (std::isfinite(field.domain_radius)) {
        if (h > 0.01 * field.domain_radius) {
            throw Error(ErrorKind::StepTooLarge, "smoothness step exceeds 1% of the chart radius");
        }
        if (!(x.norm() + 2.0 * h < field.domain_radius)) {
            throw Error(ErrorKind::ChartDomain, "point is within two steps of the chart boundary");
        }
    }

    const Matrix j = field.at(x).jop();
    std::vector<Matrix> partial(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) {
        Vector step = Vector::Zero(d);
        step(i) = h;
        partial[static_cast<std::size_t>(i)] =
            (field.at(x + step).jop() - field.at(x - step).jop()) / (2.0 * h);
    }
    auto directional = [&](const Vector& v) {
        Matrix out = Matrix::Zero(d, d);
        for (Eigen::Index i = 0; i < d; ++i) out += v(i) * partial[static_cast<std::size_t>(i)];
        return out;
    };

    // For constant X, Y: [A, B] = (D_A B) - (D_B A), so
    // [JX, JY] = (D_{JX} J) Y - (D_{JY} J) X, [JX, Y] = -(D_Y J) X,
    // [X, JY] = (D_X J) Y and [X, Y] = 0.
    const Vector jx = j * X;
    const Vector jy = j * Y;
    return directional(jx) * Y - directional(jy) * X + j * (directional(Y) * X) -
           j * (directional(X) * Y);
}

}  // namespace wirtinger
