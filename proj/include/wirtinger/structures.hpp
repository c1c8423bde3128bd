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

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>

#include "wirtinger/common.hpp"

namespace wirtinger {

/// A metric G together with an almost complex operator J satisfying
/// J^2 = -I and J^T G J = G. The checked constructor enforces both;
/// `unchecked` exists for diagnostics on arbitrary pairs.
class CompatibleStructure {
public:
    CompatibleStructure(Matrix metric, Matrix jop, const Tolerances& tol = default_tolerances());

    static CompatibleStructure unchecked(Matrix metric, Matrix jop);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(metric_.rows()); }
    const Matrix& metric() const noexcept { return metric_; }
    const Matrix& jop() const noexcept { return jop_; }

    Vector apply(const Vector& v) const { return jop_ * v; }
    double inner(const Vector& u, const Vector& v) const { return u.dot(metric_ * v); }

private:
    struct NoCheck {};
    CompatibleStructure(Matrix metric, Matrix jop, NoCheck);

    Matrix metric_;
    Matrix jop_;
};

struct StructureDiagnostics {
    double j_square_residual = 0.0;      // |J^2 + I|_max
    double compatibility_residual = 0.0; // |J^T G J - G|_max
    double symmetry_residual = 0.0;      // |G - G^T|_max
    double metric_min_eigenvalue = 0.0;
    double metric_max_eigenvalue = 0.0;
    bool passed = false;
};

StructureDiagnostics validate(const CompatibleStructure& s,
                              const Tolerances& tol = default_tolerances());

/// Flat C^n: identity metric, J e_{2k-1} = e_{2k}, J e_{2k} = -e_{2k-1}.
CompatibleStructure standard_structure(std::size_t n);

/// G = A^T A, J = A^{-1} J0 A with J0 the standard operator.
CompatibleStructure conjugated_structure(const Matrix& a);

/// Deterministic in `seed`; A is Gaussian and redrawn until cond(A) <= 100.
CompatibleStructure random_compatible(std::size_t n, std::uint64_t seed);

/// omega(u, v) = <J u, v>.
double kahler_form(const CompatibleStructure& s, const Vector& u, const Vector& v);

/// Multiplication table of the imaginary octonions: e_i e_j = e_k for each
/// listed (i, j, k) and its cyclic shifts, 1-based.
struct OctonionTable {
    static constexpr std::array<std::array<int, 3>, 7> triples{{
        {1, 2, 3}, {1, 4, 5}, {1, 7, 6}, {2, 4, 6}, {2, 5, 7}, {3, 4, 7}, {3, 6, 5},
    }};
};

/// Seven-dimensional cross product induced by OctonionTable.
Vector cross7(const Vector& u, const Vector& v);

/// Nearly-Kaehler structure of S^6 at a point p: J_p(v) = p x v. The 7x7
/// `jop` annihilates p and is only an almost complex structure on p^perp.
struct SphereTangentStructure {
    Vector point;
    Matrix jop;            // 7x7, ambient
    Matrix tangent_basis;  // 7x6, orthonormal basis of p^perp

    /// J in the coordinates of `tangent_basis` (metric = identity).
    CompatibleStructure intrinsic() const;
};

SphereTangentStructure s6_structure(const Vector& p, const Tolerances& tol = default_tolerances());

/// Rotation in SO(7) sending e7 to p; its first six columns frame p^perp.
Matrix s6_base_rotation(const Vector& p);

/// A compatible pair varying over chart coordinates.
struct StructureField {
    std::string name;
    std::size_t ambient_dim = 0;
    std::size_t chart_dim = 0;
    std::function<CompatibleStructure(const Vector&)> evaluator;
    double smoothness_step = 1e-4;
    /// Chart coordinates are valid for |x| < domain_radius.
    double domain_radius = std::numeric_limits<double>::infinity();

    CompatibleStructure at(const Vector& x) const;
};

/// Catalog: "flat" with params {n}; "s6-orthographic" with params {} (base
/// point e7) or the seven coordinates of a unit base point.
StructureField chart_field(std::string_view catalog_name, std::span<const double> params,
                           double smoothness_step = 1e-4);

/// N(X, Y) = [JX, JY] - J[JX, Y] - J[X, JY] - [X, Y] for the constant
/// extensions of X and Y, with derivatives of J taken by central differences.
Vector nijenhuis(const StructureField& field, const Vector& x, const Vector& X, const Vector& Y);

}  // namespace wirtinger
