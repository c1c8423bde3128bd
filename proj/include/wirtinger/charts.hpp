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

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wirtinger/angle.hpp"
#include "wirtinger/structures.hpp"

namespace wirtinger {

struct Axis {
    double min = 0.0;
    double max = 1.0;
    std::size_t samples = 2;

    double spacing() const { return (max - min) / static_cast<double>(samples - 1); }
    double at(std::size_t i) const { return min + static_cast<double>(i) * spacing(); }
};

enum class JacobianMode { Analytic, CentralDifference };

using ChartMap = std::function<Vector(const Vector&)>;
/// ambient_dim x param_dim matrix of partial derivatives.
using ChartJacobian = std::function<Matrix(const Vector&)>;
using Ambient = std::variant<CompatibleStructure, StructureField>;

/// A map from a parameter box into ambient (or field chart) coordinates.
/// Parameter order fixes the orientation of every tangent frame.
struct ImmersionChart {
    std::size_t param_dim = 0;
    std::size_t ambient_dim = 0;
    ChartMap map;
    ChartJacobian jacobian;  // required in Analytic mode
    JacobianMode mode = JacobianMode::CentralDifference;
    double step = 0.0;  // central-difference step; 0 selects 1e-5 * domain diameter
    std::vector<Axis> domain;
    Ambient ambient = standard_structure(1);

    /// Throws InvalidArgument when fields are inconsistent.
    void check() const;
    double effective_step() const;
    CompatibleStructure structure_at(const Vector& ambient_point) const;
};

namespace point_flags {
inline constexpr std::uint32_t boundary = 1u << 0;     // central differences would leave the box
inline constexpr std::uint32_t degenerate = 1u << 1;   // Jacobian rank-deficient
inline constexpr std::uint32_t singular = 1u << 2;     // |cos alpha| ~ 1, alpha not smooth
inline constexpr std::uint32_t failed = 1u << 3;       // any other evaluation error
inline constexpr std::uint32_t no_gradient = 1u << 4;  // a needed neighbour has no report
}  // namespace point_flags

std::string describe_flags(std::uint32_t flags);

struct FieldPoint {
    Vector params;
    std::optional<AngleReport> report;
    std::optional<double> grad_alpha_norm;
    std::uint32_t flags = 0;
    std::string failure;
};

/// Grid results in row-major order (last axis fastest).
struct AngleField {
    std::vector<std::size_t> shape;
    std::vector<FieldPoint> points;

    std::size_t linear_index(std::span<const std::size_t> idx) const;
    std::vector<std::size_t> multi_index(std::size_t linear) const;
};

struct FieldSummary {
    std::size_t points = 0;
    std::size_t evaluated = 0;
    double min_cos_alpha = 0.0;
    double max_cos_alpha = 0.0;
    double mean_cos_alpha = 0.0;
    std::map<Classification, std::size_t> classification_counts;
    std::optional<double> max_grad_alpha_norm;
    std::size_t flagged = 0;
    std::map<std::string, std::size_t> flag_counts;
};

OrientedSubspace tangent_frame(const ImmersionChart& c, const Vector& x,
                               const Tolerances& tol = default_tolerances());

AngleField angle_field(const ImmersionChart& c, const Tolerances& tol = default_tolerances());

/// Fills grad_alpha_norm from central differences of alpha over the grid
/// (second-order one-sided at the grid edges), measured in the induced
/// metric. Throws GridTooSmall below three samples per axis.
AngleField gradient_field(AngleField af, const ImmersionChart& c,
                          const Tolerances& tol = default_tolerances());

FieldSummary field_summary(const AngleField& af);

// Built-in charts over standard C^2 with analytic Jacobians.
//   holomorphic-graph  (u, v) -> (u, v, u^2 - v^2, 2uv)          graph of z^2
//   conjugate-graph    (u, v) -> (u, v, u, -v)                    graph of conj(z)
//   slant-plane        (u, v) -> u e1 + v (cos t e3 + sin t e2)   params {t}
//   slant-family       (u, v) -> (-v, -cos u, sin u, 0)           cos alpha = sin u
ImmersionChart catalog_chart(std::string_view name, std::span<const double> params,
                             std::vector<Axis> domain);

}  // namespace wirtinger
