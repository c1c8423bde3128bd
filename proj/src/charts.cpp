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

#include "wirtinger/charts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wirtinger {

void ImmersionChart::check() const {
    if (param_dim == 0 || param_dim % 2 != 0) {
        throw Error(ErrorKind::InvalidArgument, "parameter dimension must be even and positive");
    }
    if (param_dim > ambient_dim) {
        throw Error(ErrorKind::InvalidArgument, "parameter dimension exceeds ambient dimension");
    }
    if (domain.size() != param_dim) {
        throw Error(ErrorKind::InvalidArgument, "domain needs one axis per parameter");
    }
    for (const auto& a : domain) {
        if (a.samples < 2) throw Error(ErrorKind::InvalidArgument, "each axis needs at least two samples");
        if (!(a.max > a.min) || !std::isfinite(a.min) || !std::isfinite(a.max)) {
            throw Error(ErrorKind::InvalidArgument, "axis bounds must be finite with min < max");
        }
    }
    if (!map) throw Error(ErrorKind::InvalidArgument, "chart has no map");
    if (mode == JacobianMode::Analytic && !jacobian) {
        throw Error(ErrorKind::InvalidArgument, "analytic mode needs a Jacobian");
    }
    if (mode == JacobianMode::CentralDifference && step < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "finite-difference step must be positive");
    }
    const std::size_t target = std::visit(
        [](const auto& a) -> std::size_t {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, CompatibleStructure>) {
                return a.dim();
            } else {
                return a.chart_dim;
            }
        },
        ambient);
    if (target != ambient_dim) {
        throw Error(ErrorKind::DimensionMismatch, "ambient structure dimension " + std::to_string(target) +
                                                      " does not match chart target " +
                                                      std::to_string(ambient_dim));
    }
}

double ImmersionChart::effective_step() const {
    if (step > 0.0) return step;
    double diameter2 = 0.0;
    for (const auto& a : domain) diameter2 += (a.max - a.min) * (a.max - a.min);
    return 1e-5 * std::sqrt(diameter2);
}

CompatibleStructure ImmersionChart::structure_at(const Vector& ambient_point) const {
    if (const auto* s = std::get_if<CompatibleStructure>(&ambient)) return *s;
    return std::get<StructureField>(ambient).at(ambient_point);
}

std::string describe_flags(std::uint32_t flags) {
    static constexpr std::pair<std::uint32_t, const char*> names[] = {
        {point_flags::boundary, "boundary"},
        {point_flags::degenerate, "degenerate"},
        {point_flags::singular, "singular"},
        {point_flags::failed, "failed"},
        {point_flags::no_gradient, "no-gradient"},
    };
    std::string out;
    for (const auto& [bit, name] : names) {
        if (flags & bit) {
            if (!out.empty()) out += '|';
            out += name;
        }
    }
    return out;
}

std::size_t AngleField::linear_index(std::span<const std::size_t> idx) const {
    std::size_t lin = 0;
    for (std::size_t a = 0; a < shape.size(); ++a) lin = lin * shape[a] + idx[a];
    return lin;
}

std::vector<std::size_t> AngleField::multi_index(std::size_t linear) const {
    std::vector<std::size_t> idx(shape.size());
    for (std::size_t a = shape.size(); a-- > 0;) {
        idx[a] = linear % shape[a];
        linear /= shape[a];
    }
    return idx;
}

namespace {

Matrix jacobian_at(const ImmersionChart& c, const Vector& x) {
    const auto n = static_cast<Eigen::Index>(c.ambient_dim);
    const auto k = static_cast<Eigen::Index>(c.param_dim);
    if (c.mode == JacobianMode::Analytic) {
        Matrix j = c.jacobian(x);
        if (j.rows() != n || j.cols() != k) {
            throw Error(ErrorKind::DimensionMismatch, "analytic Jacobian has the wrong shape");
        }
        return j;
    }
    const double h = c.effective_step();
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto& axis = c.domain[static_cast<std::size_t>(i)];
        // allow for rounding of grid coordinates
        const double slack = 1e-12 * std::max(1.0, std::abs(axis.max - axis.min));
        if (x(i) - h < axis.min - slack || x(i) + h > axis.max + slack) {
            throw Error(ErrorKind::ChartDomain, "central differences would leave the parameter box");
        }
    }
    Matrix j(n, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        Vector step = Vector::Zero(k);
        step(i) = h;
        const Vector plus = c.map(x + step);
        const Vector minus = c.map(x - step);
        if (plus.size() != n || minus.size() != n) {
            throw Error(ErrorKind::DimensionMismatch, "chart map returned the wrong dimension");
        }
        j.col(i) = (plus - minus) / (2.0 * h);
    }
    return j;
}

bool is_boundary(const ImmersionChart& c, std::span<const std::size_t> idx) {
    for (std::size_t a = 0; a < idx.size(); ++a) {
        if (idx[a] == 0 || idx[a] + 1 == c.domain[a].samples) return true;
    }
    return false;
}

}  // namespace

OrientedSubspace tangent_frame(const ImmersionChart& c, const Vector& x, const Tolerances& tol) {
    c.check();
    if (static_cast<std::size_t>(x.size()) != c.param_dim) {
        throw Error(ErrorKind::DimensionMismatch, "parameter point has the wrong dimension");
    }
    const Matrix j = jacobian_at(c, x);
    require_finite(j, "chart Jacobian");
    const Matrix gram = j.transpose() * j;
    double scale = 1.0;
    for (Eigen::Index i = 0; i < gram.rows(); ++i) scale *= gram(i, i);
    if (!(scale > 0.0) || !(gram.determinant() >= tol.immersion_rank * scale)) {
        throw Error(ErrorKind::DegenerateImmersion, "chart Jacobian is rank-deficient");
    }
    std::vector<Vector> cols;
    cols.reserve(c.param_dim);
    for (Eigen::Index i = 0; i < j.cols(); ++i) cols.emplace_back(j.col(i));
    return OrientedSubspace(std::move(cols));
}

AngleField angle_field(const ImmersionChart& c, const Tolerances& tol) {
    c.check();
    AngleField af;
    std::size_t total = 1;
    for (const auto& a : c.domain) {
        af.shape.push_back(a.samples);
        total *= a.samples;
    }
    af.points.resize(total);
    const auto k = static_cast<Eigen::Index>(c.param_dim);
    for (std::size_t lin = 0; lin < total; ++lin) {
        const auto idx = af.multi_index(lin);
        FieldPoint& p = af.points[lin];
        p.params = Vector(k);
        for (Eigen::Index a = 0; a < k; ++a) {
            p.params(a) = c.domain[static_cast<std::size_t>(a)].at(idx[static_cast<std::size_t>(a)]);
        }
        if (c.mode == JacobianMode::CentralDifference && is_boundary(c, idx)) {
            p.flags |= point_flags::boundary;
            continue;
        }
        try {
            const OrientedSubspace frame = tangent_frame(c, p.params, tol);
            const CompatibleStructure s = c.structure_at(c.map(p.params));
            p.report = angle_report(s, frame, tol);
        } catch (const Error& e) {
            p.flags |= (e.kind() == ErrorKind::DegenerateImmersion || e.kind() == ErrorKind::RankDeficient)
                           ? point_flags::degenerate
                           : point_flags::failed;
            p.failure = e.what();
        } catch (const std::exception& e) {
            p.flags |= point_flags::failed;
            p.failure = e.what();
        }
    }
    return af;
}

AngleField gradient_field(AngleField af, const ImmersionChart& c, const Tolerances& tol) {
    c.check();
    if (af.shape.size() != c.domain.size()) {
        throw Error(ErrorKind::DimensionMismatch, "field shape does not match the chart domain");
    }
    for (std::size_t a = 0; a < af.shape.size(); ++a) {
        if (af.shape[a] != c.domain[a].samples) {
            throw Error(ErrorKind::DimensionMismatch, "field shape does not match the chart domain");
        }
        if (af.shape[a] < 3) {
            throw Error(ErrorKind::GridTooSmall, "gradient estimates need at least three samples per axis");
        }
    }

    for (auto& p : af.points) {
        if (p.report && std::abs(p.report->cos_alpha) >= 1.0 - tol.singular) {
            p.flags |= point_flags::singular;
        }
    }

    const auto k = static_cast<Eigen::Index>(c.param_dim);
    for (std::size_t lin = 0; lin < af.points.size(); ++lin) {
        FieldPoint& p = af.points[lin];
        p.grad_alpha_norm.reset();
        if (!p.report || (p.flags & point_flags::singular)) continue;
        const auto idx = af.multi_index(lin);

        auto alpha_at = [&](std::size_t axis, std::ptrdiff_t offset) -> std::optional<double> {
            auto nb = idx;
            nb[axis] = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(nb[axis]) + offset);
            const auto& q = af.points[af.linear_index(nb)];
            if (!q.report) return std::nullopt;
            return q.report->alpha;
        };

        Vector dalpha(k);
        bool complete = true;
        for (std::size_t a = 0; a < af.shape.size() && complete; ++a) {
            const double dx = c.domain[a].spacing();
            const std::size_t i = idx[a];
            const std::size_t last = af.shape[a] - 1;
            std::optional<double> d;
            if (i > 0 && i < last) {
                const auto lo = alpha_at(a, -1);
                const auto hi = alpha_at(a, +1);
                if (lo && hi) d = (*hi - *lo) / (2.0 * dx);
            } else if (i == 0) {
                const auto f1 = alpha_at(a, 1);
                const auto f2 = alpha_at(a, 2);
                if (f1 && f2) d = (-3.0 * p.report->alpha + 4.0 * *f1 - *f2) / (2.0 * dx);
            } else {
                const auto f1 = alpha_at(a, -1);
                const auto f2 = alpha_at(a, -2);
                if (f1 && f2) d = (3.0 * p.report->alpha - 4.0 * *f1 + *f2) / (2.0 * dx);
            }
            if (!d) {
                complete = false;
            } else {
                dalpha(static_cast<Eigen::Index>(a)) = *d;
            }
        }
        if (!complete) {
            p.flags |= point_flags::no_gradient;
            continue;
        }
        try {
            const OrientedSubspace frame = tangent_frame(c, p.params, tol);
            const CompatibleStructure s = c.structure_at(c.map(p.params));
            Matrix f(static_cast<Eigen::Index>(c.ambient_dim), k);
            for (Eigen::Index i = 0; i < k; ++i) f.col(i) = frame.vectors()[static_cast<std::size_t>(i)];
            const Matrix induced = f.transpose() * s.metric() * f;
            const double norm2 = dalpha.dot(induced.llt().solve(dalpha));
            p.grad_alpha_norm = std::sqrt(std::max(0.0, norm2));
        } catch (const std::exception& e) {
            p.flags |= point_flags::no_gradient;
            p.failure = e.what();
        }
    }
    return af;
}

FieldSummary field_summary(const AngleField& af) {
    FieldSummary s;
    s.points = af.points.size();
    double sum = 0.0;
    s.min_cos_alpha = std::numeric_limits<double>::infinity();
    s.max_cos_alpha = -std::numeric_limits<double>::infinity();
    for (const auto& p : af.points) {
        if (p.flags != 0) {
            ++s.flagged;
            for (std::uint32_t bit = 1; bit <= point_flags::no_gradient; bit <<= 1) {
                if (p.flags & bit) ++s.flag_counts[describe_flags(bit)];
            }
        }
        if (!p.report) continue;
        ++s.evaluated;
        const double ca = p.report->cos_alpha;
        s.min_cos_alpha = std::min(s.min_cos_alpha, ca);
        s.max_cos_alpha = std::max(s.max_cos_alpha, ca);
        sum += ca;
        ++s.classification_counts[p.report->classification];
        if (p.grad_alpha_norm) {
            s.max_grad_alpha_norm = std::max(s.max_grad_alpha_norm.value_or(0.0), *p.grad_alpha_norm);
        }
    }
    if (s.evaluated == 0) {
        s.min_cos_alpha = s.max_cos_alpha = s.mean_cos_alpha = std::numeric_limits<double>::quiet_NaN();
    } else {
        s.mean_cos_alpha = sum / static_cast<double>(s.evaluated);
    }
    return s;
}

ImmersionChart catalog_chart(std::string_view name, std::span<const double> params, std::vector<Axis> domain) {
    ImmersionChart c;
    c.param_dim = 2;
    c.ambient_dim = 4;
    c.mode = JacobianMode::Analytic;
    c.domain = std::move(domain);
    c.ambient = standard_structure(2);

    auto expect_params = [&](std::size_t count) {
        if (params.size() != count) {
            throw Error(ErrorKind::InvalidArgument, std::string(name) + " takes " + std::to_string(count) +
                                                        " parameter(s)");
        }
    };

    if (name == "holomorphic-graph") {
        expect_params(0);
        c.map = [](const Vector& x) {
            const double u = x(0), v = x(1);
            return Vector{{u, v, u * u - v * v, 2.0 * u * v}};
        };
        c.jacobian = [](const Vector& x) {
            const double u = x(0), v = x(1);
            Matrix j(4, 2);
            j << 1.0, 0.0, 0.0, 1.0, 2.0 * u, -2.0 * v, 2.0 * v, 2.0 * u;
            return j;
        };
    } else if (name == "conjugate-graph") {
        expect_params(0);
        c.map = [](const Vector& x) { return Vector{{x(0), x(1), x(0), -x(1)}}; };
        c.jacobian = [](const Vector&) {
            Matrix j(4, 2);
            j << 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, -1.0;
            return j;
        };
    } else if (name == "slant-plane") {
        expect_params(1);
        const double ct = std::cos(params[0]);
        const double st = std::sin(params[0]);
        c.map = [ct, st](const Vector& x) { return Vector{{x(0), x(1) * st, x(1) * ct, 0.0}}; };
        c.jacobian = [ct, st](const Vector&) {
            Matrix j(4, 2);
            j << 1.0, 0.0, 0.0, st, 0.0, ct, 0.0, 0.0;
            return j;
        };
    } else if (name == "slant-family") {
        expect_params(0);
        c.map = [](const Vector& x) { return Vector{{-x(1), -std::cos(x(0)), std::sin(x(0)), 0.0}}; };
        c.jacobian = [](const Vector& x) {
            Matrix j(4, 2);
            j << 0.0, -1.0, std::sin(x(0)), 0.0, std::cos(x(0)), 0.0, 0.0, 0.0;
            return j;
        };
    } else {
        throw Error(ErrorKind::UnknownCatalogEntry, "no chart named '" + std::string(name) + "'");
    }
    c.check();
    return c;
}

}  // namespace wirtinger
