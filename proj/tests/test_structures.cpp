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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "wirtinger/structures.hpp"

using namespace wirtinger;
using wirtinger::testing::Rng;

namespace {

Vector random_unit(Rng& rng, Eigen::Index n) {
    Vector v = rng.vector(n);
    return v / v.norm();
}

Vector random_orthogonal_to(Rng& rng, const Vector& p) {
    Vector v = rng.vector(p.size());
    return v - p.dot(v) * p;
}

}  // namespace

TEST_CASE("standard_structure") {
    const auto s1 = standard_structure(1);
    CHECK(s1.jop() == Matrix{{0.0, -1.0}, {1.0, 0.0}});

    const auto s2 = standard_structure(2);
    CHECK(s2.jop() * s2.jop() == -Matrix::Identity(4, 4));
    CHECK(s2.apply(Vector::Unit(4, 0)) == Vector::Unit(4, 1));

    for (std::size_t n = 1; n <= 6; ++n) {
        const auto s = standard_structure(n);
        const Vector e1 = Vector::Unit(static_cast<Eigen::Index>(2 * n), 0);
        CHECK(kahler_form(s, e1, s.apply(e1)) == 1.0);
        const auto d = validate(s);
        CHECK(d.passed);
        CHECK(d.j_square_residual <= 1e-15);
        CHECK(d.compatibility_residual <= 1e-15);
        CHECK(d.symmetry_residual <= 1e-15);
    }
    CHECK_THROWS_AS(standard_structure(0), Error);
}

TEST_CASE("random_compatible") {
    SUBCASE("conjugation by the identity is the standard structure") {
        const auto s = conjugated_structure(Matrix::Identity(6, 6));
        CHECK(s.metric() == Matrix::Identity(6, 6));
        CHECK(s.jop() == standard_structure(3).jop());
    }

    SUBCASE("compatibility and determinism") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const std::size_t n = 1 + seed % 6;
            const auto s = random_compatible(n, seed);
            CHECK(max_abs(s.jop().transpose() * s.metric() * s.jop() - s.metric()) <= 1e-10);
            CHECK(validate(s).passed);
            const auto again = random_compatible(n, seed);
            CHECK(again.metric() == s.metric());
            CHECK(again.jop() == s.jop());
        }
        CHECK(random_compatible(3, 1).metric() != random_compatible(3, 2).metric());
    }

    SUBCASE("metric conditioning bounded by the clamp on A") {
        for (std::uint64_t seed = 100; seed < 130; ++seed) {
            const auto s = random_compatible(4, seed);
            const auto d = validate(s);
            // cond(G) = cond(A)^2 <= 1e4
            CHECK(d.metric_max_eigenvalue / d.metric_min_eigenvalue <= 1e4 * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("kahler_form") {
    Rng rng(4);
    const auto std2 = standard_structure(2);
    CHECK(kahler_form(std2, Vector::Unit(4, 0), Vector::Unit(4, 1)) == 1.0);
    CHECK_THROWS_AS(kahler_form(std2, Vector::Unit(3, 0), Vector::Unit(4, 1)), Error);

    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto s = random_compatible(1 + seed % 5, seed);
        const auto d = static_cast<Eigen::Index>(s.dim());
        const Vector u = rng.vector(d);
        const Vector v = rng.vector(d);
        const double scale = std::max(1.0, max_abs(s.metric()) * u.norm() * v.norm());
        CHECK(std::abs(kahler_form(s, u, u)) <= 1e-12 * scale);
        CHECK(std::abs(kahler_form(s, u, v) + kahler_form(s, v, u)) <= 1e-12 * scale);
        CHECK(std::abs(kahler_form(s, s.apply(u), s.apply(v)) - kahler_form(s, u, v)) <= 1e-10 * scale);
    }
}

TEST_CASE("validate reports perturbations") {
    Matrix j = standard_structure(2).jop();
    j(0, 1) += 1e-3;
    const auto s = CompatibleStructure::unchecked(Matrix::Identity(4, 4), j);
    const auto d = validate(s);
    CHECK_FALSE(d.passed);
    CHECK(d.j_square_residual >= 1e-3);
    CHECK_THROWS_AS(CompatibleStructure(Matrix::Identity(4, 4), j), Error);

    Matrix g = Matrix::Identity(2, 2);
    g(0, 0) = -1.0;
    CHECK_FALSE(validate(CompatibleStructure::unchecked(g, standard_structure(1).jop())).passed);
}

TEST_CASE("octonion cross product") {
    const Matrix e = Matrix::Identity(7, 7);
    CHECK(cross7(e.col(0), e.col(1)) == e.col(2));
    // every listed triple and its cyclic shifts
    for (const auto& t : OctonionTable::triples) {
        const Vector a = e.col(t[0] - 1), b = e.col(t[1] - 1), c = e.col(t[2] - 1);
        CHECK(cross7(a, b) == c);
        CHECK(cross7(b, c) == a);
        CHECK(cross7(c, a) == b);
        CHECK(cross7(b, a) == -c);
    }
    for (int i = 0; i < 7; ++i) {
        for (int j = 0; j < 7; ++j) {
            const Vector w = cross7(e.col(i), e.col(j));
            CHECK(w == -cross7(e.col(j), e.col(i)));
            CHECK(w.dot(e.col(i)) == 0.0);
        }
    }
}

TEST_CASE("s6_structure") {
    Rng rng(6);
    const Matrix e = Matrix::Identity(7, 7);

    const auto at_e1 = s6_structure(e.col(0));
    CHECK(at_e1.jop * e.col(1) == e.col(2));

    for (int trial = 0; trial < 100; ++trial) {
        const Vector p = random_unit(rng, 7);
        const auto s = s6_structure(p);
        CHECK((s.jop * p).norm() <= 1e-15);
        const Vector u = random_orthogonal_to(rng, p);
        const Vector v = random_orthogonal_to(rng, p);
        CHECK(std::abs((s.jop * u).dot(s.jop * v) - u.dot(v)) <= 1e-10 * u.norm() * v.norm());
        CHECK((s.jop * (s.jop * u) + u).norm() <= 1e-10 * u.norm());
        // tangent basis frames p^perp
        CHECK(max_abs(s.tangent_basis.transpose() * s.tangent_basis - Matrix::Identity(6, 6)) <= 1e-12);
        CHECK((s.tangent_basis.transpose() * p).norm() <= 1e-12);
        CHECK(validate(s.intrinsic()).passed);
    }

    try {
        s6_structure(1.001 * e.col(0));
        FAIL("expected NotUnit");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::NotUnit);
    }
}

TEST_CASE("chart_field catalog") {
    const double four[] = {2.0};
    const auto flat = chart_field("flat", four);
    CHECK(flat.chart_dim == 4);
    Rng rng(2);
    for (int trial = 0; trial < 5; ++trial) {
        const auto s = flat.at(rng.vector(4));
        CHECK(s.jop() == standard_structure(2).jop());
        CHECK(s.metric() == Matrix::Identity(4, 4));
    }

    const auto sphere = chart_field("s6-orthographic", {});
    const auto origin = sphere.at(Vector::Zero(6));
    CHECK(max_abs(origin.metric() - Matrix::Identity(6, 6)) <= 1e-15);
    CHECK(max_abs(origin.jop() * origin.jop() + Matrix::Identity(6, 6)) <= 1e-9);
    // away from the origin the pulled-back pair stays compatible
    for (int trial = 0; trial < 20; ++trial) {
        Vector x = rng.vector(6);
        x *= 0.8 * rng.uniform(0.0, 1.0) / x.norm();
        CHECK(validate(sphere.at(x)).passed);
    }

    Vector outside = Vector::Zero(6);
    outside(0) = 1.0;
    try {
        sphere.at(outside);
        FAIL("expected ChartDomain");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::ChartDomain);
    }
    try {
        chart_field("torus", {});
        FAIL("expected UnknownCatalogEntry");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::UnknownCatalogEntry);
    }

    // a rotated base point gives the same geometry at the origin
    Vector p = rng.vector(7);
    p.normalize();
    const std::vector<double> params(p.data(), p.data() + 7);
    const auto rotated = chart_field("s6-orthographic", params).at(Vector::Zero(6));
    CHECK(validate(rotated).passed);
}

TEST_CASE("nijenhuis") {
    Rng rng(31);
    const double three[] = {3.0};
    const auto flat = chart_field("flat", three);

    SUBCASE("flat field is integrable") {
        for (int trial = 0; trial < 100; ++trial) {
            const Vector n = nijenhuis(flat, rng.vector(6), rng.vector(6), rng.vector(6));
            CHECK(n.norm() <= 1e-8);
        }
    }

    const auto sphere = chart_field("s6-orthographic", {});
    SUBCASE("N(X, X) = 0") {
        for (int trial = 0; trial < 20; ++trial) {
            Vector x = rng.vector(6);
            x *= 0.5 / x.norm();
            const Vector X = rng.vector(6);
            CHECK(nijenhuis(sphere, x, X, X).norm() <= 1e-8);
            CHECK(nijenhuis(flat, rng.vector(6), X, X).norm() <= 1e-8);
        }
    }

    SUBCASE("S^6 is not integrable") {
        // Independent finite-difference evaluation gives |N(d1, d2)| = 4 at the
        // origin for base point e7.
        const Matrix e = Matrix::Identity(6, 6);
        const Vector n1 = nijenhuis(sphere, Vector::Zero(6), e.col(0), e.col(1));
        CHECK(n1.norm() > 0.1);
        CHECK(n1.norm() == doctest::Approx(4.0).epsilon(1e-6));
        auto halved = sphere;
        halved.smoothness_step /= 2.0;
        const Vector n2 = nijenhuis(halved, Vector::Zero(6), e.col(0), e.col(1));
        CHECK(std::abs(n2.norm() - n1.norm()) <= 0.05 * n1.norm());
        // N is tensorial in (X, Y) and skew
        const Vector n21 = nijenhuis(sphere, Vector::Zero(6), e.col(1), e.col(0));
        CHECK((n1 + n21).norm() <= 1e-8);
        // N(X, JY) = -J N(X, Y), so N(X, JX) vanishes
        const Vector jx = sphere.at(Vector::Zero(6)).jop() * e.col(0);
        CHECK(nijenhuis(sphere, Vector::Zero(6), e.col(0), jx).norm() <= 1e-6);
    }

    SUBCASE("step and domain checks") {
        auto coarse = sphere;
        coarse.smoothness_step = 0.05;
        try {
            nijenhuis(coarse, Vector::Zero(6), Vector::Unit(6, 0), Vector::Unit(6, 1));
            FAIL("expected StepTooLarge");
        } catch (const Error& err) {
            CHECK(err.kind() == ErrorKind::StepTooLarge);
        }
        Vector edge = Vector::Zero(6);
        edge(0) = 1.0 - 1e-4;
        try {
            nijenhuis(sphere, edge, Vector::Unit(6, 0), Vector::Unit(6, 1));
            FAIL("expected ChartDomain");
        } catch (const Error& err) {
            CHECK(err.kind() == ErrorKind::ChartDomain);
        }
    }
}
