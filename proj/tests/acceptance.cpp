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

// Acceptance battery: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "support.hpp"
#include "wirtinger/charts.hpp"

using namespace wirtinger;
using wirtinger::testing::Rng;

namespace {

const double pi = std::numbers::pi;

struct Result {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

OrientedSubspace gaussian_subspace(Rng& rng, std::size_t ambient, std::size_t k) {
    std::vector<Vector> v;
    for (std::size_t i = 0; i < k; ++i) v.push_back(rng.vector(static_cast<Eigen::Index>(ambient)));
    return OrientedSubspace(std::move(v));
}

OrientedSubspace complex_subspace(Rng& rng, const CompatibleStructure& s, std::size_t m) {
    std::vector<Vector> v;
    for (std::size_t i = 0; i < m; ++i) {
        const Vector x = rng.vector(static_cast<Eigen::Index>(s.dim()));
        v.push_back(x);
        v.push_back(s.apply(x));
    }
    return OrientedSubspace(std::move(v));
}

// 1. |cos alpha| <= 1 on random pairs
Result bound() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(101);
    double worst = 0.0;
    std::size_t failures = 0, resampled = 0;
    for (std::uint64_t trial = 0; trial < 10000; ++trial) {
        const std::size_t n = 2 + trial % 5;  // 2n in {4, ..., 12}
        const std::size_t m = rng.index(1, n);
        const auto s = random_compatible(n, trial);
        for (;;) {
            try {
                const double c = kahler_function(s, gaussian_subspace(rng, 2 * n, 2 * m));
                worst = std::max(worst, std::abs(c));
                if (!(std::abs(c) <= 1.0 + 1e-9)) ++failures;
                break;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::RankDeficient) throw;
                ++resampled;
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {failures == 0 && secs < 60.0,
            fmt("10000 pairs, max |cos alpha| = %.17g, violations = %.0f, %.2f s", worst, static_cast<double>(failures), secs) +
                (resampled ? " (resampled " + std::to_string(resampled) + ")" : "")};
}

// 2. equality exactly on complex subspaces
Result equality() {
    Rng rng(202);
    double min_cos = 2.0, max_residual = 0.0, max_perturbed = -2.0;
    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const std::size_t m = 1 + rng.index(0, n - 2);  // m < n leaves room for a transverse direction
        const auto s = random_compatible(n, 5000 + trial);
        const auto w = complex_subspace(rng, s, m);
        const auto check = verify_wirtinger(s, w);
        min_cos = std::min(min_cos, check.cos_alpha);
        max_residual = std::max(max_residual, check.complexity_residual);

        // G-unit direction orthogonal to W; W is J-invariant, so J d is too
        const auto frame = pullback_form(s, w).frame;
        Vector d = rng.vector(static_cast<Eigen::Index>(s.dim()));
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& f : frame) d -= s.inner(f, d) * f;
        }
        d /= std::sqrt(s.inner(d, d));
        auto vectors = w.vectors();
        vectors[0] += 1e-2 * std::sqrt(s.inner(vectors[0], vectors[0])) * d;
        max_perturbed = std::max(max_perturbed, kahler_function(s, OrientedSubspace(vectors)));
    }
    const bool pass = min_cos >= 1.0 - 1e-8 && max_residual <= 1e-10 && max_perturbed < 1.0 - 1e-6;
    return {pass, fmt("1000 complex subspaces: min cos alpha = %.17g, max residual = %.3g, max perturbed cos alpha = %.17g",
                      min_cos, max_residual, max_perturbed)};
}

// 3. Pfaffian vs perfect-matching expansion
Result oracle() {
    Rng rng(303);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t size = 2 * rng.index(1, 6);
        const auto a = rng.skew(size);
        const double fast = pfaffian(a);
        const double slow = wedge_power_oracle(a);
        worst = std::max(worst, std::abs(fast - slow) / std::max(std::abs(slow), std::numeric_limits<double>::min()));
    }
    return {worst <= 1e-10, fmt("1000 skew matrices, sizes 2-12: max relative difference = %.3g", worst)};
}

// 4. product of canonical-form cosines
Result product() {
    Rng rng(404);
    double worst = 0.0, max_lambda = 0.0;
    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const std::size_t m = rng.index(1, n);
        const auto s = random_compatible(n, 9000 + trial);
        const auto pb = pullback_form(s, gaussian_subspace(rng, 2 * n, 2 * m));
        const auto cf = skew_canonical(pb.omega);
        double p = 1.0;
        for (double l : cf.lambdas) {
            p *= l;
            max_lambda = std::max(max_lambda, std::abs(l));
        }
        worst = std::max(worst, std::abs(p - pfaffian(pb.omega)));
    }
    return {worst <= 1e-9 && max_lambda <= 1.0 + 1e-9,
            fmt("1000 pulled-back forms: max |prod lambda - Pf| = %.3g, max |lambda| = %.17g", worst, max_lambda)};
}

// 5. frame and orientation invariance
Result invariance() {
    Rng rng(505);
    double worst_keep = 0.0, worst_flip = 0.0;
    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const std::size_t m = rng.index(1, n);
        const auto s = random_compatible(n, 13000 + trial);
        const Matrix base = rng.well_conditioned(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(2 * m));
        std::vector<Vector> v;
        for (Eigen::Index j = 0; j < base.cols(); ++j) v.emplace_back(base.col(j));
        const double c = kahler_function(s, OrientedSubspace(v));
        const bool keep = trial % 2 == 0;
        const Matrix mixed = base * rng.change_of_basis(base.cols(), keep);
        std::vector<Vector> u;
        for (Eigen::Index j = 0; j < mixed.cols(); ++j) u.emplace_back(mixed.col(j));
        const double c2 = kahler_function(s, OrientedSubspace(u));
        if (keep) {
            worst_keep = std::max(worst_keep, std::abs(c2 - c));
        } else {
            worst_flip = std::max(worst_flip, std::abs(c2 + c));
        }
    }
    return {worst_keep <= 1e-10 && worst_flip <= 1e-10,
            fmt("1000 trials: max change (preserving) = %.3g, max |sum| (reversing) = %.3g", worst_keep, worst_flip)};
}

std::vector<Axis> square(double lo, double hi, std::size_t samples) {
    return {Axis{lo, hi, samples}, Axis{lo, hi, samples}};
}

// 6. analytic families
Result analytic_fields() {
    auto interior = [](const AngleField& af, const FieldPoint& p) {
        const auto idx = af.multi_index(static_cast<std::size_t>(&p - af.points.data()));
        for (std::size_t a = 0; a < idx.size(); ++a) {
            if (idx[a] == 0 || idx[a] + 1 == af.shape[a]) return false;
        }
        return true;
    };
    const auto holo = angle_field(catalog_chart("holomorphic-graph", {}, square(-1.0, 1.0, 21)));
    std::size_t holo_total = 0, holo_complex = 0;
    double holo_dev = 0.0;
    for (const auto& p : holo.points) {
        if (!interior(holo, p)) continue;
        ++holo_total;
        if (p.report && p.report->classification == Classification::Complex &&
            std::abs(p.report->cos_alpha - 1.0) <= 1e-8) {
            ++holo_complex;
        }
        if (p.report) holo_dev = std::max(holo_dev, std::abs(p.report->cos_alpha - 1.0));
    }
    const auto conj = angle_field(catalog_chart("conjugate-graph", {}, square(-1.0, 1.0, 21)));
    const auto conj_summary = field_summary(conj);
    const std::size_t isotropic = conj_summary.classification_counts.count(Classification::Isotropic)
                                      ? conj_summary.classification_counts.at(Classification::Isotropic)
                                      : 0;
    double slant_dev = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double theta = -pi / 2.0 + pi * (i + 0.5) / 50.0;
        const double params[] = {theta};
        for (const auto& p : angle_field(catalog_chart("slant-plane", params, square(-1.0, 1.0, 5))).points) {
            slant_dev = std::max(slant_dev, p.report ? std::abs(p.report->cos_alpha - std::sin(theta)) : 1.0);
        }
    }
    const bool pass = holo_complex == holo_total && isotropic == conj.points.size() && slant_dev <= 1e-10;
    return {pass, "holomorphic " + std::to_string(holo_complex) + "/" + std::to_string(holo_total) +
                      " complex" + fmt(" (max |cos alpha - 1| = %.3g)", holo_dev) + ", conjugate " +
                      std::to_string(isotropic) + "/" + std::to_string(conj.points.size()) + " isotropic" +
                      fmt(", slant planes at 50 angles: max |cos alpha - sin theta| = %.3g", slant_dev)};
}

// 7. gradient of alpha on the linear slant family
Result gradient() {
    auto field = [](std::size_t samples) {
        const std::vector<Axis> domain{Axis{0.1, 1.4, samples}, Axis{-1.0, 1.0, 5}};
        const auto c = catalog_chart("slant-family", {}, domain);
        return gradient_field(angle_field(c), c);
    };
    const auto coarse = field(101);
    const auto fine = field(201);
    double worst_unit = 0.0, worst_change = 0.0;
    std::size_t missing = 0;
    for (std::size_t i = 1; i + 1 < 101; ++i) {
        for (std::size_t j = 1; j + 1 < 5; ++j) {
            const std::size_t ci[] = {i, j};
            const std::size_t fi[] = {2 * i, j};
            const auto& a = coarse.points[coarse.linear_index(ci)];
            const auto& b = fine.points[fine.linear_index(fi)];
            if (!a.grad_alpha_norm || !b.grad_alpha_norm) {
                ++missing;
                continue;
            }
            worst_unit = std::max(worst_unit, std::abs(*a.grad_alpha_norm - 1.0));
            worst_change = std::max(worst_change, std::abs(*a.grad_alpha_norm - *b.grad_alpha_norm) / *b.grad_alpha_norm);
        }
    }
    return {missing == 0 && worst_unit <= 1e-4 && worst_change <= 0.1,
            fmt("101-point grid: max ||grad alpha| - 1| = %.3g, max relative change under halving = %.3g, missing = %.0f",
                worst_unit, worst_change, static_cast<double>(missing))};
}

// 8. integrability witness
Result nijenhuis_witness() {
    Rng rng(808);
    const double three[] = {3.0};
    const auto flat = chart_field("flat", three);
    double flat_max = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        flat_max = std::max(flat_max, nijenhuis(flat, rng.vector(6), rng.vector(6), rng.vector(6)).norm());
    }

    // N(X, JX) = 0 identically, so coordinate pairs spanning a J-line are
    // skipped; every other pair is a witness
    const auto sphere = chart_field("s6-orthographic", {});
    auto halved = sphere;
    halved.smoothness_step /= 2.0;
    const Vector origin = Vector::Zero(6);
    const Matrix j0 = sphere.at(origin).jop();
    const Matrix e = Matrix::Identity(6, 6);
    double min_norm = std::numeric_limits<double>::infinity(), worst_change = 0.0;
    std::size_t pairs = 0, j_pairs = 0;
    for (int a = 0; a < 6; ++a) {
        for (int b = a + 1; b < 6; ++b) {
            if (std::abs(std::abs(e.col(b).dot(j0 * e.col(a))) - 1.0) <= 1e-9) {
                ++j_pairs;
                continue;
            }
            const double n1 = nijenhuis(sphere, origin, e.col(a), e.col(b)).norm();
            const double n2 = nijenhuis(halved, origin, e.col(a), e.col(b)).norm();
            min_norm = std::min(min_norm, n1);
            worst_change = std::max(worst_change, std::abs(n2 - n1) / n1);
            ++pairs;
        }
    }
    return {flat_max <= 1e-8 && pairs > 0 && min_norm > 0.1 && worst_change <= 0.05,
            fmt("flat max |N| = %.3g; S^6 origin min |N| = %.17g, max change under step halving = %.3g", flat_max, min_norm,
                worst_change) +
                " over " + std::to_string(pairs) + " coordinate pairs (" + std::to_string(j_pairs) +
                " pairs with Y = +-JX excluded)"};
}

// 9. byte-identical CLI output
Result determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "wirtinger_acceptance";
    fs::create_directories(dir);
    std::ofstream(dir / "scan.json") << R"cfg({"command": "scan", "chart": {"components": "(u, v, u^2-v^2, 2*u*v)"},
  "grid": [{"min": -1, "max": 1, "samples": 21}, {"min": -1, "max": 1, "samples": 21}]})cfg";
    std::ofstream(dir / "verify.json") << R"({"command": "verify", "seed": 7,
  "verify": {"samples": 10000, "ambient_dim": 8, "sub_dim": 4}})";
    auto slurp = [](const fs::path& p) {
        std::ifstream f(p, std::ios::binary);
        std::stringstream s;
        s << f.rdbuf();
        return s.str();
    };
    const std::string tool = WIRTINGER_TOOL;
    bool ok = true;
    std::string detail;
    for (const char* cmd : {"scan", "verify"}) {
        std::string outputs[2];
        for (int run = 0; run < 2; ++run) {
            const fs::path out = dir / (std::string(cmd) + std::to_string(run) + ".out");
            const std::string line = tool + " " + cmd + " --config " + (dir / (std::string(cmd) + ".json")).string() +
                                     " --seed 7 --output " + out.string();
            const int raw = std::system(line.c_str());
            if (!WIFEXITED(raw) || WEXITSTATUS(raw) != 0) ok = false;
            outputs[run] = slurp(out);
            if (std::string(cmd) == "scan") outputs[run] += slurp(out.string() + ".summary.json");
        }
        const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
        ok = ok && same;
        detail += std::string(detail.empty() ? "" : ", ") + cmd + (same ? " identical" : " DIFFERENT") + " (" +
                  std::to_string(outputs[0].size()) + " bytes)";
    }
    return {ok, detail};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Result()>> criteria[] = {
        {"1 Wirtinger bound", bound},
        {"2 equality iff complex", equality},
        {"3 Pfaffian oracle equivalence", oracle},
        {"4 canonical-form product identity", product},
        {"5 frame and orientation invariance", invariance},
        {"6 analytic fields", analytic_fields},
        {"7 gradient surrogate", gradient},
        {"8 integrability witness", nijenhuis_witness},
        {"9 determinism", determinism},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Result r;
        try {
            r = check();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] criterion %s: %s\n", r.pass ? "PASS" : "FAIL", name, r.detail.c_str());
        std::fflush(stdout);
        if (!r.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
