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

#include "wirtinger/cli/job.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <random>
#include <sstream>

#include "wirtinger/cli/expression.hpp"

namespace wirtinger::cli {

namespace {

const char* const commands[] = {"validate-structure", "angle", "scan", "verify", "nijenhuis"};

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

void check_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) bad(where, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; });
        if (!known) bad(where, "unknown key '" + key + "'");
    }
}

double get_number(const Json& v, const std::string& where) {
    if (!v.is_number()) bad(where, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) bad(where, "expected a finite number");
    return d;
}

double get_positive(const Json& v, const std::string& where) {
    const double d = get_number(v, where);
    if (!(d > 0.0)) bad(where, "expected a positive number");
    return d;
}

std::uint64_t get_count(const Json& v, const std::string& where) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        bad(where, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string get_string(const Json& v, const std::string& where) {
    if (!v.is_string()) bad(where, "expected a string");
    return v.get<std::string>();
}

Vector get_vector(const Json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) bad(where, "expected a non-empty array of numbers");
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = get_number(v[i], where + "[" + std::to_string(i) + "]");
    }
    return out;
}

std::vector<double> get_numbers(const Json& v, const std::string& where) {
    if (!v.is_array()) bad(where, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_number(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

Matrix get_matrix(const Json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) bad(where, "expected an array of rows");
    const std::size_t rows = v.size();
    Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
    for (std::size_t i = 0; i < rows; ++i) {
        const Vector row = get_vector(v[i], where + "[" + std::to_string(i) + "]");
        if (static_cast<std::size_t>(row.size()) != rows) bad(where, "expected a square matrix");
        out.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    return out;
}

std::vector<Vector> get_vectors(const Json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) bad(where, "expected a non-empty array of vectors");
    std::vector<Vector> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_vector(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

StructureSpec parse_structure(const Json& j) {
    const std::string where = "structure";
    check_keys(j, where, {"type", "n", "seed", "metric", "jop", "point", "name", "params", "step"});
    StructureSpec s;
    if (!j.contains("type")) bad(where, "missing 'type'");
    s.type = get_string(j["type"], where + ".type");
    auto need = [&](const char* key) -> const Json& {
        if (!j.contains(key)) bad(where, "type '" + s.type + "' requires '" + key + "'");
        return j[key];
    };
    if (s.type == "standard" || s.type == "random") {
        s.n = get_count(need("n"), where + ".n");
        if (s.n == 0) bad(where + ".n", "must be at least 1");
        if (j.contains("seed")) s.seed = get_count(j["seed"], where + ".seed");
    } else if (s.type == "matrix") {
        s.metric = get_matrix(need("metric"), where + ".metric");
        s.jop = get_matrix(need("jop"), where + ".jop");
        if (s.metric.rows() != s.jop.rows()) bad(where, "metric and jop sizes differ");
    } else if (s.type == "s6") {
        s.point = get_vector(need("point"), where + ".point");
        if (s.point->size() != 7) bad(where + ".point", "expected 7 coordinates");
    } else if (s.type == "field") {
        s.field = get_string(need("name"), where + ".name");
        if (j.contains("params")) s.params = get_numbers(j["params"], where + ".params");
        if (j.contains("step")) s.step = get_positive(j["step"], where + ".step");
        if (j.contains("point")) s.point = get_vector(j["point"], where + ".point");
    } else {
        bad(where + ".type", "unknown structure type '" + s.type + "'");
    }
    return s;
}

ChartSpec parse_chart(const Json& j) {
    const std::string where = "chart";
    check_keys(j, where, {"catalog", "params", "components", "variables", "jacobian", "step"});
    ChartSpec c;
    if (j.contains("catalog") == j.contains("components")) bad(where, "give exactly one of 'catalog' and 'components'");
    if (j.contains("catalog")) {
        c.catalog = get_string(j["catalog"], where + ".catalog");
        if (j.contains("params")) c.params = get_numbers(j["params"], where + ".params");
    } else {
        const Json& comps = j["components"];
        if (comps.is_string()) {
            c.components = split_components(comps.get<std::string>());
        } else if (comps.is_array() && !comps.empty()) {
            for (std::size_t i = 0; i < comps.size(); ++i) {
                c.components.push_back(get_string(comps[i], where + ".components[" + std::to_string(i) + "]"));
            }
        } else {
            bad(where + ".components", "expected a string or an array of strings");
        }
        if (j.contains("variables")) {
            const Json& vars = j["variables"];
            if (!vars.is_array()) bad(where + ".variables", "expected an array of names");
            for (std::size_t i = 0; i < vars.size(); ++i) {
                c.variables.push_back(get_string(vars[i], where + ".variables[" + std::to_string(i) + "]"));
            }
        }
    }
    if (j.contains("jacobian")) {
        const std::string mode = get_string(j["jacobian"], where + ".jacobian");
        if (mode == "analytic") {
            c.jacobian = JacobianMode::Analytic;
        } else if (mode == "central-difference") {
            c.jacobian = JacobianMode::CentralDifference;
        } else {
            bad(where + ".jacobian", "expected 'analytic' or 'central-difference'");
        }
    }
    if (j.contains("step")) c.step = get_positive(j["step"], where + ".step");
    return c;
}

std::vector<Axis> parse_grid(const Json& j) {
    if (!j.is_array() || j.empty()) bad("grid", "expected a non-empty array of axes");
    std::vector<Axis> axes;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string where = "grid[" + std::to_string(i) + "]";
        check_keys(j[i], where, {"min", "max", "samples"});
        for (const char* key : {"min", "max", "samples"}) {
            if (!j[i].contains(key)) bad(where, std::string("missing '") + key + "'");
        }
        Axis a{get_number(j[i]["min"], where + ".min"), get_number(j[i]["max"], where + ".max"),
               get_count(j[i]["samples"], where + ".samples")};
        if (!(a.max > a.min)) bad(where, "max must exceed min");
        if (a.samples < 2) bad(where + ".samples", "must be at least 2");
        axes.push_back(a);
    }
    return axes;
}

Tolerances parse_tolerances(const Json& j) {
    Tolerances t;
    const std::pair<const char*, double Tolerances::*> fields[] = {
        {"algebraic", &Tolerances::algebraic},
        {"derived", &Tolerances::derived},
        {"rank", &Tolerances::rank},
        {"orthonormal", &Tolerances::orthonormal},
        {"metric_symmetry", &Tolerances::metric_symmetry},
        {"metric_conditioning", &Tolerances::metric_conditioning},
        {"structure", &Tolerances::structure},
        {"unit", &Tolerances::unit},
        {"classify", &Tolerances::classify},
        {"immersion_rank", &Tolerances::immersion_rank},
        {"singular", &Tolerances::singular},
        {"equality_residual", &Tolerances::equality_residual},
        {"equality_gap", &Tolerances::equality_gap},
    };
    if (!j.is_object()) bad("tolerances", "expected an object");
    for (const auto& [key, value] : j.items()) {
        const auto it = std::find_if(std::begin(fields), std::end(fields), [&](const auto& f) { return key == f.first; });
        if (it == std::end(fields)) bad("tolerances", "unknown key '" + key + "'");
        t.*(it->second) = get_positive(value, "tolerances." + key);
    }
    return t;
}

VerifySpec parse_verify(const Json& j) {
    check_keys(j, "verify", {"samples", "ambient_dim", "sub_dim"});
    VerifySpec v;
    if (j.contains("samples")) v.samples = get_count(j["samples"], "verify.samples");
    if (j.contains("ambient_dim")) v.ambient_dim = get_count(j["ambient_dim"], "verify.ambient_dim");
    if (j.contains("sub_dim")) v.sub_dim = get_count(j["sub_dim"], "verify.sub_dim");
    if (v.samples == 0) bad("verify.samples", "must be at least 1");
    if (v.ambient_dim < 2 || v.ambient_dim % 2 != 0) bad("verify.ambient_dim", "must be even and at least 2");
    if (v.sub_dim && (*v.sub_dim < 2 || *v.sub_dim % 2 != 0 || *v.sub_dim > v.ambient_dim)) {
        bad("verify.sub_dim", "must be even, at least 2 and at most ambient_dim");
    }
    return v;
}

NijenhuisSpec parse_nijenhuis(const Json& j) {
    check_keys(j, "nijenhuis", {"points", "pairs"});
    NijenhuisSpec n;
    if (!j.contains("points")) bad("nijenhuis", "missing 'points'");
    n.points = get_vectors(j["points"], "nijenhuis.points");
    const std::size_t dim = static_cast<std::size_t>(n.points.front().size());
    for (const auto& p : n.points) {
        if (static_cast<std::size_t>(p.size()) != dim) bad("nijenhuis.points", "points differ in dimension");
    }
    if (j.contains("pairs")) {
        const Json& pairs = j["pairs"];
        if (!pairs.is_array() || pairs.empty()) bad("nijenhuis.pairs", "expected a non-empty array");
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const std::string where = "nijenhuis.pairs[" + std::to_string(i) + "]";
            const Json& p = pairs[i];
            if (!p.is_array() || p.size() != 2) bad(where, "expected a pair");
            if (p[0].is_number_integer() && p[1].is_number_integer()) {
                // 1-based coordinate indices
                const auto a = get_count(p[0], where + "[0]"), b = get_count(p[1], where + "[1]");
                if (a < 1 || b < 1 || a > dim || b > dim) bad(where, "coordinate index out of range");
                n.pairs.emplace_back(Vector::Unit(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(a - 1)),
                                     Vector::Unit(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(b - 1)));
            } else {
                Vector x = get_vector(p[0], where + "[0]"), y = get_vector(p[1], where + "[1]");
                if (static_cast<std::size_t>(x.size()) != dim || static_cast<std::size_t>(y.size()) != dim) {
                    bad(where, "vector dimension differs from the points");
                }
                n.pairs.emplace_back(std::move(x), std::move(y));
            }
        }
    } else {
        for (std::size_t a = 0; a < dim; ++a) {
            for (std::size_t b = a + 1; b < dim; ++b) {
                n.pairs.emplace_back(Vector::Unit(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(a)),
                                     Vector::Unit(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(b)));
            }
        }
    }
    return n;
}

// ---- output helpers ---------------------------------------------------------

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw ConfigError("failed writing '" + path + "'");
}

void emit(const JobConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.output.empty()) {
        out << text;
    } else {
        write_text(cfg.output, text);
    }
}

Json to_json(const Vector& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Json to_json(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(x);
    return a;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

void require_json_format(const JobConfig& cfg) {
    if (!cfg.format.empty() && cfg.format != "json") throw ConfigError("format '" + cfg.format + "' is only available for scan");
}

// ---- commands ---------------------------------------------------------------

int run_validate(const JobConfig& cfg, std::ostream& out) {
    require_json_format(cfg);
    const auto& spec = *cfg.structure;
    const CompatibleStructure s = spec.type == "matrix" ? CompatibleStructure::unchecked(spec.metric, spec.jop)
                                                        : build_structure(cfg);
    const auto d = validate(s, cfg.tolerances);
    Json j;
    j["command"] = "validate-structure";
    j["structure"] = spec.type;
    j["dim"] = s.dim();
    j["passed"] = d.passed;
    j["j_square_residual"] = d.j_square_residual;
    j["compatibility_residual"] = d.compatibility_residual;
    j["symmetry_residual"] = d.symmetry_residual;
    j["metric_min_eigenvalue"] = d.metric_min_eigenvalue;
    j["metric_max_eigenvalue"] = d.metric_max_eigenvalue;
    emit(cfg, dump(j), out);
    return d.passed ? exit_code::ok : exit_code::invalid_input;
}

int run_angle(const JobConfig& cfg, std::ostream& out) {
    require_json_format(cfg);
    const auto& spec = *cfg.structure;
    std::vector<Vector> vectors = cfg.subspace;
    if (spec.type == "s6") {
        // 7-vectors must be tangent at the base point; 6-vectors are taken in
        // the tangent basis already
        const auto ts = s6_structure(*spec.point, cfg.tolerances);
        for (auto& v : vectors) {
            if (v.size() == 7) {
                if (std::abs(ts.point.dot(v)) > 1e-10 * std::max(1.0, v.norm())) {
                    throw ConfigError("subspace: vector is not tangent to S^6 at the base point");
                }
                v = ts.tangent_basis.transpose() * v;
            }
        }
    }
    const CompatibleStructure s = build_structure(cfg);
    for (const auto& v : vectors) {
        if (static_cast<std::size_t>(v.size()) != s.dim()) {
            throw ConfigError("subspace: vector dimension " + std::to_string(v.size()) + " does not match structure dimension " +
                              std::to_string(s.dim()));
        }
    }
    const OrientedSubspace w(vectors);
    const auto r = angle_report(s, w, cfg.tolerances);
    const auto check = verify_wirtinger(s, w, cfg.tolerances);
    Json j;
    j["command"] = "angle";
    j["ambient_dim"] = s.dim();
    j["sub_dim"] = vectors.size();
    j["cos_alpha"] = r.cos_alpha;
    j["alpha"] = r.alpha;
    j["lambdas"] = to_json(r.lambdas);
    j["classification"] = std::string(to_string(r.classification));
    j["complexity_residual"] = r.complexity_residual;
    j["bound_margin"] = check.bound_margin;
    j["bound_holds"] = check.bound_holds;
    emit(cfg, dump(j), out);
    return exit_code::ok;
}

Json summary_json(const JobConfig& cfg, const ImmersionChart& c, const FieldSummary& s) {
    Json j;
    j["command"] = "scan";
    j["chart"] = cfg.chart->catalog.empty() ? Json("expression") : Json(cfg.chart->catalog);
    Json shape = Json::array();
    for (const auto& a : c.domain) shape.push_back(a.samples);
    j["grid"] = shape;
    j["points"] = s.points;
    j["evaluated"] = s.evaluated;
    j["min_cos_alpha"] = s.evaluated ? Json(s.min_cos_alpha) : Json(nullptr);
    j["max_cos_alpha"] = s.evaluated ? Json(s.max_cos_alpha) : Json(nullptr);
    j["mean_cos_alpha"] = s.evaluated ? Json(s.mean_cos_alpha) : Json(nullptr);
    Json counts, fractions;
    for (auto k : {Classification::Complex, Classification::AntiComplex, Classification::Isotropic, Classification::Generic}) {
        const auto it = s.classification_counts.find(k);
        const std::size_t n = it == s.classification_counts.end() ? 0 : it->second;
        counts[std::string(to_string(k))] = n;
        fractions[std::string(to_string(k))] =
            s.evaluated ? Json(static_cast<double>(n) / static_cast<double>(s.evaluated)) : Json(nullptr);
    }
    j["classification_counts"] = counts;
    j["classification_fractions"] = fractions;
    j["max_grad_alpha_norm"] = optional_number(s.max_grad_alpha_norm);
    j["flagged"] = s.flagged;
    Json flags = Json::object();
    for (const auto& [name, n] : s.flag_counts) flags[name] = n;
    j["flag_counts"] = flags;
    return j;
}

std::string scan_csv(const AngleField& af, std::size_t param_dim) {
    const std::size_t m = param_dim / 2;
    std::string out;
    for (std::size_t i = 0; i < param_dim; ++i) out += "u" + std::to_string(i + 1) + ",";
    out += "cos_alpha,alpha,";
    for (std::size_t k = 0; k < m; ++k) out += "lambda_" + std::to_string(k + 1) + ",";
    out += "classification,grad_alpha_norm,flags\n";
    for (const auto& p : af.points) {
        for (Eigen::Index i = 0; i < p.params.size(); ++i) out += format_double(p.params(i)) + ",";
        if (p.report) {
            out += format_double(p.report->cos_alpha) + "," + format_double(p.report->alpha) + ",";
            for (std::size_t k = 0; k < m; ++k) out += format_double(p.report->lambdas[k]) + ",";
            out += std::string(to_string(p.report->classification)) + ",";
        } else {
            out += ",,";
            for (std::size_t k = 0; k < m; ++k) out += ",";
            out += ",";
        }
        if (p.grad_alpha_norm) out += format_double(*p.grad_alpha_norm);
        out += "," + describe_flags(p.flags) + "\n";
    }
    return out;
}

Json scan_points_json(const AngleField& af) {
    Json points = Json::array();
    for (const auto& p : af.points) {
        Json q;
        q["params"] = to_json(p.params);
        if (p.report) {
            q["cos_alpha"] = p.report->cos_alpha;
            q["alpha"] = p.report->alpha;
            q["lambdas"] = to_json(p.report->lambdas);
            q["classification"] = std::string(to_string(p.report->classification));
        }
        q["grad_alpha_norm"] = optional_number(p.grad_alpha_norm);
        q["flags"] = describe_flags(p.flags);
        points.push_back(q);
    }
    return points;
}

int run_scan(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
    const std::string format = cfg.format.empty() ? "csv" : cfg.format;
    if (format != "csv" && format != "json") throw ConfigError("format must be 'csv' or 'json'");
    const ImmersionChart c = build_chart(cfg);
    AngleField af = angle_field(c, cfg.tolerances);
    const bool gradient = std::all_of(c.domain.begin(), c.domain.end(), [](const Axis& a) { return a.samples >= 3; });
    if (gradient) af = gradient_field(std::move(af), c, cfg.tolerances);
    const auto summary = field_summary(af);
    const Json sj = summary_json(cfg, c, summary);

    if (format == "csv") {
        const std::string csv = scan_csv(af, c.param_dim);
        if (cfg.output.empty()) {
            out << csv;
            err << dump(sj);
        } else {
            write_text(cfg.output, csv);
            write_text(cfg.output + ".summary.json", dump(sj));
        }
    } else {
        Json j;
        j["summary"] = sj;
        j["points"] = scan_points_json(af);
        emit(cfg, dump(j), out);
    }
    if (summary.evaluated == 0) {
        err << "error: no grid point could be evaluated\n";
        return exit_code::numerical_failure;
    }
    return exit_code::ok;
}

int run_verify(const JobConfig& cfg, std::ostream& out) {
    require_json_format(cfg);
    const auto& v = cfg.verify;
    const std::size_t n = v.ambient_dim / 2;
    std::mt19937_64 engine(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    double worst_margin = std::numeric_limits<double>::infinity();
    double max_abs_cos = 0.0;
    std::size_t violations = 0, resampled = 0, equality_hits = 0;
    Json violation_samples = Json::array();
    for (std::size_t i = 0; i < v.samples; ++i) {
        const auto s = random_compatible(n, engine());
        const std::size_t k = v.sub_dim ? *v.sub_dim : 2 * std::uniform_int_distribution<std::size_t>(1, n)(engine);
        for (;;) {
            std::vector<Vector> vectors;
            for (std::size_t c = 0; c < k; ++c) {
                Vector x(static_cast<Eigen::Index>(v.ambient_dim));
                for (Eigen::Index r = 0; r < x.size(); ++r) x(r) = normal(engine);
                vectors.push_back(std::move(x));
            }
            WirtingerCheck check;
            try {
                check = verify_wirtinger(s, OrientedSubspace(std::move(vectors)), cfg.tolerances);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::RankDeficient) throw;
                ++resampled;
                continue;
            }
            worst_margin = std::min(worst_margin, check.bound_margin);
            max_abs_cos = std::max(max_abs_cos, std::abs(check.cos_alpha));
            if (check.complexity_residual <= cfg.tolerances.equality_residual) ++equality_hits;
            if (!check.bound_holds || !check.equality_consistent) {
                ++violations;
                if (violation_samples.size() < 10) {
                    Json vj;
                    vj["sample"] = i;
                    vj["sub_dim"] = k;
                    vj["cos_alpha"] = check.cos_alpha;
                    vj["bound_margin"] = check.bound_margin;
                    vj["complexity_residual"] = check.complexity_residual;
                    violation_samples.push_back(vj);
                }
            }
            break;
        }
    }
    Json j;
    j["command"] = "verify";
    j["seed"] = cfg.seed;
    j["samples"] = v.samples;
    j["ambient_dim"] = v.ambient_dim;
    j["sub_dim"] = v.sub_dim ? Json(*v.sub_dim) : Json("random");
    j["worst_bound_margin"] = worst_margin;
    j["max_abs_cos_alpha"] = max_abs_cos;
    j["equality_cases"] = equality_hits;
    j["resampled"] = resampled;
    j["violations"] = violations;
    j["violation_samples"] = violation_samples;
    emit(cfg, dump(j), out);
    return violations == 0 ? exit_code::ok : exit_code::violation;
}

int run_nijenhuis(const JobConfig& cfg, std::ostream& out) {
    require_json_format(cfg);
    const StructureField field = build_field(*cfg.structure);
    StructureField halved = field;
    halved.smoothness_step /= 2.0;
    if (static_cast<std::size_t>(cfg.nijenhuis.points.front().size()) != field.chart_dim) {
        throw ConfigError("nijenhuis.points: dimension does not match field chart dimension " + std::to_string(field.chart_dim));
    }
    Json evaluations = Json::array();
    double max_norm = 0.0;
    for (const auto& x : cfg.nijenhuis.points) {
        for (const auto& [X, Y] : cfg.nijenhuis.pairs) {
            const double n1 = nijenhuis(field, x, X, Y).norm();
            const double n2 = nijenhuis(halved, x, X, Y).norm();
            max_norm = std::max(max_norm, n1);
            Json e;
            e["point"] = to_json(x);
            e["X"] = to_json(X);
            e["Y"] = to_json(Y);
            e["norm"] = n1;
            e["halved_step_norm"] = n2;
            e["halving_ratio"] = n1 > 0.0 ? Json(n2 / n1) : Json(nullptr);
            evaluations.push_back(e);
        }
    }
    Json j;
    j["command"] = "nijenhuis";
    j["field"] = field.name;
    j["step"] = field.smoothness_step;
    j["max_norm"] = max_norm;
    j["evaluations"] = evaluations;
    emit(cfg, dump(j), out);
    return exit_code::ok;
}

bool numerical(ErrorKind k) {
    return k == ErrorKind::ConvergenceFailure || k == ErrorKind::DegenerateImmersion || k == ErrorKind::NonFinite;
}

}  // namespace

JobConfig parse_config(const Json& doc) {
    check_keys(doc, "config", {"command", "structure", "subspace", "chart", "grid", "tolerances", "verify", "nijenhuis",
                               "seed", "output", "format"});
    JobConfig cfg;
    if (!doc.contains("command")) bad("config", "missing 'command'");
    cfg.command = get_string(doc["command"], "command");
    if (std::none_of(std::begin(commands), std::end(commands), [&](const char* c) { return cfg.command == c; })) {
        bad("command", "unknown command '" + cfg.command + "'");
    }
    if (doc.contains("structure")) cfg.structure = parse_structure(doc["structure"]);
    if (doc.contains("subspace")) cfg.subspace = get_vectors(doc["subspace"], "subspace");
    if (doc.contains("chart")) cfg.chart = parse_chart(doc["chart"]);
    if (doc.contains("grid")) cfg.grid = parse_grid(doc["grid"]);
    if (doc.contains("tolerances")) cfg.tolerances = parse_tolerances(doc["tolerances"]);
    if (doc.contains("verify")) cfg.verify = parse_verify(doc["verify"]);
    if (doc.contains("nijenhuis")) cfg.nijenhuis = parse_nijenhuis(doc["nijenhuis"]);
    if (doc.contains("seed")) cfg.seed = get_count(doc["seed"], "seed");
    if (doc.contains("output")) cfg.output = get_string(doc["output"], "output");
    if (doc.contains("format")) {
        cfg.format = get_string(doc["format"], "format");
        if (cfg.format != "csv" && cfg.format != "json") bad("format", "expected 'csv' or 'json'");
    }

    const std::string& c = cfg.command;
    if ((c == "validate-structure" || c == "angle" || c == "nijenhuis") && !cfg.structure) {
        bad("config", "command '" + c + "' requires 'structure'");
    }
    if (c == "angle" && cfg.subspace.empty()) bad("config", "command 'angle' requires 'subspace'");
    if (c == "scan" && (!cfg.chart || cfg.grid.empty())) bad("config", "command 'scan' requires 'chart' and 'grid'");
    if (c == "verify" && !doc.contains("verify")) bad("config", "command 'verify' requires 'verify'");
    if (c == "nijenhuis") {
        if (cfg.structure->type != "field") bad("structure", "command 'nijenhuis' requires a structure of type 'field'");
        if (!doc.contains("nijenhuis")) bad("config", "command 'nijenhuis' requires 'nijenhuis'");
    }
    if ((c == "validate-structure" || c == "angle") && cfg.structure->type == "field" && !cfg.structure->point) {
        bad("structure", "a field structure needs 'point' for command '" + c + "'");
    }
    return cfg;
}

JobConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config '" + path + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    Json doc;
    try {
        doc = Json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

StructureField build_field(const StructureSpec& spec) {
    if (spec.type != "field") throw ConfigError("structure: expected type 'field'");
    return chart_field(spec.field, spec.params, spec.step);
}

CompatibleStructure build_structure(const JobConfig& cfg) {
    if (!cfg.structure) throw ConfigError("config: missing 'structure'");
    const auto& s = *cfg.structure;
    if (s.type == "standard") return standard_structure(s.n);
    if (s.type == "random") return random_compatible(s.n, s.seed.value_or(cfg.seed));
    if (s.type == "matrix") return CompatibleStructure(s.metric, s.jop, cfg.tolerances);
    if (s.type == "s6") return s6_structure(*s.point, cfg.tolerances).intrinsic();
    if (!s.point) throw ConfigError("structure: a field structure needs 'point'");
    return build_field(s).at(*s.point);
}

ImmersionChart build_chart(const JobConfig& cfg) {
    if (!cfg.chart) throw ConfigError("config: missing 'chart'");
    const ChartSpec& spec = *cfg.chart;
    ImmersionChart c;
    if (!spec.catalog.empty()) {
        c = catalog_chart(spec.catalog, spec.params, cfg.grid);
        if (cfg.structure) {
            if (cfg.structure->type == "field") {
                c.ambient = build_field(*cfg.structure);
            } else {
                c.ambient = build_structure(cfg);
            }
        }
        c.mode = spec.jacobian;
        c.step = spec.step;
        c.check();
        return c;
    }

    const std::size_t k = cfg.grid.size();
    std::vector<Expression> exprs;
    for (std::size_t i = 0; i < spec.components.size(); ++i) {
        try {
            exprs.push_back(parse_expression(spec.components[i]));
        } catch (const ParseError& e) {
            throw ConfigError("chart.components[" + std::to_string(i) + "]: parse error at " + e.what());
        }
    }

    // variable names: explicit, else u1..uk, else (u, v) for surfaces
    std::vector<std::vector<std::string>> candidates;
    if (!spec.variables.empty()) {
        candidates.push_back(spec.variables);
    } else {
        std::vector<std::string> numbered;
        for (std::size_t i = 0; i < k; ++i) numbered.push_back("u" + std::to_string(i + 1));
        candidates.push_back(numbered);
        if (k == 2) candidates.push_back({"u", "v"});
    }
    if (candidates.front().size() != k) throw ConfigError("chart.variables: expected one name per grid axis");
    std::vector<std::string> names;
    for (const auto& cand : candidates) {
        const bool covers = std::all_of(exprs.begin(), exprs.end(), [&](const Expression& e) {
            const auto used = e.variables();
            return std::all_of(used.begin(), used.end(),
                               [&](const std::string& u) { return std::find(cand.begin(), cand.end(), u) != cand.end(); });
        });
        if (covers) {
            names = cand;
            break;
        }
    }
    if (names.empty()) {
        std::string expected;
        for (const auto& n : candidates.front()) expected += (expected.empty() ? "" : ", ") + n;
        throw ConfigError("chart.components: unknown variable; expected names from {" + expected + "}");
    }

    c.param_dim = k;
    c.ambient_dim = exprs.size();
    c.domain = cfg.grid;
    c.mode = spec.jacobian;
    c.step = spec.step;
    if (!cfg.structure) {
        if (exprs.size() % 2 != 0) throw ConfigError("chart.components: ambient dimension must be even");
        c.ambient = standard_structure(exprs.size() / 2);
    } else if (cfg.structure->type == "field") {
        c.ambient = build_field(*cfg.structure);
    } else {
        c.ambient = build_structure(cfg);
    }

    auto bind = [names](const Vector& x) {
        Bindings b;
        for (std::size_t i = 0; i < names.size(); ++i) b[names[i]] = x(static_cast<Eigen::Index>(i));
        return b;
    };
    c.map = [exprs, bind](const Vector& x) {
        const Bindings b = bind(x);
        Vector y(static_cast<Eigen::Index>(exprs.size()));
        for (std::size_t i = 0; i < exprs.size(); ++i) y(static_cast<Eigen::Index>(i)) = exprs[i].evaluate(b);
        return y;
    };
    if (c.mode == JacobianMode::Analytic) {
        std::vector<std::vector<Expression>> partials(exprs.size());
        for (std::size_t i = 0; i < exprs.size(); ++i) {
            for (const auto& n : names) {
                try {
                    partials[i].push_back(exprs[i].derivative(n));
                } catch (const EvalError& e) {
                    throw ConfigError("chart.components[" + std::to_string(i) + "]: " + e.what() +
                                      "; use \"jacobian\": \"central-difference\"");
                }
            }
        }
        c.jacobian = [partials, bind](const Vector& x) {
            const Bindings b = bind(x);
            Matrix jac(static_cast<Eigen::Index>(partials.size()), x.size());
            for (std::size_t i = 0; i < partials.size(); ++i) {
                for (std::size_t j = 0; j < partials[i].size(); ++j) {
                    jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = partials[i][j].evaluate(b);
                }
            }
            return jac;
        };
    }
    c.check();
    return c;
}

int run(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const std::string& c = cfg.command;
        if (c == "validate-structure") return run_validate(cfg, out);
        if (c == "angle") return run_angle(cfg, out);
        if (c == "scan") return run_scan(cfg, out, err);
        if (c == "verify") return run_verify(cfg, out);
        if (c == "nijenhuis") return run_nijenhuis(cfg, out);
        err << "error: unknown command '" << c << "'\n";
        return exit_code::invalid_input;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return numerical(e.kind()) ? exit_code::numerical_failure : exit_code::invalid_input;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::invalid_input;
    }
}

}  // namespace wirtinger::cli
