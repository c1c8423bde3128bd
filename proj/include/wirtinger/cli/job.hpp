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
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wirtinger/charts.hpp"
#include "wirtinger/cli/json_output.hpp"

namespace wirtinger::cli {

/// Schema violation or inconsistent dimensions in a job configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int invalid_input = 1;
inline constexpr int violation = 2;
inline constexpr int numerical_failure = 3;
}  // namespace exit_code

struct StructureSpec {
    std::string type = "standard";  // standard | random | matrix | s6 | field
    std::size_t n = 1;
    std::optional<std::uint64_t> seed;  // random; falls back to JobConfig::seed
    Matrix metric;                      // matrix
    Matrix jop;                         // matrix
    std::optional<Vector> point;        // s6 base point, or field chart point
    std::string field;                  // field catalog name
    std::vector<double> params;         // field params
    double step = 1e-4;                 // field smoothness step
};

struct ChartSpec {
    std::string catalog;                  // catalog chart, or empty
    std::vector<double> params;           // catalog params
    std::vector<std::string> components;  // expressions, one per ambient coordinate
    std::vector<std::string> variables;   // empty: u1..uk, plus u, v when k = 2
    JacobianMode jacobian = JacobianMode::Analytic;
    double step = 0.0;
};

struct VerifySpec {
    std::size_t samples = 1000;
    std::size_t ambient_dim = 4;
    std::optional<std::size_t> sub_dim;  // empty: drawn per sample
};

struct NijenhuisSpec {
    std::vector<Vector> points;
    std::vector<std::pair<Vector, Vector>> pairs;  // empty: all coordinate pairs
};

struct JobConfig {
    std::string command;
    std::optional<StructureSpec> structure;
    std::vector<Vector> subspace;
    std::optional<ChartSpec> chart;
    std::vector<Axis> grid;
    Tolerances tolerances;
    VerifySpec verify;
    NijenhuisSpec nijenhuis;
    std::uint64_t seed = 0;
    std::string output;  // empty: stdout
    std::string format;  // csv | json; empty picks csv for scan, json otherwise
};

JobConfig parse_config(const Json& doc);
JobConfig load_config(const std::string& path);

CompatibleStructure build_structure(const JobConfig& cfg);
StructureField build_field(const StructureSpec& spec);
ImmersionChart build_chart(const JobConfig& cfg);

/// Runs one job. JSON and CSV go to cfg.output (scan also writes
/// <output>.summary.json) or to out; diagnostics go to err.
int run(const JobConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace wirtinger::cli
