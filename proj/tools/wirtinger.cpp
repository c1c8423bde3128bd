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

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wirtinger/cli/job.hpp"

int main(int argc, char** argv) {
    using namespace wirtinger::cli;

    CLI::App app{"Kaehler angle and Wirtinger inequality toolkit"};
    std::string command;
    std::string config_path;
    std::optional<std::string> output;
    std::optional<std::string> format;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    app.add_option("command", command, "validate-structure | angle | scan | verify | nijenhuis")->required();
    app.add_option("--config", config_path, "JSON job configuration")->required();
    app.add_option("--output", output, "output path (default: stdout)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", seed, "overrides the config seed");
    app.add_option("--tol", tol, "classification tolerance")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_code::ok : exit_code::invalid_input;
    }

    JobConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code::invalid_input;
    }
    if (cfg.command != command) {
        std::cerr << "error: command '" << command << "' does not match config command '" << cfg.command << "'\n";
        return exit_code::invalid_input;
    }
    if (output) cfg.output = *output;
    if (format) cfg.format = *format;
    if (seed) cfg.seed = *seed;
    if (tol) cfg.tolerances.classify = *tol;
    return run(cfg, std::cout, std::cerr);
}
