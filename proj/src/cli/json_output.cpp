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

#include "wirtinger/cli/json_output.hpp"

#include <cmath>
#include <cstdio>

namespace wirtinger::cli {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(2 * depth), ' '); }

void emit(const Json& v, int depth, std::string& out) {
    switch (v.type()) {
        case Json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, item] : v.items()) {
                if (!first) out += ",\n";
                first = false;
                indent(out, depth + 1);
                out += Json(key).dump();
                out += ": ";
                emit(item, depth + 1, out);
            }
            out += '\n';
            indent(out, depth);
            out += '}';
            return;
        }
        case Json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            // scalar arrays stay on one line
            bool flat = true;
            for (const auto& item : v) flat = flat && item.is_primitive();
            out += '[';
            bool first = true;
            for (const auto& item : v) {
                if (!first) out += flat ? ", " : ",";
                first = false;
                if (!flat) {
                    out += '\n';
                    indent(out, depth + 1);
                }
                emit(item, depth + 1, out);
            }
            if (!flat) {
                out += '\n';
                indent(out, depth);
            }
            out += ']';
            return;
        }
        case Json::value_t::number_float: {
            const double d = v.get<double>();
            out += std::isfinite(d) ? format_double(d) : "null";
            return;
        }
        default:
            out += v.dump();
            return;
    }
}

}  // namespace

std::string dump(const Json& value) {
    std::string out;
    emit(value, 0, out);
    out += '\n';
    return out;
}

}  // namespace wirtinger::cli
