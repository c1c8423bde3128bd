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

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wirtinger::cli {

/// Syntax error; offset is the 1-based byte position of the problem
/// (one past the end of input for a premature end).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& message);
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation failure: division by zero, domain error, unbound variable,
/// or a non-finite result.
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Bindings = std::map<std::string, double, std::less<>>;

/// Immutable expression tree over literals, variables, + - * / ^, unary
/// minus, and sin cos exp sqrt. Precedence: ^ > unary - > * / > + -; ^ is
/// right-associative, the rest left-associative.
class Expression {
public:
    enum class Kind { Number, Variable, Negate, Add, Subtract, Multiply, Divide, Power, Call };

    struct Node {
        Kind kind = Kind::Number;
        double value = 0.0;
        std::string name;  // variable or function name
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;  // unused for Negate and Call
    };

    explicit Expression(std::shared_ptr<const Node> root);

    const Node& root() const { return *root_; }
    double evaluate(const Bindings& vars) const;
    /// Variable names in order of first appearance.
    std::vector<std::string> variables() const;
    /// Canonical text with minimal parentheses; parsing it yields the same tree.
    std::string to_string() const;
    /// Symbolic partial derivative. Throws EvalError when an exponent
    /// depends on var.
    Expression derivative(std::string_view var) const;

private:
    std::shared_ptr<const Node> root_;
};

Expression parse_expression(std::string_view text);

/// Splits "(a, b, c)" or "a, b, c" at top-level commas.
std::vector<std::string> split_components(std::string_view text);

}  // namespace wirtinger::cli
