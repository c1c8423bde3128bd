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

#include "wirtinger/cli/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <system_error>

namespace wirtinger::cli {

ParseError::ParseError(std::size_t offset, const std::string& message)
    : std::runtime_error("offset " + std::to_string(offset) + ": " + message), offset_(offset) {}

namespace {

using Kind = Expression::Kind;
using NodePtr = std::shared_ptr<const Expression::Node>;

constexpr std::string_view functions[] = {"sin", "cos", "exp", "sqrt"};

bool is_function(std::string_view name) {
    for (auto f : functions) {
        if (f == name) return true;
    }
    return false;
}

NodePtr number(double v) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Number;
    n->value = v;
    return n;
}

NodePtr variable(std::string name) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Variable;
    n->name = std::move(name);
    return n;
}

NodePtr unary(Kind kind, NodePtr operand, std::string name = {}) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = kind;
    n->lhs = std::move(operand);
    n->name = std::move(name);
    return n;
}

NodePtr binary(Kind kind, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        NodePtr e = expression();
        skip_space();
        if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& message) const { throw ParseError(pos_ + 1, message); }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expression() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = binary(Kind::Add, lhs, term());
            } else if (accept('-')) {
                lhs = binary(Kind::Subtract, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = signed_factor();
        for (;;) {
            if (accept('*')) {
                lhs = binary(Kind::Multiply, lhs, signed_factor());
            } else if (accept('/')) {
                lhs = binary(Kind::Divide, lhs, signed_factor());
            } else {
                return lhs;
            }
        }
    }

    NodePtr signed_factor() {
        if (accept('-')) return unary(Kind::Negate, signed_factor());
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return binary(Kind::Power, base, signed_factor());
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expression();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return literal();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            std::string name(text_.substr(start, pos_ - start));
            if (is_function(name)) {
                if (!accept('(')) fail("expected '(' after " + name);
                NodePtr arg = expression();
                if (!accept(')')) fail("expected ')'");
                return unary(Kind::Call, arg, name);
            }
            skip_space();
            if (pos_ < text_.size() && text_[pos_] == '(') fail("unknown function '" + name + "'");
            return variable(std::move(name));
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr literal() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t mantissa = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) fail("malformed number");
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (digits() == 0) fail("malformed exponent");
        }
        double v = 0.0;
        const char* first = text_.data() + start;
        const char* last = text_.data() + pos_;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
            pos_ = start;
            fail("number out of range");
        }
        return number(v);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

double checked(double v) {
    if (!std::isfinite(v)) throw EvalError("non-finite result");
    return v;
}

double eval(const Expression::Node& n, const Bindings& vars) {
    switch (n.kind) {
        case Kind::Number:
            return n.value;
        case Kind::Variable: {
            const auto it = vars.find(n.name);
            if (it == vars.end()) throw EvalError("unbound variable '" + n.name + "'");
            return it->second;
        }
        case Kind::Negate:
            return -eval(*n.lhs, vars);
        case Kind::Add:
            return checked(eval(*n.lhs, vars) + eval(*n.rhs, vars));
        case Kind::Subtract:
            return checked(eval(*n.lhs, vars) - eval(*n.rhs, vars));
        case Kind::Multiply:
            return checked(eval(*n.lhs, vars) * eval(*n.rhs, vars));
        case Kind::Divide: {
            const double num = eval(*n.lhs, vars);
            const double den = eval(*n.rhs, vars);
            if (den == 0.0) throw EvalError("division by zero");
            return checked(num / den);
        }
        case Kind::Power: {
            const double b = eval(*n.lhs, vars);
            const double e = eval(*n.rhs, vars);
            if (b == 0.0 && e < 0.0) throw EvalError("division by zero");
            if (b < 0.0 && std::trunc(e) != e) throw EvalError("domain error in ^");
            return checked(std::pow(b, e));
        }
        case Kind::Call: {
            const double x = eval(*n.lhs, vars);
            if (n.name == "sin") return std::sin(x);
            if (n.name == "cos") return std::cos(x);
            if (n.name == "exp") return checked(std::exp(x));
            if (x < 0.0) throw EvalError("domain error in sqrt");
            return std::sqrt(x);
        }
    }
    throw EvalError("corrupt expression");
}

void collect(const Expression::Node& n, std::vector<std::string>& out) {
    if (n.kind == Kind::Variable) {
        for (const auto& s : out) {
            if (s == n.name) return;
        }
        out.push_back(n.name);
    }
    if (n.lhs) collect(*n.lhs, out);
    if (n.rhs) collect(*n.rhs, out);
}

int precedence(const Expression::Node& n) {
    switch (n.kind) {
        case Kind::Add:
        case Kind::Subtract:
            return 1;
        case Kind::Multiply:
        case Kind::Divide:
            return 2;
        case Kind::Negate:
            return 3;
        case Kind::Power:
            return 4;
        case Kind::Number:
            return n.value < 0.0 || std::signbit(n.value) ? 3 : 5;
        default:
            return 5;
    }
}

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

void print(const Expression::Node& n, int min_prec, std::string& out) {
    const bool parens = precedence(n) < min_prec;
    if (parens) out += '(';
    switch (n.kind) {
        case Kind::Number:
            out += format_number(n.value);
            break;
        case Kind::Variable:
            out += n.name;
            break;
        case Kind::Negate:
            out += '-';
            print(*n.lhs, 3, out);
            break;
        case Kind::Add:
        case Kind::Subtract:
            print(*n.lhs, 1, out);
            out += n.kind == Kind::Add ? " + " : " - ";
            print(*n.rhs, 2, out);
            break;
        case Kind::Multiply:
        case Kind::Divide:
            print(*n.lhs, 2, out);
            out += n.kind == Kind::Multiply ? "*" : "/";
            print(*n.rhs, 3, out);
            break;
        case Kind::Power:
            print(*n.lhs, 5, out);
            out += '^';
            print(*n.rhs, 3, out);
            break;
        case Kind::Call:
            out += n.name;
            out += '(';
            print(*n.lhs, 0, out);
            out += ')';
            break;
    }
    if (parens) out += ')';
}

bool depends(const Expression::Node& n, std::string_view var) {
    if (n.kind == Kind::Variable) return n.name == var;
    return (n.lhs && depends(*n.lhs, var)) || (n.rhs && depends(*n.rhs, var));
}

bool is_number(const NodePtr& n, double v) { return n->kind == Kind::Number && n->value == v; }

// Constructors with constant folding, so derivatives stay readable.
NodePtr add(NodePtr a, NodePtr b) {
    if (is_number(a, 0.0)) return b;
    if (is_number(b, 0.0)) return a;
    if (a->kind == Kind::Number && b->kind == Kind::Number) return number(a->value + b->value);
    return binary(Kind::Add, a, b);
}

NodePtr neg(NodePtr a) {
    if (a->kind == Kind::Number) return number(-a->value);
    if (a->kind == Kind::Negate) return a->lhs;
    return unary(Kind::Negate, a);
}

NodePtr sub(NodePtr a, NodePtr b) {
    if (is_number(b, 0.0)) return a;
    if (is_number(a, 0.0)) return neg(b);
    if (a->kind == Kind::Number && b->kind == Kind::Number) return number(a->value - b->value);
    return binary(Kind::Subtract, a, b);
}

NodePtr mul(NodePtr a, NodePtr b) {
    if (is_number(a, 0.0) || is_number(b, 0.0)) return number(0.0);
    if (is_number(a, 1.0)) return b;
    if (is_number(b, 1.0)) return a;
    if (a->kind == Kind::Number && b->kind == Kind::Number) return number(a->value * b->value);
    return binary(Kind::Multiply, a, b);
}

NodePtr div(NodePtr a, NodePtr b) {
    if (is_number(a, 0.0)) return number(0.0);
    if (is_number(b, 1.0)) return a;
    return binary(Kind::Divide, a, b);
}

NodePtr pow(NodePtr a, NodePtr b) {
    if (is_number(b, 1.0)) return a;
    if (is_number(b, 0.0)) return number(1.0);
    return binary(Kind::Power, a, b);
}

NodePtr call(const char* name, NodePtr a) { return unary(Kind::Call, a, name); }

NodePtr differentiate(const NodePtr& n, std::string_view var) {
    switch (n->kind) {
        case Kind::Number:
            return number(0.0);
        case Kind::Variable:
            return number(n->name == var ? 1.0 : 0.0);
        case Kind::Negate:
            return neg(differentiate(n->lhs, var));
        case Kind::Add:
            return add(differentiate(n->lhs, var), differentiate(n->rhs, var));
        case Kind::Subtract:
            return sub(differentiate(n->lhs, var), differentiate(n->rhs, var));
        case Kind::Multiply:
            return add(mul(differentiate(n->lhs, var), n->rhs), mul(n->lhs, differentiate(n->rhs, var)));
        case Kind::Divide: {
            const NodePtr top = sub(mul(differentiate(n->lhs, var), n->rhs), mul(n->lhs, differentiate(n->rhs, var)));
            return div(top, pow(n->rhs, number(2.0)));
        }
        case Kind::Power: {
            if (depends(*n->rhs, var)) throw EvalError("cannot differentiate a variable exponent");
            const NodePtr du = differentiate(n->lhs, var);
            if (is_number(du, 0.0)) return number(0.0);
            return mul(mul(n->rhs, pow(n->lhs, sub(n->rhs, number(1.0)))), du);
        }
        case Kind::Call: {
            const NodePtr du = differentiate(n->lhs, var);
            if (is_number(du, 0.0)) return number(0.0);
            if (n->name == "sin") return mul(call("cos", n->lhs), du);
            if (n->name == "cos") return mul(neg(call("sin", n->lhs)), du);
            if (n->name == "exp") return mul(n, du);
            return div(du, mul(number(2.0), n));
        }
    }
    throw EvalError("corrupt expression");
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

Expression::Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

double Expression::evaluate(const Bindings& vars) const { return eval(*root_, vars); }

std::vector<std::string> Expression::variables() const {
    std::vector<std::string> out;
    collect(*root_, out);
    return out;
}

std::string Expression::to_string() const {
    std::string out;
    print(*root_, 0, out);
    return out;
}

Expression Expression::derivative(std::string_view var) const { return Expression(differentiate(root_, var)); }

Expression parse_expression(std::string_view text) { return Expression(Parser(text).parse()); }

std::vector<std::string> split_components(std::string_view text) {
    std::string_view body = trim(text);
    // strip one pair of enclosing parentheses if they match each other
    if (body.size() >= 2 && body.front() == '(' && body.back() == ')') {
        int depth = 0;
        bool encloses = true;
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (body[i] == '(') ++depth;
            if (body[i] == ')') --depth;
            if (depth == 0 && i + 1 < body.size()) {
                encloses = false;
                break;
            }
        }
        if (encloses) body = body.substr(1, body.size() - 2);
    }
    std::vector<std::string> parts;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= body.size(); ++i) {
        if (i == body.size() || (body[i] == ',' && depth == 0)) {
            const auto part = trim(body.substr(start, i - start));
            if (part.empty()) throw ParseError(i + 1, "empty component");
            parts.emplace_back(part);
            start = i + 1;
        } else if (body[i] == '(') {
            ++depth;
        } else if (body[i] == ')') {
            --depth;
        }
    }
    return parts;
}

}  // namespace wirtinger::cli
