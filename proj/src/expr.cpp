#include "hypercurve/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

namespace hypercurve::expr {

ParseError::ParseError(std::size_t position, std::string expected, std::string found)
    : Error(Errc::Parse, "at offset " + std::to_string(position) + ": expected " + expected +
                             ", found " + found),
      position_(position), expected_(std::move(expected)), found_(std::move(found)) {}

namespace {

enum class Tok { End, Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, LBracket, RBracket, Bar };

struct Token {
    Tok kind = Tok::End;
    std::string_view text;
    std::size_t offset = 0;
    double number = 0.0;
};

std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + std::string(t.text) + "'";
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const noexcept { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        current_ = Token{};
        current_.offset = pos_;
        if (pos_ >= src_.size()) {
            current_.kind = Tok::End;
            return;
        }
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_ + 1;
            while (end < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) {
                ++end;
            }
            current_.kind = Tok::Ident;
            current_.text = src_.substr(pos_, end - pos_);
            pos_ = end;
            return;
        }
        Tok kind;
        switch (c) {
        case '+': kind = Tok::Plus; break;
        case '-': kind = Tok::Minus; break;
        case '*': kind = Tok::Star; break;
        case '/': kind = Tok::Slash; break;
        case '^': kind = Tok::Caret; break;
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case '[': kind = Tok::LBracket; break;
        case ']': kind = Tok::RBracket; break;
        case '|': kind = Tok::Bar; break;
        default:
            throw ParseError(pos_, "token", "'" + std::string(1, c) + "'");
        }
        current_.kind = kind;
        current_.text = src_.substr(pos_, 1);
        ++pos_;
    }

    void lex_number() {
        const std::size_t start = pos_;
        std::size_t end = pos_;
        auto digits = [&] {
            const std::size_t from = end;
            while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
            return end - from;
        };
        std::size_t mantissa = digits();
        if (end < src_.size() && src_[end] == '.') {
            ++end;
            mantissa += digits();
        }
        if (mantissa == 0) throw ParseError(start, "number", "'.'");
        // An exponent is only consumed when digits follow, so "2e1x" stays an error below.
        if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
            std::size_t probe = end + 1;
            if (probe < src_.size() && (src_[probe] == '+' || src_[probe] == '-')) ++probe;
            if (probe < src_.size() && std::isdigit(static_cast<unsigned char>(src_[probe]))) {
                end = probe;
                digits();
            }
        }
        const std::string literal(src_.substr(start, end - start));
        double value = 0.0;
        auto res = std::from_chars(literal.data(), literal.data() + literal.size(), value);
        if (res.ec != std::errc{} || !std::isfinite(value)) {
            throw ParseError(start, "finite number", "'" + literal + "'");
        }
        current_.kind = Tok::Number;
        current_.text = src_.substr(start, end - start);
        current_.number = value;
        pos_ = end;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token current_;
};

NodePtr make(auto value) { return std::make_shared<const Node>(Node{std::move(value)}); }

std::optional<Constant> constant_named(std::string_view name) {
    if (name == "i1") return Constant::I1;
    if (name == "i2") return Constant::I2;
    if (name == "j") return Constant::J;
    if (name == "e1") return Constant::E1;
    if (name == "e2") return Constant::E2;
    if (name == "pi") return Constant::Pi;
    return std::nullopt;
}

std::optional<Function> function_named(std::string_view name) {
    if (name == "exp") return Function::Exp;
    if (name == "sin") return Function::Sin;
    if (name == "cos") return Function::Cos;
    if (name == "conj") return Function::Conj;
    if (name == "re") return Function::Re;
    if (name == "im") return Function::Im;
    return std::nullopt;
}

std::string_view name_of(Constant c) {
    switch (c) {
    case Constant::I1: return "i1";
    case Constant::I2: return "i2";
    case Constant::J: return "j";
    case Constant::E1: return "e1";
    case Constant::E2: return "e2";
    case Constant::Pi: return "pi";
    }
    return "?";
}

std::string_view name_of(Function f) {
    switch (f) {
    case Function::Exp: return "exp";
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Conj: return "conj";
    case Function::Re: return "re";
    case Function::Im: return "im";
    }
    return "?";
}

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) {}

    NodePtr parse_all() {
        NodePtr e = expression();
        if (lex_.peek().kind != Tok::End) throw ParseError(lex_.peek().offset, "operator", describe(lex_.peek()));
        return e;
    }

private:
    NodePtr expression() {
        NodePtr lhs = term();
        while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            const auto op = lex_.take().kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
            lhs = make(Binary{op, lhs, term()});
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = unary();
        while (lex_.peek().kind == Tok::Star || lex_.peek().kind == Tok::Slash) {
            const auto op = lex_.take().kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
            lhs = make(Binary{op, lhs, unary()});
        }
        return lhs;
    }

    NodePtr unary() {
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            return make(Negate{unary()});
        }
        if (lex_.peek().kind == Tok::Plus) {
            lex_.take();
            return unary();
        }
        return factor();
    }

    NodePtr factor() {
        NodePtr base = atom();
        if (lex_.peek().kind != Tok::Caret) return base;
        lex_.take();
        bool negative = false;
        if (lex_.peek().kind == Tok::Minus || lex_.peek().kind == Tok::Plus) {
            negative = lex_.take().kind == Tok::Minus;
        }
        const Token exp = lex_.take();
        int value = 0;
        auto res = std::from_chars(exp.text.data(), exp.text.data() + exp.text.size(), value);
        if (exp.kind != Tok::Number || res.ec != std::errc{} || res.ptr != exp.text.data() + exp.text.size()) {
            throw ParseError(exp.offset, "integer exponent", describe(exp));
        }
        if (lex_.peek().kind == Tok::Caret) {
            throw ParseError(lex_.peek().offset, "operand (powers do not chain; use parentheses)", "'^'");
        }
        return make(Power{base, negative ? -value : value});
    }

    NodePtr atom() {
        const Token t = lex_.take();
        switch (t.kind) {
        case Tok::Number:
            return make(Number{t.number});
        case Tok::Ident: {
            if (auto c = constant_named(t.text)) return make(ConstantRef{*c});
            if (auto f = function_named(t.text)) {
                expect(Tok::LParen, "'('");
                NodePtr arg = expression();
                expect(Tok::RParen, "')'");
                return make(Call{*f, arg});
            }
            return make(Variable{std::string(t.text)});
        }
        case Tok::LParen: {
            NodePtr inner = expression();
            expect(Tok::RParen, "')'");
            return inner;
        }
        case Tok::LBracket: {
            NodePtr first = expression();
            expect(Tok::Bar, "'|'");
            NodePtr second = expression();
            expect(Tok::RBracket, "']'");
            return make(Idempotent{first, second});
        }
        default:
            throw ParseError(t.offset, "operand", describe(t));
        }
    }

    void expect(Tok kind, const char* what) {
        if (lex_.peek().kind != kind) throw ParseError(lex_.peek().offset, what, describe(lex_.peek()));
        lex_.take();
    }

    Lexer lex_;
};

// Printer precedence levels.
constexpr int kSum = 1;
constexpr int kProduct = 2;
constexpr int kUnary = 3;
constexpr int kPower = 4;
constexpr int kAtom = 5;

void print_node(const Node& n, int context, std::string& out);

void print_wrapped(int own, int context, std::string& out, auto&& body) {
    const bool parens = own < context;
    if (parens) out += '(';
    body();
    if (parens) out += ')';
}

void print_node(const Node& n, int context, std::string& out) {
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Number>) {
                const int own = v.value < 0 ? kUnary : kAtom;
                print_wrapped(own, context, out, [&] { out += format_real(v.value); });
            } else if constexpr (std::is_same_v<T, ConstantRef>) {
                out += name_of(v.constant);
            } else if constexpr (std::is_same_v<T, Variable>) {
                out += v.name;
            } else if constexpr (std::is_same_v<T, Negate>) {
                print_wrapped(kUnary, context, out, [&] {
                    out += '-';
                    print_node(*v.operand, kUnary, out);
                });
            } else if constexpr (std::is_same_v<T, Binary>) {
                const bool additive = v.op == BinaryOp::Add || v.op == BinaryOp::Sub;
                const int own = additive ? kSum : kProduct;
                print_wrapped(own, context, out, [&] {
                    print_node(*v.lhs, own, out);
                    switch (v.op) {
                    case BinaryOp::Add: out += " + "; break;
                    case BinaryOp::Sub: out += " - "; break;
                    case BinaryOp::Mul: out += '*'; break;
                    case BinaryOp::Div: out += '/'; break;
                    }
                    print_node(*v.rhs, own + 1, out);
                });
            } else if constexpr (std::is_same_v<T, Power>) {
                print_wrapped(kPower, context, out, [&] {
                    print_node(*v.base, kAtom, out);
                    out += '^';
                    out += std::to_string(v.exponent);
                });
            } else if constexpr (std::is_same_v<T, Call>) {
                out += name_of(v.function);
                out += '(';
                print_node(*v.argument, 0, out);
                out += ')';
            } else if constexpr (std::is_same_v<T, Idempotent>) {
                out += '[';
                print_node(*v.first, 0, out);
                out += " | ";
                print_node(*v.second, 0, out);
                out += ']';
            }
        },
        n.value);
}

bool equal_nodes(const Node& a, const Node& b) {
    if (a.value.index() != b.value.index()) return false;
    return std::visit(
        [&](const auto& va) {
            using T = std::decay_t<decltype(va)>;
            const auto& vb = std::get<T>(b.value);
            if constexpr (std::is_same_v<T, Number>) {
                return va.value == vb.value;
            } else if constexpr (std::is_same_v<T, ConstantRef>) {
                return va.constant == vb.constant;
            } else if constexpr (std::is_same_v<T, Variable>) {
                return va.name == vb.name;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return equal_nodes(*va.operand, *vb.operand);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return va.op == vb.op && equal_nodes(*va.lhs, *vb.lhs) && equal_nodes(*va.rhs, *vb.rhs);
            } else if constexpr (std::is_same_v<T, Power>) {
                return va.exponent == vb.exponent && equal_nodes(*va.base, *vb.base);
            } else if constexpr (std::is_same_v<T, Call>) {
                return va.function == vb.function && equal_nodes(*va.argument, *vb.argument);
            } else {
                return equal_nodes(*va.first, *vb.first) && equal_nodes(*va.second, *vb.second);
            }
        },
        a.value);
}

void collect_variables(const Node& n, std::vector<std::string>& out) {
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Variable>) {
                out.push_back(v.name);
            } else if constexpr (std::is_same_v<T, Negate>) {
                collect_variables(*v.operand, out);
            } else if constexpr (std::is_same_v<T, Binary>) {
                collect_variables(*v.lhs, out);
                collect_variables(*v.rhs, out);
            } else if constexpr (std::is_same_v<T, Power>) {
                collect_variables(*v.base, out);
            } else if constexpr (std::is_same_v<T, Call>) {
                collect_variables(*v.argument, out);
            } else if constexpr (std::is_same_v<T, Idempotent>) {
                collect_variables(*v.first, out);
                collect_variables(*v.second, out);
            }
        },
        n.value);
}

// Shared evaluator over a scalar type: BiComplex for the full value, Complex
// for a single idempotent component.
template <typename Scalar, typename Env>
class Evaluator {
public:
    Evaluator(Env env, int component) : env_(env), component_(component) {}

    Scalar operator()(const Node& n) const {
        return std::visit([&](const auto& v) { return visit(v); }, n.value);
    }

private:
    Scalar visit(const Number& v) const { return Scalar(v.value); }

    Scalar visit(const ConstantRef& v) const {
        if constexpr (std::is_same_v<Scalar, BiComplex>) {
            switch (v.constant) {
            case Constant::I1: return units::i1;
            case Constant::I2: return units::i2;
            case Constant::J: return units::j;
            case Constant::E1: return units::e1;
            case Constant::E2: return units::e2;
            case Constant::Pi: return BiComplex(std::numbers::pi);
            }
            return {};
        } else {
            const bool first = component_ == 0;
            switch (v.constant) {
            case Constant::I1: return {0.0, 1.0};
            case Constant::I2: return {0.0, first ? -1.0 : 1.0};
            case Constant::J: return first ? 1.0 : -1.0;
            case Constant::E1: return first ? 1.0 : 0.0;
            case Constant::E2: return first ? 0.0 : 1.0;
            case Constant::Pi: return std::numbers::pi;
            }
            return {};
        }
    }

    Scalar visit(const Variable& v) const {
        for (const auto& b : env_) {
            if (b.name == v.name) return b.value;
        }
        throw Error(Errc::UnboundVariable, "variable '" + v.name + "' is not bound");
    }

    Scalar visit(const Negate& v) const { return -(*this)(*v.operand); }

    Scalar visit(const Binary& v) const {
        const Scalar lhs = (*this)(*v.lhs);
        const Scalar rhs = (*this)(*v.rhs);
        switch (v.op) {
        case BinaryOp::Add: return lhs + rhs;
        case BinaryOp::Sub: return lhs - rhs;
        case BinaryOp::Mul: return lhs * rhs;
        case BinaryOp::Div: return lhs * reciprocal(rhs);
        }
        return {};
    }

    Scalar visit(const Power& v) const {
        Scalar base = (*this)(*v.base);
        if (v.exponent < 0) base = reciprocal(base);
        unsigned n = static_cast<unsigned>(v.exponent < 0 ? -static_cast<long>(v.exponent) : v.exponent);
        Scalar result(1.0);
        while (n != 0) {
            if (n & 1U) result = result * base;
            base = base * base;
            n >>= 1U;
        }
        return result;
    }

    Scalar visit(const Call& v) const {
        const Scalar arg = (*this)(*v.argument);
        if constexpr (std::is_same_v<Scalar, BiComplex>) {
            return {apply(v.function, arg.w1), apply(v.function, arg.w2)};
        } else {
            return apply(v.function, arg);
        }
    }

    Scalar visit(const Idempotent& v) const {
        if constexpr (std::is_same_v<Scalar, BiComplex>) {
            return {(*this)(*v.first).w1, (*this)(*v.second).w2};
        } else {
            return (*this)(component_ == 0 ? *v.first : *v.second);
        }
    }

    static Complex apply(Function f, Complex z) {
        switch (f) {
        case Function::Exp: return std::exp(z);
        case Function::Sin: return std::sin(z);
        case Function::Cos: return std::cos(z);
        case Function::Conj: return std::conj(z);
        case Function::Re: return z.real();
        case Function::Im: return z.imag();
        }
        return {};
    }

    static Scalar reciprocal(const Scalar& s) {
        constexpr Tolerance tol{};
        if constexpr (std::is_same_v<Scalar, BiComplex>) {
            if (classify(s, tol) != NumberClass::Unit) {
                throw Error(Errc::NonInvertibleDivisor, "division by zero divisor " + format_idempotent(s));
            }
            return {1.0 / s.w1, 1.0 / s.w2};
        } else {
            if (std::abs(s) <= tol.eps) throw Error(Errc::NonInvertibleDivisor, "division by zero");
            return 1.0 / s;
        }
    }

    Env env_;
    int component_;
};

} // namespace

Expr parse(std::string_view text) { return Expr(Parser(text).parse_all()); }

std::string print(const Expr& e) {
    std::string out;
    if (!e.empty()) print_node(e.root(), 0, out);
    return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.empty() || b.empty()) return a.empty() == b.empty();
    return equal_nodes(a.root(), b.root());
}

std::vector<std::string> free_variables(const Expr& e) {
    std::vector<std::string> out;
    if (!e.empty()) collect_variables(e.root(), out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

BiComplex eval(const Expr& e, std::span<const Binding> env) {
    if (e.empty()) throw Error(Errc::InvalidArgument, "empty expression");
    return Evaluator<BiComplex, std::span<const Binding>>(env, 0)(e.root());
}

BiComplex eval(const Expr& e, const std::map<std::string, BiComplex>& env) {
    std::vector<Binding> bindings;
    bindings.reserve(env.size());
    for (const auto& [name, value] : env) bindings.push_back({name, value});
    return eval(e, bindings);
}

Complex eval_component(const Expr& e, std::span<const ComplexBinding> env, int k) {
    if (e.empty()) throw Error(Errc::InvalidArgument, "empty expression");
    return Evaluator<Complex, std::span<const ComplexBinding>>(env, k)(e.root());
}

} // namespace hypercurve::expr
