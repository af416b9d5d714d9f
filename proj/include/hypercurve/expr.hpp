#pragma once

/**
 * @file expr.hpp
 * @brief A small expression language for component functions, constants,
 * integrands, primitives and parametric paths.
 *
 * Grammar (whitespace insensitive):
 *
 *   expr   := term (('+' | '-') term)*
 *   term   := unary (('*' | '/') unary)*
 *   unary  := ('-' | '+') unary | factor
 *   factor := atom ('^' integer)?
 *   atom   := number | const | ident | '(' expr ')' | func '(' expr ')'
 *           | '[' expr '|' expr ']'
 *
 * const is one of i1, i2, j, e1, e2, pi; func is one of exp, sin, cos, conj,
 * re, im. Powers are not associative: "a^2^3" is rejected. "[a | b]" is the
 * idempotent form a*e1 + b*e2. Numbers accept a decimal exponent, so "2e1"
 * is twenty; write "2*e1" for the idempotent multiple.
 *
 * Evaluation is product-type: every operation, including the transcendental
 * functions, acts on the two idempotent components independently.
 */

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hypercurve/error.hpp"
#include "hypercurve/numbers.hpp"

namespace hypercurve::expr {

enum class Constant { I1, I2, J, E1, E2, Pi };
enum class BinaryOp { Add, Sub, Mul, Div };
enum class Function { Exp, Sin, Cos, Conj, Re, Im };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number { double value; };
struct ConstantRef { Constant constant; };
struct Variable { std::string name; };
struct Negate { NodePtr operand; };
struct Binary { BinaryOp op; NodePtr lhs; NodePtr rhs; };
struct Power { NodePtr base; int exponent; };
struct Call { Function function; NodePtr argument; };
struct Idempotent { NodePtr first; NodePtr second; };

struct Node {
    std::variant<Number, ConstantRef, Variable, Negate, Binary, Power, Call, Idempotent> value;
};

/// Immutable parsed expression; cheap to copy and share across threads.
class Expr {
public:
    Expr() = default;
    explicit Expr(NodePtr root) : root_(std::move(root)) {}

    const Node& root() const { return *root_; }
    bool empty() const noexcept { return root_ == nullptr; }

private:
    NodePtr root_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t position, std::string expected, std::string found);

    std::size_t position() const noexcept { return position_; }
    const std::string& expected() const noexcept { return expected_; }
    const std::string& found() const noexcept { return found_; }

private:
    std::size_t position_;
    std::string expected_;
    std::string found_;
};

Expr parse(std::string_view text);

/// Canonical text with minimal parentheses; parse(print(e)) is structurally e.
std::string print(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

/// Sorted, deduplicated names of the free variables.
std::vector<std::string> free_variables(const Expr& e);

struct Binding {
    std::string_view name;
    BiComplex value;
};

struct ComplexBinding {
    std::string_view name;
    Complex value;
};

/// Bicomplex evaluation. Throws Errc::UnboundVariable, Errc::NonInvertibleDivisor.
BiComplex eval(const Expr& e, std::span<const Binding> env = {});
BiComplex eval(const Expr& e, const std::map<std::string, BiComplex>& env);

/// Evaluates idempotent component k (0 or 1) over complex scalars: every
/// constant is replaced by its k-th idempotent coefficient. For product-type
/// expressions this equals eval(e, env).component(k) whenever the bound
/// values have the same component k.
Complex eval_component(const Expr& e, std::span<const ComplexBinding> env, int k);

} // namespace hypercurve::expr
