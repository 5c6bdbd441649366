#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "immersion/jet.hpp"

namespace immersion {

// Grammar (whitespace-insensitive):
//   expr    = term { ("+"|"-") term } ;
//   term    = factor { ("*"|"/") factor } ;
//   factor  = ["-"] base [ "^" factor ] ;
//   base    = number | "x" | "y" | "pi" | "e" | func "(" expr ")" | "(" expr ")" ;
//   func    = "sin"|"cos"|"tan"|"exp"|"log"|"sqrt"|"sinh"|"cosh"|"tanh"|"atan" ;
//
// "-a^b" parses as -(a^b); "^" is right associative.

enum class NodeKind { Constant, Variable, Unary, Binary };
enum class UnaryOp { Neg, Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh, Atan };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    NodeKind kind = NodeKind::Constant;
    double value = 0.0;     // Constant
    std::string name;       // Constant: "pi"/"e" or empty; Variable: "x"/"y"
    UnaryOp unary = UnaryOp::Neg;
    BinaryOp binary = BinaryOp::Add;
    ExprPtr lhs;            // Unary operand or Binary left
    ExprPtr rhs;            // Binary right
};

/// Immutable parsed expression in x and y.
class ExprAst {
public:
    ExprAst() = default;
    explicit ExprAst(ExprPtr root) : root_(std::move(root)) {}

    const ExprNode& root() const { return *root_; }
    const ExprPtr& root_ptr() const { return root_; }
    bool empty() const { return !root_; }

    static ExprAst constant(double v);
    static ExprAst variable(char name);
    static ExprAst unary(UnaryOp op, const ExprAst& a);
    static ExprAst binary(BinaryOp op, const ExprAst& a, const ExprAst& b);

    friend bool operator==(const ExprAst& a, const ExprAst& b);

private:
    ExprPtr root_;
};

bool structurally_equal(const ExprNode& a, const ExprNode& b);

/// Throws SyntaxError (with byte offset and expected tokens) or UnknownIdentifier.
ExprAst parse_expression(std::string_view text);

/// Minimal-parenthesis rendering; parse_expression(to_string(ast)) == ast.
std::string to_string(const ExprAst& ast);
std::string to_string(const ExprNode& node);

/// Value, gradient and Hessian at (x, y). Throws DomainError naming the node that left its domain.
ScalarJet2 eval_jet(const ExprAst& ast, double x, double y);

/// Value only.
double eval(const ExprAst& ast, double x, double y);

const char* unary_name(UnaryOp op);

} // namespace immersion
