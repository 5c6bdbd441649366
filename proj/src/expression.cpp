#include "immersion/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <climits>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "immersion/errors.hpp"

namespace immersion {

namespace {

struct FuncEntry {
    std::string_view name;
    UnaryOp op;
};

constexpr std::array<FuncEntry, 10> kFunctions{{{"sin", UnaryOp::Sin},
                                                {"cos", UnaryOp::Cos},
                                                {"tan", UnaryOp::Tan},
                                                {"exp", UnaryOp::Exp},
                                                {"log", UnaryOp::Log},
                                                {"sqrt", UnaryOp::Sqrt},
                                                {"sinh", UnaryOp::Sinh},
                                                {"cosh", UnaryOp::Cosh},
                                                {"tanh", UnaryOp::Tanh},
                                                {"atan", UnaryOp::Atan}}};

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string_view text;
    double number = 0.0;
};

class Lexer {
public:
    explicit Lexer(std::string_view s) : src_(s) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        if (pos_ >= src_.size()) return {Tok::End, start, {}};
        const char c = src_[pos_];
        auto single = [&](Tok t) {
            ++pos_;
            return Token{t, start, src_.substr(start, 1)};
        };
        switch (c) {
        case '+': return single(Tok::Plus);
        case '-': return single(Tok::Minus);
        case '*': return single(Tok::Star);
        case '/': return single(Tok::Slash);
        case '^': return single(Tok::Caret);
        case '(': return single(Tok::LParen);
        case ')': return single(Tok::RParen);
        default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return number(start);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            return {Tok::Ident, start, src_.substr(start, pos_ - start)};
        }
        throw SyntaxError(start, {"number", "identifier", "operator", "("},
                          "unexpected character '" + std::string(1, c) + "' at offset " +
                              std::to_string(start));
    }

private:
    bool digit_at(std::size_t i) const {
        return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
    }

    Token number(std::size_t start) {
        while (digit_at(pos_)) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (digit_at(pos_)) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t k = pos_ + 1;
            if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
            if (digit_at(k)) {
                pos_ = k;
                while (digit_at(pos_)) ++pos_;
            }
        }
        Token t{Tok::Number, start, src_.substr(start, pos_ - start)};
        // from_chars rejects a leading '+' in the exponent only in older libstdc++; strip it.
        std::string buf(t.text);
        if (auto p = buf.find("e+"); p != std::string::npos) buf.erase(p + 1, 1);
        if (auto p = buf.find("E+"); p != std::string::npos) buf.erase(p + 1, 1);
        auto [ptr, ec] = std::from_chars(buf.data(), buf.data() + buf.size(), t.number);
        if (ec != std::errc() || ptr != buf.data() + buf.size())
            throw SyntaxError(start, {"number"}, "malformed number at offset " + std::to_string(start));
        return t;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

ExprPtr make_constant(double v, std::string name = {}) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Constant;
    n->value = v;
    n->name = std::move(name);
    return n;
}

ExprPtr make_variable(char name) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Variable;
    n->name = std::string(1, name);
    return n;
}

ExprPtr make_unary(UnaryOp op, ExprPtr a) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Unary;
    n->unary = op;
    n->lhs = std::move(a);
    return n;
}

ExprPtr make_binary(BinaryOp op, ExprPtr a, ExprPtr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Binary;
    n->binary = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) { advance(); }

    ExprPtr parse() {
        if (cur_.kind == Tok::End) throw SyntaxError(0, {"expression"}, "empty expression");
        ExprPtr e = expr();
        if (cur_.kind != Tok::End)
            fail({"+", "-", "*", "/", "^", "end of input"});
        return e;
    }

private:
    void advance() { cur_ = lex_.next(); }

    [[noreturn]] void fail(std::vector<std::string> expected) {
        std::string msg = "syntax error at offset " + std::to_string(cur_.offset) + ": expected one of {";
        for (std::size_t i = 0; i < expected.size(); ++i) msg += (i ? ", " : "") + expected[i];
        msg += "}, found ";
        msg += cur_.kind == Tok::End ? std::string("end of input") : "'" + std::string(cur_.text) + "'";
        throw SyntaxError(cur_.offset, std::move(expected), msg);
    }

    ExprPtr expr() {
        ExprPtr lhs = term();
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            const BinaryOp op = cur_.kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
            advance();
            lhs = make_binary(op, lhs, term());
        }
        return lhs;
    }

    ExprPtr term() {
        ExprPtr lhs = factor();
        while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
            const BinaryOp op = cur_.kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
            advance();
            lhs = make_binary(op, lhs, factor());
        }
        return lhs;
    }

    ExprPtr factor() {
        bool negate = false;
        if (cur_.kind == Tok::Minus) {
            negate = true;
            advance();
        }
        ExprPtr b = base(!negate);
        if (cur_.kind == Tok::Caret) {
            advance();
            b = make_binary(BinaryOp::Pow, b, factor());
        }
        return negate ? make_unary(UnaryOp::Neg, b) : b;
    }

    ExprPtr base(bool minus_allowed) {
        switch (cur_.kind) {
        case Tok::Number: {
            const double v = cur_.number;
            advance();
            return make_constant(v);
        }
        case Tok::LParen: {
            advance();
            ExprPtr e = expr();
            if (cur_.kind != Tok::RParen) fail({"+", "-", "*", "/", "^", ")"});
            advance();
            return e;
        }
        case Tok::Ident: return identifier();
        default: {
            std::vector<std::string> expected{"number", "x", "y", "pi", "e", "function", "("};
            if (minus_allowed) expected.insert(expected.begin(), "-");
            fail(std::move(expected));
        }
        }
    }

    ExprPtr identifier() {
        const Token id = cur_;
        advance();
        if (id.text == "x" || id.text == "y") return make_variable(id.text[0]);
        if (id.text == "pi") return make_constant(std::numbers::pi, "pi");
        if (id.text == "e") return make_constant(std::numbers::e, "e");
        for (const auto& f : kFunctions) {
            if (f.name != id.text) continue;
            if (cur_.kind != Tok::LParen) fail({"("});
            advance();
            ExprPtr arg = expr();
            if (cur_.kind != Tok::RParen) fail({"+", "-", "*", "/", "^", ")"});
            advance();
            return make_unary(f.op, arg);
        }
        throw UnknownIdentifier(id.offset, std::string(id.text));
    }

    Lexer lex_;
    Token cur_{Tok::End, 0, {}};
};

// Precedence levels used by the printer.
constexpr int kPrecAdd = 1, kPrecMul = 2, kPrecNeg = 3, kPrecPow = 4, kPrecAtom = 5;

int precedence(const ExprNode& n) {
    switch (n.kind) {
    case NodeKind::Constant:
    case NodeKind::Variable: return kPrecAtom;
    case NodeKind::Unary: return n.unary == UnaryOp::Neg ? kPrecNeg : kPrecAtom;
    case NodeKind::Binary:
        switch (n.binary) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return kPrecAdd;
        case BinaryOp::Mul:
        case BinaryOp::Div: return kPrecMul;
        case BinaryOp::Pow: return kPrecPow;
        }
    }
    return kPrecAtom;
}

std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

void print(const ExprNode& n, std::string& out);

void print_wrapped(const ExprNode& n, bool wrap, std::string& out) {
    if (wrap) out += '(';
    print(n, out);
    if (wrap) out += ')';
}

void print(const ExprNode& n, std::string& out) {
    switch (n.kind) {
    case NodeKind::Constant:
        if (!n.name.empty()) {
            out += n.name;
        } else if (n.value < 0 || std::signbit(n.value)) {
            // Not produced by the parser; keeps hand-built trees printable.
            out += "(" + format_number(n.value) + ")";
        } else {
            out += format_number(n.value);
        }
        return;
    case NodeKind::Variable: out += n.name; return;
    case NodeKind::Unary:
        if (n.unary == UnaryOp::Neg) {
            out += '-';
            const int p = precedence(*n.lhs);
            print_wrapped(*n.lhs, !(p == kPrecAtom || p == kPrecPow), out);
        } else {
            out += unary_name(n.unary);
            out += '(';
            print(*n.lhs, out);
            out += ')';
        }
        return;
    case NodeKind::Binary: {
        const int pl = precedence(*n.lhs), pr = precedence(*n.rhs);
        switch (n.binary) {
        case BinaryOp::Add:
        case BinaryOp::Sub:
            print_wrapped(*n.lhs, pl < kPrecAdd, out);
            out += n.binary == BinaryOp::Add ? " + " : " - ";
            print_wrapped(*n.rhs, pr <= kPrecAdd, out);
            return;
        case BinaryOp::Mul:
        case BinaryOp::Div:
            print_wrapped(*n.lhs, pl < kPrecMul, out);
            out += n.binary == BinaryOp::Mul ? "*" : "/";
            print_wrapped(*n.rhs, pr <= kPrecMul, out);
            return;
        case BinaryOp::Pow:
            print_wrapped(*n.lhs, pl != kPrecAtom, out);
            out += '^';
            print_wrapped(*n.rhs, pr < kPrecNeg, out);
            return;
        }
    }
    }
}

std::optional<int> as_small_integer(const ScalarJet2& j) {
    if (!j.is_constant()) return std::nullopt;
    const double v = j.value;
    if (v != std::floor(v) || std::abs(v) > 1e6) return std::nullopt;
    return static_cast<int>(v);
}

[[noreturn]] void domain_error(const ExprNode& n, const std::string& why) {
    throw DomainError("domain error in '" + to_string(n) + "': " + why);
}

ScalarJet2 eval_node(const ExprNode& n, double x, double y) {
    ScalarJet2 r;
    switch (n.kind) {
    case NodeKind::Constant: return ScalarJet2::constant(n.value);
    case NodeKind::Variable: return n.name == "x" ? ScalarJet2::var_x(x) : ScalarJet2::var_y(y);
    case NodeKind::Unary: {
        const ScalarJet2 a = eval_node(*n.lhs, x, y);
        switch (n.unary) {
        case UnaryOp::Neg: r = -a; break;
        case UnaryOp::Sin: r = sin(a); break;
        case UnaryOp::Cos: r = cos(a); break;
        case UnaryOp::Tan: r = tan(a); break;
        case UnaryOp::Exp: r = exp(a); break;
        case UnaryOp::Log:
            if (!(a.value > 0)) domain_error(n, "argument " + format_number(a.value) + " is not positive");
            r = log(a);
            break;
        case UnaryOp::Sqrt:
            if (!(a.value > 0)) domain_error(n, "argument " + format_number(a.value) + " is not positive");
            r = sqrt(a);
            break;
        case UnaryOp::Sinh: r = sinh(a); break;
        case UnaryOp::Cosh: r = cosh(a); break;
        case UnaryOp::Tanh: r = tanh(a); break;
        case UnaryOp::Atan: r = atan(a); break;
        }
        break;
    }
    case NodeKind::Binary: {
        const ScalarJet2 a = eval_node(*n.lhs, x, y);
        const ScalarJet2 b = eval_node(*n.rhs, x, y);
        switch (n.binary) {
        case BinaryOp::Add: r = a + b; break;
        case BinaryOp::Sub: r = a - b; break;
        case BinaryOp::Mul: r = a * b; break;
        case BinaryOp::Div:
            if (b.value == 0) domain_error(n, "division by zero");
            r = a / b;
            break;
        case BinaryOp::Pow:
            if (auto k = as_small_integer(b)) {
                if (*k < 0 && a.value == 0) domain_error(n, "zero raised to a negative power");
                r = pow_int(a, *k);
            } else {
                if (!(a.value > 0))
                    domain_error(n, "non-integer exponent needs a positive base, got " + format_number(a.value));
                r = pow(a, b);
            }
            break;
        }
        break;
    }
    }
    if (!r.is_finite()) domain_error(n, "non-finite result");
    return r;
}

} // namespace

const char* unary_name(UnaryOp op) {
    switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Tan: return "tan";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Log: return "log";
    case UnaryOp::Sqrt: return "sqrt";
    case UnaryOp::Sinh: return "sinh";
    case UnaryOp::Cosh: return "cosh";
    case UnaryOp::Tanh: return "tanh";
    case UnaryOp::Atan: return "atan";
    }
    return "?";
}

ExprAst ExprAst::constant(double v) { return ExprAst(make_constant(v)); }
ExprAst ExprAst::variable(char name) { return ExprAst(make_variable(name)); }
ExprAst ExprAst::unary(UnaryOp op, const ExprAst& a) { return ExprAst(make_unary(op, a.root_)); }
ExprAst ExprAst::binary(BinaryOp op, const ExprAst& a, const ExprAst& b) {
    return ExprAst(make_binary(op, a.root_, b.root_));
}

bool structurally_equal(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case NodeKind::Constant: return a.value == b.value;
    case NodeKind::Variable: return a.name == b.name;
    case NodeKind::Unary: return a.unary == b.unary && structurally_equal(*a.lhs, *b.lhs);
    case NodeKind::Binary:
        return a.binary == b.binary && structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
    }
    return false;
}

bool operator==(const ExprAst& a, const ExprAst& b) {
    if (a.empty() || b.empty()) return a.empty() == b.empty();
    return structurally_equal(a.root(), b.root());
}

ExprAst parse_expression(std::string_view text) { return ExprAst(Parser(text).parse()); }

std::string to_string(const ExprNode& node) {
    std::string out;
    print(node, out);
    return out;
}

std::string to_string(const ExprAst& ast) { return ast.empty() ? std::string() : to_string(ast.root()); }

ScalarJet2 eval_jet(const ExprAst& ast, double x, double y) { return eval_node(ast.root(), x, y); }

double eval(const ExprAst& ast, double x, double y) { return eval_jet(ast, x, y).value; }

} // namespace immersion
