#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cyclic.hpp"
#include "errors.hpp"
#include "euclid.hpp"
#include "numerics.hpp"
#include "render.hpp"

namespace origami::script {

using cyclic::CyclicPolygon;
using cyclic::Pyramid;
using euclid::Line;
using euclid::LineSet;
using euclid::Point;
using numerics::Rational;
using numerics::Real;

using Value = std::variant<Real, Point, Line, LineSet, CyclicPolygon, Pyramid>;

enum class Ty { Num, Point, Line, Lines, Polygon, Pyramid };

inline const char* ty_name(Ty t) {
    switch (t) {
        case Ty::Num: return "num";
        case Ty::Point: return "point";
        case Ty::Line: return "line";
        case Ty::Lines: return "lines";
        case Ty::Polygon: return "polygon";
        case Ty::Pyramid: return "pyramid";
    }
    return "?";
}

inline Ty value_ty(const Value& v) { return static_cast<Ty>(v.index()); }

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------

struct Expr {
    enum class Kind { Num, Ref, Call, Index };
    Kind kind;
    int line = 0, column = 0;
    Ty type = Ty::Num; // annotated by the parser

    Rational value;                           // Num
    std::string name;                         // Ref, Call
    std::vector<std::unique_ptr<Expr>> args;  // Call
    std::unique_ptr<Expr> base;               // Index
    long index = 0;                           // Index
};

struct Statement {
    enum class Kind { Let, Assert, EmitSvg, EmitObj };
    Kind kind;
    int line = 0;
    std::string name;                 // Let target
    std::unique_ptr<Expr> expr;       // Let
    std::unique_ptr<Expr> lhs, rhs;   // Assert
    std::string path;                 // Emit*
};

struct Script {
    std::vector<Statement> statements;
};

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace detail {

struct Token {
    enum class K { Ident, Num, Str, LParen, RParen, LBracket, RBracket, Comma, Equals, Newline, End };
    K kind;
    std::string text;
    int line = 0, col = 0;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }
inline bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

inline std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0, n = text.size();
    auto push = [&](Token::K k, std::string t, int l, int c) {
        out.push_back({k, std::move(t), l, c});
    };
    while (i < n) {
        char c = text[i];
        int l = line, co = col;
        if (c == '\n') {
            push(Token::K::Newline, "\n", l, co);
            ++i;
            ++line;
            col = 1;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            ++col;
            continue;
        }
        if (c == '#') {
            while (i < n && text[i] != '\n') ++i;
            continue; // newline handled next round
        }
        if (ident_start(c)) {
            std::size_t s = i;
            while (i < n && ident_char(text[i])) ++i;
            col += static_cast<int>(i - s);
            push(Token::K::Ident, text.substr(s, i - s), l, co);
            continue;
        }
        if (digit(c) || c == '.' || (c == '-' && i + 1 < n && (digit(text[i + 1]) || text[i + 1] == '.'))) {
            std::size_t s = i;
            if (text[i] == '-') ++i;
            while (i < n && (digit(text[i]) || text[i] == '.')) ++i;
            if (i < n && text[i] == '/' && i + 1 < n && digit(text[i + 1])) {
                ++i;
                while (i < n && digit(text[i])) ++i;
            }
            col += static_cast<int>(i - s);
            push(Token::K::Num, text.substr(s, i - s), l, co);
            continue;
        }
        if (c == '"') {
            std::size_t s = ++i;
            while (i < n && text[i] != '"' && text[i] != '\n') ++i;
            if (i >= n || text[i] != '"')
                throw SyntaxError(l, co, "unterminated string literal");
            std::string body = text.substr(s, i - s);
            ++i;
            col += static_cast<int>(i - s) + 1;
            push(Token::K::Str, std::move(body), l, co);
            continue;
        }
        Token::K k;
        switch (c) {
            case '(': k = Token::K::LParen; break;
            case ')': k = Token::K::RParen; break;
            case '[': k = Token::K::LBracket; break;
            case ']': k = Token::K::RBracket; break;
            case ',': k = Token::K::Comma; break;
            case '=': k = Token::K::Equals; break;
            default:
                throw SyntaxError(l, co, std::string("unexpected character '") + c + "'");
        }
        push(k, std::string(1, c), l, co);
        ++i;
        ++col;
    }
    out.push_back({Token::K::End, "", line, col});
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Parser with static name and type checking. Seeds O, I are predefined
// points; every identifier is bound exactly once before use.
// ---------------------------------------------------------------------------

namespace detail {

struct Signature {
    std::vector<Ty> params;
    Ty result;
};

class Parser {
public:
    explicit Parser(const std::string& text) : toks_(lex(text)) {
        symbols_["O"] = Ty::Point;
        symbols_["I"] = Ty::Point;
    }

    Script run() {
        Script s;
        for (;;) {
            while (at(Token::K::Newline)) ++pos_;
            if (at(Token::K::End)) break;
            s.statements.push_back(statement());
            if (!at(Token::K::Newline) && !at(Token::K::End))
                throw SyntaxError(cur().line, cur().col, "expected end of statement, got '" + cur().text + "'");
        }
        return s;
    }

private:
    const Token& cur() const { return toks_[pos_]; }
    bool at(Token::K k) const { return cur().kind == k; }
    Token take(Token::K k, const char* what) {
        if (!at(k)) throw SyntaxError(cur().line, cur().col,
                                      std::string("expected ") + what + ", got '" + cur().text + "'");
        return toks_[pos_++];
    }

    Statement statement() {
        Token head = take(Token::K::Ident, "a statement keyword (let/assert_near/emit_svg/emit_obj)");
        Statement st;
        st.line = head.line;
        if (head.text == "let") {
            Token name = take(Token::K::Ident, "an identifier");
            if (symbols_.count(name.text))
                throw SyntaxError(name.line, name.col,
                                  "identifier '" + name.text + "' is already bound");
            take(Token::K::Equals, "'='");
            st.kind = Statement::Kind::Let;
            st.name = name.text;
            st.expr = expr();
            symbols_[name.text] = st.expr->type;
            return st;
        }
        if (head.text == "assert_near") {
            st.kind = Statement::Kind::Assert;
            st.lhs = expr();
            st.rhs = expr();
            if (st.lhs->type != Ty::Num || st.rhs->type != Ty::Num)
                throw TypeMismatch("line " + std::to_string(st.line) +
                                   ": assert_near compares numbers, got " +
                                   ty_name(st.lhs->type) + " and " + ty_name(st.rhs->type));
            return st;
        }
        if (head.text == "emit_svg" || head.text == "emit_obj") {
            st.kind = head.text == "emit_svg" ? Statement::Kind::EmitSvg : Statement::Kind::EmitObj;
            st.path = take(Token::K::Str, "a quoted file path").text;
            return st;
        }
        throw SyntaxError(head.line, head.col, "unknown statement '" + head.text + "'");
    }

    std::unique_ptr<Expr> expr() {
        auto e = primary();
        while (at(Token::K::LBracket)) {
            Token br = toks_[pos_++];
            Token idx = take(Token::K::Num, "a nonnegative integer index");
            take(Token::K::RBracket, "']'");
            long iv = 0;
            try {
                iv = std::stol(idx.text);
            } catch (...) {
                iv = -1;
            }
            if (iv < 0 || idx.text.find_first_not_of("0123456789") != std::string::npos)
                throw SyntaxError(idx.line, idx.col, "index must be a nonnegative integer");
            auto ix = std::make_unique<Expr>();
            ix->kind = Expr::Kind::Index;
            ix->line = br.line;
            ix->column = br.col;
            ix->index = iv;
            if (e->type == Ty::Lines)
                ix->type = Ty::Line;
            else if (e->type == Ty::Polygon)
                ix->type = Ty::Point;
            else
                throw TypeMismatch("line " + std::to_string(br.line) + ": cannot index a " +
                                   ty_name(e->type) + "; only lines and polygons are indexable");
            ix->base = std::move(e);
            e = std::move(ix);
        }
        return e;
    }

    std::unique_ptr<Expr> primary() {
        if (at(Token::K::Num)) {
            Token t = toks_[pos_++];
            auto e = std::make_unique<Expr>();
            e->kind = Expr::Kind::Num;
            e->line = t.line;
            e->column = t.col;
            e->type = Ty::Num;
            try {
                e->value = numerics::parse_rational(t.text);
            } catch (const std::invalid_argument& ex) {
                throw SyntaxError(t.line, t.col, ex.what());
            }
            return e;
        }
        Token t = take(Token::K::Ident, "an expression");
        if (at(Token::K::LParen)) {
            ++pos_;
            auto e = std::make_unique<Expr>();
            e->kind = Expr::Kind::Call;
            e->line = t.line;
            e->column = t.col;
            e->name = t.text;
            if (!at(Token::K::RParen)) {
                e->args.push_back(expr());
                while (at(Token::K::Comma)) {
                    ++pos_;
                    e->args.push_back(expr());
                }
            }
            take(Token::K::RParen, "')'");
            e->type = check_call(*e);
            return e;
        }
        auto e = std::make_unique<Expr>();
        e->kind = Expr::Kind::Ref;
        e->line = t.line;
        e->column = t.col;
        e->name = t.text;
        auto it = symbols_.find(t.text);
        if (it == symbols_.end())
            throw UndefinedIdentifier("line " + std::to_string(t.line) + ": '" + t.text +
                                      "' is not defined");
        e->type = it->second;
        return e;
    }

    Ty check_call(const Expr& e) {
        std::vector<Ty> args;
        for (const auto& a : e.args) args.push_back(a->type);
        const std::string& fn = e.name;
        auto pos = "line " + std::to_string(e.line);
        auto arity = [&](std::size_t want) {
            if (args.size() != want)
                throw ArityMismatch(pos + ": " + fn + " takes " + std::to_string(want) +
                                    " argument(s), got " + std::to_string(args.size()));
        };
        auto match = [&](std::initializer_list<Ty> want) {
            std::size_t i = 0;
            for (Ty w : want) {
                if (args[i] != w)
                    throw TypeMismatch(pos + ": " + fn + " argument " + std::to_string(i + 1) +
                                       " must be a " + ty_name(w) + ", got " + ty_name(args[i]));
                ++i;
            }
        };

        if (fn == "O1" || fn == "O2") { arity(2); match({Ty::Point, Ty::Point}); return Ty::Line; }
        if (fn == "O3") { arity(2); match({Ty::Line, Ty::Line}); return Ty::Lines; }
        if (fn == "O4") { arity(2); match({Ty::Point, Ty::Line}); return Ty::Line; }
        if (fn == "O5") { arity(3); match({Ty::Point, Ty::Line, Ty::Point}); return Ty::Lines; }
        if (fn == "O6") { arity(4); match({Ty::Point, Ty::Line, Ty::Point, Ty::Line}); return Ty::Lines; }
        if (fn == "O7") { arity(3); match({Ty::Point, Ty::Line, Ty::Line}); return Ty::Lines; }
        if (fn == "LI") { arity(2); match({Ty::Line, Ty::Line}); return Ty::Point; }
        if (fn == "reflect") { arity(2); match({Ty::Point, Ty::Line}); return Ty::Point; }
        if (fn == "point") { arity(2); match({Ty::Num, Ty::Num}); return Ty::Point; }
        if (fn == "dist") {
            arity(2);
            bool ok = (args[0] == Ty::Point && args[1] == Ty::Point) ||
                      (args[0] == Ty::Point && args[1] == Ty::Line) ||
                      (args[0] == Ty::Line && args[1] == Ty::Point);
            if (!ok)
                throw TypeMismatch(pos + ": dist takes point,point / point,line / line,point; got " +
                                   std::string(ty_name(args[0])) + "," + ty_name(args[1]));
            return Ty::Num;
        }
        if (fn == "rpa") { arity(1); match({Ty::Polygon}); return Ty::Polygon; }
        if (fn == "cpa") { arity(2); match({Ty::Polygon, Ty::Num}); return Ty::Polygon; }
        if (fn == "cyclic") {
            bool anchored = !args.empty() && args[0] == Ty::Point;
            std::size_t first_num = anchored ? 2 : 0;
            if (anchored) {
                if (args.size() < 5)
                    throw ArityMismatch(pos + ": anchored cyclic needs two points and at least 3 side lengths");
                if (args[1] != Ty::Point)
                    throw TypeMismatch(pos + ": cyclic anchor arguments must both be points");
            } else if (args.size() < 3) {
                throw ArityMismatch(pos + ": cyclic needs at least 3 side lengths");
            }
            for (std::size_t i = first_num; i < args.size(); ++i)
                if (args[i] != Ty::Num)
                    throw TypeMismatch(pos + ": cyclic side lengths must be numbers, argument " +
                                       std::to_string(i + 1) + " is a " + ty_name(args[i]));
            return Ty::Polygon;
        }
        if (fn == "regular_ngon") {
            if (args.size() != 1 && args.size() != 3)
                throw ArityMismatch(pos + ": regular_ngon takes (n) or (n, point, point), got " +
                                    std::to_string(args.size()) + " argument(s)");
            if (args[0] != Ty::Num)
                throw TypeMismatch(pos + ": regular_ngon count must be a number");
            if (args.size() == 3 && (args[1] != Ty::Point || args[2] != Ty::Point))
                throw TypeMismatch(pos + ": regular_ngon anchors must be points");
            return Ty::Polygon;
        }
        if (fn == "pyramid") {
            if (args.size() < 4)
                throw ArityMismatch(pos + ": pyramid needs a slant length and at least 3 sides");
            for (std::size_t i = 0; i < args.size(); ++i)
                if (args[i] != Ty::Num)
                    throw TypeMismatch(pos + ": pyramid arguments must be numbers, argument " +
                                       std::to_string(i + 1) + " is a " + ty_name(args[i]));
            return Ty::Pyramid;
        }
        throw SyntaxError(e.line, e.column, "unknown function '" + fn + "'");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::map<std::string, Ty> symbols_;
};

} // namespace detail

inline Script parse(const std::string& text) { return detail::Parser(text).run(); }

// ---------------------------------------------------------------------------
// Canonical printing; print(parse(t)) reparses to the same structure.
// ---------------------------------------------------------------------------

inline std::string print(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Num: return e.value.str();
        case Expr::Kind::Ref: return e.name;
        case Expr::Kind::Index: return print(*e.base) + "[" + std::to_string(e.index) + "]";
        case Expr::Kind::Call: {
            std::string s = e.name + "(";
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                if (i) s += ", ";
                s += print(*e.args[i]);
            }
            return s + ")";
        }
    }
    return "";
}

inline std::string print(const Script& s) {
    std::string out;
    for (const Statement& st : s.statements) {
        switch (st.kind) {
            case Statement::Kind::Let:
                out += "let " + st.name + " = " + print(*st.expr) + "\n";
                break;
            case Statement::Kind::Assert:
                out += "assert_near " + print(*st.lhs) + " " + print(*st.rhs) + "\n";
                break;
            case Statement::Kind::EmitSvg:
                out += "emit_svg \"" + st.path + "\"\n";
                break;
            case Statement::Kind::EmitObj:
                out += "emit_obj \"" + st.path + "\"\n";
                break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Execution state and trace.
// ---------------------------------------------------------------------------

struct TraceEntry {
    std::string op;
    std::vector<std::string> inputs; // binding names or literal spellings
    std::string output;              // user name or synthesized %N
    int line = 0;
    std::string detail;              // operation-specific note, e.g. chosen R and k
};

struct ConstructionState {
    std::vector<std::pair<std::string, Value>> bindings; // insertion order
    std::map<std::string, std::size_t> index;
    std::vector<TraceEntry> trace;

    bool has(const std::string& name) const { return index.count(name) != 0; }
    const Value& get(const std::string& name) const {
        auto it = index.find(name);
        if (it == index.end())
            throw UndefinedIdentifier("'" + name + "' is not bound");
        return bindings[it->second].second;
    }
    void bind(const std::string& name, Value v) {
        index.emplace(name, bindings.size());
        bindings.emplace_back(name, std::move(v));
    }
};

inline ConstructionState seed_state() {
    ConstructionState st;
    st.bind("O", Point{Real(0), Real(0)});
    st.bind("I", Point{Real(1), Real(0)});
    return st;
}

// ---------------------------------------------------------------------------
// Operation dispatch shared by the interpreter and replay.
// ---------------------------------------------------------------------------

namespace detail {

inline const Point& as_point(const Value& v, const char* fn) {
    if (auto* p = std::get_if<Point>(&v)) return *p;
    throw TypeMismatch(std::string(fn) + ": expected a point, got " + ty_name(value_ty(v)));
}
inline const Line& as_line(const Value& v, const char* fn) {
    if (auto* p = std::get_if<Line>(&v)) return *p;
    throw TypeMismatch(std::string(fn) + ": expected a line, got " + ty_name(value_ty(v)));
}
inline const Real& as_num(const Value& v, const char* fn) {
    if (auto* p = std::get_if<Real>(&v)) return *p;
    throw TypeMismatch(std::string(fn) + ": expected a number, got " + ty_name(value_ty(v)));
}
inline const CyclicPolygon& as_poly(const Value& v, const char* fn) {
    if (auto* p = std::get_if<CyclicPolygon>(&v)) return *p;
    throw TypeMismatch(std::string(fn) + ": expected a polygon, got " + ty_name(value_ty(v)));
}

inline long as_integer(const Real& r, const char* fn) {
    long v = r.convert_to<long>();
    if (Real(v) != r)
        throw TypeMismatch(std::string(fn) + ": expected an integer, got " +
                           numerics::format_real(r));
    return v;
}

inline void want_args(const std::string& op, const std::vector<Value>& args, std::size_t n) {
    if (args.size() != n)
        throw ArityMismatch(op + " takes " + std::to_string(n) + " argument(s), got " +
                            std::to_string(args.size()));
}

inline Value apply_op(const std::string& op, const std::vector<Value>& args, std::string* detail) {
    const char* fn = op.c_str();
    if (op == "num" || op == "ref") {
        want_args(op, args, 1);
        return args[0];
    }
    if (op == "point") {
        want_args(op, args, 2);
        return Point{as_num(args[0], fn), as_num(args[1], fn)};
    }
    if (op == "dist") {
        want_args(op, args, 2);
        if (std::holds_alternative<Point>(args[0]) && std::holds_alternative<Point>(args[1]))
            return euclid::dist(as_point(args[0], fn), as_point(args[1], fn));
        if (std::holds_alternative<Point>(args[0]))
            return abs(euclid::line_eval(as_line(args[1], fn), as_point(args[0], fn)));
        return abs(euclid::line_eval(as_line(args[0], fn), as_point(args[1], fn)));
    }
    if (op == "O1") { want_args(op, args, 2); return euclid::O1(as_point(args[0], fn), as_point(args[1], fn)); }
    if (op == "O2") { want_args(op, args, 2); return euclid::O2(as_point(args[0], fn), as_point(args[1], fn)); }
    if (op == "O3") { want_args(op, args, 2); return euclid::O3(as_line(args[0], fn), as_line(args[1], fn)); }
    if (op == "O4") { want_args(op, args, 2); return euclid::O4(as_point(args[0], fn), as_line(args[1], fn)); }
    if (op == "O5") {
        want_args(op, args, 3);
        return euclid::O5(as_point(args[0], fn), as_line(args[1], fn), as_point(args[2], fn));
    }
    if (op == "O6") {
        want_args(op, args, 4);
        return euclid::O6(as_point(args[0], fn), as_line(args[1], fn), as_point(args[2], fn),
                          as_line(args[3], fn));
    }
    if (op == "O7") {
        want_args(op, args, 3);
        return euclid::O7(as_point(args[0], fn), as_line(args[1], fn), as_line(args[2], fn));
    }
    if (op == "LI") { want_args(op, args, 2); return euclid::LI(as_line(args[0], fn), as_line(args[1], fn)); }
    if (op == "reflect") {
        want_args(op, args, 2);
        return euclid::reflect_point(as_point(args[0], fn), as_line(args[1], fn));
    }
    if (op == "index") {
        want_args(op, args, 2);
        long i = as_integer(as_num(args[1], fn), fn);
        if (const LineSet* ls = std::get_if<LineSet>(&args[0]))
            return ls->at(static_cast<std::size_t>(i));
        const CyclicPolygon& P = as_poly(args[0], fn);
        if (i < 0 || static_cast<std::size_t>(i) >= P.size())
            throw IndexOutOfRange("index " + std::to_string(i) + " out of range; polygon has " +
                                  std::to_string(P.size()) + " vertices");
        return P.vertices[static_cast<std::size_t>(i)];
    }
    if (op == "rpa") { want_args(op, args, 1); return cyclic::rpa(as_poly(args[0], fn)).polygon; }
    if (op == "cpa") {
        want_args(op, args, 2);
        long k = as_integer(as_num(args[1], fn), fn);
        if (k != 1 && k != 2) throw TypeMismatch("cpa: k must be 1 or 2");
        return cyclic::cpa(as_poly(args[0], fn), static_cast<unsigned>(k)).polygon;
    }
    if (op == "cyclic") {
        bool anchored = !args.empty() && std::holds_alternative<Point>(args[0]);
        std::size_t first = anchored ? 2 : 0;
        if (args.size() < first + 3)
            throw ArityMismatch("cyclic needs at least 3 side lengths");
        std::vector<Real> sides;
        for (std::size_t i = first; i < args.size(); ++i) sides.push_back(as_num(args[i], fn));
        Point A1 = anchored ? as_point(args[0], fn) : Point{Real(0), Real(0)};
        Point A2 = anchored ? as_point(args[1], fn) : Point{sides[0], Real(0)};
        cyclic::CyclicConstruction c =
            cyclic::construct_cyclic(A1, A2, cyclic::SideLengths(std::move(sides)));
        if (detail) *detail = "R=" + c.R.str() + " k=" + std::to_string(c.k);
        return c.polygon;
    }
    if (op == "regular_ngon") {
        if (args.size() != 1 && args.size() != 3)
            throw ArityMismatch("regular_ngon takes (n) or (n, point, point)");
        long n = as_integer(as_num(args[0], fn), fn);
        if (n < 3) throw TooFewSides("regular_ngon needs n >= 3");
        Point A1 = args.size() == 3 ? as_point(args[1], fn) : Point{Real(0), Real(0)};
        Point A2 = args.size() == 3 ? as_point(args[2], fn) : Point{Real(1), Real(0)};
        return cyclic::regular_ngon(static_cast<unsigned>(n), A1, A2).polygon;
    }
    if (op == "pyramid") {
        if (args.size() < 4)
            throw ArityMismatch("pyramid needs a slant length and at least 3 sides");
        Real R = as_num(args[0], fn);
        std::vector<Real> sides;
        for (std::size_t i = 1; i < args.size(); ++i) sides.push_back(as_num(args[i], fn));
        return cyclic::pyramid(R, cyclic::SideLengths(std::move(sides)));
    }
    throw TypeMismatch("unknown operation '" + op + "'");
}

inline bool literal_like(const std::string& s) {
    return !s.empty() && (detail::digit(s[0]) || s[0] == '-' || s[0] == '.');
}

} // namespace detail

// ---------------------------------------------------------------------------
// Interpreter.
// ---------------------------------------------------------------------------

namespace detail {

class Executor {
public:
    ConstructionState run(const Script& s) {
        st_ = seed_state();
        for (const Statement& stmt : s.statements) {
            try {
                exec(stmt);
            } catch (const ScriptRuntimeError&) {
                throw;
            } catch (const Error& e) {
                throw ScriptRuntimeError(e.name(), stmt.line, e.raw());
            } catch (const std::exception& e) {
                throw ScriptRuntimeError("RuntimeError", stmt.line, e.what());
            }
        }
        return std::move(st_);
    }

private:
    void exec(const Statement& stmt) {
        switch (stmt.kind) {
            case Statement::Kind::Let: {
                auto [handle, v] = eval(*stmt.expr, &stmt.name);
                (void)handle;
                st_.bind(stmt.name, std::move(v));
                break;
            }
            case Statement::Kind::Assert: {
                Real a = std::get<Real>(eval(*stmt.lhs, nullptr).second);
                Real b = std::get<Real>(eval(*stmt.rhs, nullptr).second);
                auto tol = numerics::default_tolerance();
                if (!numerics::real_near(a, b, tol))
                    throw AssertionFailed("assert_near failed: left=" + numerics::format_real(a) +
                                          " right=" + numerics::format_real(b) + " |diff|=" +
                                          numerics::format_real(abs(a - b)) + " tolerance=" +
                                          numerics::format_real(tol.eps_abs));
                break;
            }
            case Statement::Kind::EmitSvg:
                emit_svg(st_, stmt.path);
                break;
            case Statement::Kind::EmitObj:
                emit_obj(st_, stmt.path);
                break;
        }
    }

    std::pair<std::string, Value> eval(const Expr& e, const std::string* out_name) {
        switch (e.kind) {
            case Expr::Kind::Num: {
                Value v = numerics::to_real(e.value);
                std::string spelled = e.value.str();
                if (out_name) {
                    st_.trace.push_back({"num", {spelled}, *out_name, e.line, ""});
                    return {*out_name, std::move(v)};
                }
                return {spelled, std::move(v)};
            }
            case Expr::Kind::Ref: {
                Value v = st_.get(e.name);
                if (out_name) {
                    st_.trace.push_back({"ref", {e.name}, *out_name, e.line, ""});
                    return {*out_name, std::move(v)};
                }
                return {e.name, std::move(v)};
            }
            case Expr::Kind::Index: {
                auto [bh, bv] = eval(*e.base, nullptr);
                std::vector<Value> args;
                args.push_back(std::move(bv));
                args.emplace_back(Real(e.index));
                Value r = apply_op("index", args, nullptr);
                std::string h = out_name ? *out_name : synth();
                st_.trace.push_back({"index", {bh, std::to_string(e.index)}, h, e.line, ""});
                return {h, std::move(r)};
            }
            case Expr::Kind::Call: {
                std::vector<std::string> handles;
                std::vector<Value> args;
                for (const auto& a : e.args) {
                    auto [h, v] = eval(*a, nullptr);
                    handles.push_back(std::move(h));
                    args.push_back(std::move(v));
                }
                std::string detail_note;
                Value r = apply_op(e.name, args, &detail_note);
                std::string h = out_name ? *out_name : synth();
                st_.trace.push_back({e.name, std::move(handles), h, e.line, detail_note});
                return {h, std::move(r)};
            }
        }
        throw std::logic_error("unreachable expression kind");
    }

    std::string synth() { return "%" + std::to_string(++synth_); }

public:
    // Renders every drawable binding, in insertion order.
    static void emit_svg(const ConstructionState& st, const std::string& path) {
        render::SvgScene scene;
        for (const auto& [name, v] : st.bindings) {
            if (const Point* p = std::get_if<Point>(&v))
                scene.add_point(*p, name);
            else if (const Line* l = std::get_if<Line>(&v))
                scene.add_line(*l, name);
            else if (const LineSet* ls = std::get_if<LineSet>(&v)) {
                for (std::size_t i = 0; i < ls->size(); ++i)
                    scene.add_line((*ls)[i], name + "[" + std::to_string(i) + "]");
            } else if (const CyclicPolygon* poly = std::get_if<CyclicPolygon>(&v)) {
                scene.add_polygon(poly->vertices, name);
            }
        }
        scene.write(path);
    }

    static void emit_obj(const ConstructionState& st, const std::string& path) {
        render::ObjMesh mesh;
        bool any = false;
        for (const auto& [name, v] : st.bindings)
            if (const Pyramid* pyr = std::get_if<Pyramid>(&v)) {
                mesh.add_pyramid(*pyr);
                any = true;
            }
        if (!any) throw TypeMismatch("emit_obj: no pyramid has been bound");
        mesh.write(path);
    }

private:
    ConstructionState st_;
    int synth_ = 0;
};

} // namespace detail

inline ConstructionState execute(const Script& s) { return detail::Executor().run(s); }

// ---------------------------------------------------------------------------
// Replay: re-run the recorded trace against fresh seeds. Dangling names,
// unknown operations and entries that no longer evaluate are TraceCorrupt.
// ---------------------------------------------------------------------------

inline ConstructionState replay(const ConstructionState& original) {
    ConstructionState fresh = seed_state();
    std::map<std::string, Value> env;
    for (const auto& [name, v] : fresh.bindings) env.emplace(name, v);

    for (const TraceEntry& entry : original.trace) {
        std::vector<Value> args;
        for (const std::string& in : entry.inputs) {
            if (detail::literal_like(in)) {
                try {
                    args.emplace_back(numerics::to_real(numerics::parse_rational(in)));
                } catch (const std::invalid_argument&) {
                    throw TraceCorrupt("bad literal '" + in + "' in trace");
                }
            } else {
                auto it = env.find(in);
                if (it == env.end())
                    throw TraceCorrupt("dangling reference '" + in + "' in trace");
                args.push_back(it->second);
            }
        }
        Value v = [&] {
            try {
                return detail::apply_op(entry.op, args, nullptr);
            } catch (const TraceCorrupt&) {
                throw;
            } catch (const std::exception& e) {
                throw TraceCorrupt("trace entry '" + entry.op + "' failed to replay: " + e.what());
            }
        }();
        if (env.count(entry.output))
            throw TraceCorrupt("trace rebinds '" + entry.output + "'");
        env.emplace(entry.output, v);
        if (!entry.output.empty() && entry.output[0] != '%') fresh.bind(entry.output, std::move(v));
    }
    fresh.trace = original.trace;
    return fresh;
}

// Tolerant value comparison, used to check replay determinism.
inline bool values_near(const Value& a, const Value& b,
                        const numerics::Tolerance& tol = numerics::default_tolerance()) {
    if (a.index() != b.index()) return false;
    if (const Real* x = std::get_if<Real>(&a)) return numerics::real_near(*x, std::get<Real>(b), tol);
    if (const Point* p = std::get_if<Point>(&a)) return euclid::points_equal(*p, std::get<Point>(b), tol);
    if (const Line* l = std::get_if<Line>(&a)) return euclid::lines_equal(*l, std::get<Line>(b), tol);
    if (const LineSet* ls = std::get_if<LineSet>(&a)) {
        const LineSet& ms = std::get<LineSet>(b);
        if (ls->size() != ms.size()) return false;
        for (std::size_t i = 0; i < ls->size(); ++i)
            if (!euclid::lines_equal((*ls)[i], ms[i], tol)) return false;
        return true;
    }
    if (const CyclicPolygon* p = std::get_if<CyclicPolygon>(&a)) {
        const CyclicPolygon& q = std::get<CyclicPolygon>(b);
        if (p->size() != q.size()) return false;
        for (std::size_t i = 0; i < p->size(); ++i)
            if (!euclid::points_equal(p->vertices[i], q.vertices[i], tol)) return false;
        return euclid::points_equal(p->center, q.center, tol) &&
               numerics::real_near(p->radius, q.radius, tol);
    }
    const Pyramid& x = std::get<Pyramid>(a);
    const Pyramid& y = std::get<Pyramid>(b);
    if (x.base.size() != y.base.size()) return false;
    auto near3 = [&](const cyclic::Point3& u, const cyclic::Point3& w) {
        return numerics::real_near(u.x, w.x, tol) && numerics::real_near(u.y, w.y, tol) &&
               numerics::real_near(u.z, w.z, tol);
    };
    for (std::size_t i = 0; i < x.base.size(); ++i)
        if (!near3(x.base[i], y.base[i])) return false;
    return near3(x.apex, y.apex) && numerics::real_near(x.height, y.height, tol);
}

inline bool bindings_match(const ConstructionState& a, const ConstructionState& b,
                           const numerics::Tolerance& tol = numerics::default_tolerance()) {
    if (a.bindings.size() != b.bindings.size()) return false;
    for (std::size_t i = 0; i < a.bindings.size(); ++i) {
        if (a.bindings[i].first != b.bindings[i].first) return false;
        if (!values_near(a.bindings[i].second, b.bindings[i].second, tol)) return false;
    }
    return true;
}

} // namespace origami::script
