#include "sauv/errors.hpp"
#include "sauv/symexpr.hpp"

#include <cctype>

namespace sauv {

namespace {

struct Token {
    enum class Kind { Ident, Number, Punct, End } kind = Kind::End;
    std::string text;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        std::size_t i = 0;
        while (i < s_.size()) {
            unsigned char c = static_cast<unsigned char>(s_[i]);
            if (std::isspace(c)) {
                ++i;
                continue;
            }
            Token t;
            t.pos = i;
            if (std::isalpha(c) || c == '_') {
                std::size_t j = i;
                while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
                t.kind = Token::Kind::Ident;
                t.text = s_.substr(i, j - i);
                i = j;
                if (t.text == "phi") {
                    out.push_back(t);
                    // time expression is lexed as one raw token
                    while (i < s_.size() && std::isspace(static_cast<unsigned char>(s_[i]))) ++i;
                    if (i >= s_.size() || s_[i] != '[') throw ParseError(i, "expected '[' after phi");
                    std::size_t close = s_.find(']', i);
                    if (close == std::string::npos) throw ParseError(i, "unterminated time bracket");
                    Token tt;
                    tt.kind = Token::Kind::Punct;
                    tt.text = "[";
                    tt.pos = i;
                    out.push_back(tt);
                    Token body;
                    body.kind = Token::Kind::Ident;
                    body.text = s_.substr(i + 1, close - i - 1);
                    body.pos = i + 1;
                    out.push_back(body);
                    Token ct;
                    ct.kind = Token::Kind::Punct;
                    ct.text = "]";
                    ct.pos = close;
                    out.push_back(ct);
                    i = close + 1;
                    continue;
                }
            } else if (std::isdigit(c)) {
                std::size_t j = i;
                while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
                t.kind = Token::Kind::Number;
                t.text = s_.substr(i, j - i);
                i = j;
            } else if (std::string("+-*/(),").find(static_cast<char>(c)) != std::string::npos) {
                t.kind = Token::Kind::Punct;
                t.text = std::string(1, static_cast<char>(c));
                ++i;
            } else {
                throw ParseError(i, std::string("unexpected character '") + static_cast<char>(c) + "'");
            }
            out.push_back(t);
        }
        Token end;
        end.kind = Token::Kind::End;
        end.pos = s_.size();
        out.push_back(end);
        return out;
    }

private:
    const std::string& s_;
};

Ast make(Ast::Op op, std::size_t pos, std::vector<Ast> kids = {})
{
    Ast a;
    a.op = op;
    a.pos = pos;
    a.kids = std::move(kids);
    return a;
}

class Parser {
public:
    Parser(const std::string& s, const ParseOptions& opt) : toks_(Lexer(s).run()), opt_(opt) {}

    Ast run()
    {
        Ast a = sum();
        if (peek().kind != Token::Kind::End) throw ParseError(peek().pos, "unexpected '" + peek().text + "'");
        return a;
    }

private:
    const Token& peek() const { return toks_[i_]; }
    const Token& next() { return toks_[i_++]; }
    bool punct(const char* p)
    {
        if (peek().kind == Token::Kind::Punct && peek().text == p) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect(const char* p)
    {
        if (!punct(p)) throw ParseError(peek().pos, std::string("expected '") + p + "'");
    }

    Ast sum()
    {
        std::size_t pos = peek().pos;
        Ast acc;
        if (punct("-"))
            acc = make(Ast::Op::Neg, pos, {term()});
        else {
            punct("+");
            acc = term();
        }
        for (;;) {
            std::size_t p = peek().pos;
            if (punct("+"))
                acc = make(Ast::Op::Add, p, {acc, term()});
            else if (punct("-"))
                acc = make(Ast::Op::Sub, p, {acc, term()});
            else
                return acc;
        }
    }

    Ast term()
    {
        Ast acc = factor();
        for (;;) {
            std::size_t p = peek().pos;
            if (!punct("*")) return acc;
            acc = make(Ast::Op::Mul, p, {acc, factor()});
        }
    }

    static bool indexed(const std::string& s, char head, int& idx)
    {
        if (s.size() < 2 || s[0] != head) return false;
        for (std::size_t k = 1; k < s.size(); ++k)
            if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
        idx = std::stoi(s.substr(1));
        return true;
    }

    Ast factor()
    {
        const Token& t = peek();
        std::size_t pos = t.pos;
        if (t.kind == Token::Kind::Number) {
            next();
            std::int64_t n = std::stoll(t.text);
            Ast a = make(Ast::Op::Num, pos);
            if (punct("/")) {
                const Token& d = next();
                if (d.kind != Token::Kind::Number) throw ParseError(d.pos, "expected denominator");
                std::int64_t den = std::stoll(d.text);
                if (den == 0) throw ParseError(d.pos, "zero denominator");
                a.num = make_rational(n, den);
            } else {
                a.num = make_rational(n, 1);
            }
            return a;
        }
        if (t.kind == Token::Kind::Punct && t.text == "(") {
            next();
            Ast a = sum();
            expect(")");
            return a;
        }
        if (t.kind == Token::Kind::Punct && t.text == "-") {
            next();
            return make(Ast::Op::Neg, pos, {factor()});
        }
        if (t.kind != Token::Kind::Ident) throw ParseError(pos, "expected an operand");
        next();
        int idx = 0;
        if (indexed(t.text, 'a', idx)) {
            Ast a = make(Ast::Op::Sym, pos);
            a.alg = Alg::A;
            a.index = idx;
            return a;
        }
        if (indexed(t.text, 'b', idx)) {
            Ast a = make(Ast::Op::Sym, pos);
            a.alg = Alg::B;
            a.index = idx;
            return a;
        }
        if (t.text == "one") return make(Ast::Op::One, pos);
        if (t.text == "phi") {
            expect("[");
            const Token& body = next();
            TimeExpr time;
            try {
                time = TimeExpr::parse(body.text);
            } catch (const ParseError& e) {
                throw ParseError(body.pos + e.position(), std::string("in time expression: ") + e.what());
            }
            expect("]");
            expect("(");
            Ast arg = sum();
            expect(")");
            Ast a = make(Ast::Op::Map, pos, {arg});
            a.kind = MapKind::Phi;
            a.time = time;
            return a;
        }
        static const std::pair<const char*, MapKind> maps[] = {
            {"rho", MapKind::Rho}, {"psi", MapKind::Psi}, {"omega", MapKind::Omega}, {"nu", MapKind::Nu}};
        for (const auto& [name, kind] : maps) {
            if (t.text == name) {
                expect("(");
                Ast arg = sum();
                expect(")");
                Ast a = make(Ast::Op::Map, pos, {arg});
                a.kind = kind;
                return a;
            }
        }
        if (opt_.allow_macros && t.text == "rhoc") return rhoc(pos);
        throw ParseError(pos, "unknown identifier '" + t.text + "'");
    }

    // rhoc(x1,...,xk) = sum over interval partitions pi of (-1)^{|pi|-1} prod_blocks rho(block product)
    Ast rhoc(std::size_t pos)
    {
        expect("(");
        std::vector<Ast> xs{sum()};
        while (punct(",")) xs.push_back(sum());
        expect(")");
        int k = static_cast<int>(xs.size());
        Ast total;
        bool first = true;
        for (int mask = 0; mask < (1 << (k - 1)); ++mask) {
            // bit i set: cut after position i
            Ast prod;
            bool pfirst = true;
            int blocks = 0;
            int start = 0;
            for (int i = 0; i < k; ++i) {
                bool cut = i == k - 1 || (mask >> i & 1);
                if (!cut) continue;
                Ast block = xs[start];
                for (int j = start + 1; j <= i; ++j) block = make(Ast::Op::Mul, pos, {block, xs[j]});
                Ast r = make(Ast::Op::Map, pos, {block});
                r.kind = MapKind::Rho;
                prod = pfirst ? r : make(Ast::Op::Mul, pos, {prod, r});
                pfirst = false;
                ++blocks;
                start = i + 1;
            }
            if (first) {
                total = blocks % 2 == 1 ? prod : make(Ast::Op::Neg, pos, {prod});
                first = false;
            } else {
                total = make(blocks % 2 == 1 ? Ast::Op::Add : Ast::Op::Sub, pos, {total, prod});
            }
        }
        return total;
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
    const ParseOptions& opt_;
};

Expr normalize_rec(const Ast& a, const ParseOptions& opt)
{
    try {
        switch (a.op) {
        case Ast::Op::Num: return Expr::scalar(a.num);
        case Ast::Op::Sym: return Expr::symbol(a.alg, a.index);
        case Ast::Op::One: return Expr::scalar(1);
        case Ast::Op::Map: {
            Expr arg = normalize_rec(a.kids.at(0), opt);
            return apply_map(a.kind, arg, a.time, opt.rewrite);
        }
        case Ast::Op::Add: return normalize_rec(a.kids.at(0), opt) + normalize_rec(a.kids.at(1), opt);
        case Ast::Op::Sub: return normalize_rec(a.kids.at(0), opt) - normalize_rec(a.kids.at(1), opt);
        case Ast::Op::Mul: return normalize_rec(a.kids.at(0), opt) * normalize_rec(a.kids.at(1), opt);
        case Ast::Op::Neg: return -normalize_rec(a.kids.at(0), opt);
        }
    } catch (const TypeError& e) {
        std::string msg = e.what();
        if (msg.rfind("type error at position", 0) == 0) throw;
        if (msg.rfind("type error: ", 0) == 0) msg = msg.substr(12);
        throw TypeError("type error at position " + std::to_string(a.pos) + ": " + msg);
    }
    throw std::logic_error("bad ast");
}

}  // namespace

Expr normalize(const Ast& a, const ParseOptions& opt)
{
    Expr e = normalize_rec(a, opt);
    if (e.target() == Alg::Scalar && opt.hint != Alg::Scalar) return e.retarget(opt.hint);
    return e;
}

Expr parse(const std::string& s, const ParseOptions& opt)
{
    Ast a = Parser(s, opt).run();
    return normalize(a, opt);
}

namespace {

Ast word_ast(const Word& w);

Ast factor_ast(const Factor& f)
{
    if (f.is_symbol) {
        Ast a = make(Ast::Op::Sym, 0);
        a.alg = f.alg;
        a.index = f.index;
        return a;
    }
    Ast a = make(Ast::Op::Map, 0, {word_ast(f.argument())});
    a.kind = f.kind;
    a.time = f.time;
    return a;
}

Ast word_ast(const Word& w)
{
    if (w.empty()) return make(Ast::Op::One, 0);
    Ast acc = factor_ast(w[0]);
    for (std::size_t i = 1; i < w.size(); ++i) acc = make(Ast::Op::Mul, 0, {acc, factor_ast(w[i])});
    return acc;
}

}  // namespace

Ast to_ast(const Expr& e)
{
    if (e.terms().empty()) {
        Ast z = make(Ast::Op::Num, 0);
        return e.target() == Alg::Scalar ? z : make(Ast::Op::Mul, 0, {z, make(Ast::Op::One, 0)});
    }
    Ast acc;
    bool first = true;
    for (const auto& t : e.terms()) {
        Ast c = make(Ast::Op::Num, 0);
        c.num = t.coef;
        Ast term = c;
        for (const auto& s : t.scalars) term = make(Ast::Op::Mul, 0, {term, factor_ast(s)});
        if (!t.word.empty()) term = make(Ast::Op::Mul, 0, {term, word_ast(t.word)});
        acc = first ? term : make(Ast::Op::Add, 0, {acc, term});
        first = false;
    }
    return acc;
}

}  // namespace sauv
