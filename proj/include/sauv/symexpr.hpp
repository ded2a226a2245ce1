#pragma once

// Canonical noncommutative expressions over two formal unital algebras A and B
// with formal linear maps rho: A->B, psi: B->A, omega: A->C, nu: B->C, phi_t: A->A.

#include "sauv/rational.hpp"
#include "sauv/time_expr.hpp"

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace sauv {

enum class Alg : std::uint8_t { A = 0, B = 1, Scalar = 2 };
enum class MapKind : std::uint8_t { Rho = 0, Psi = 1, Omega = 2, Nu = 3, Phi = 4 };

const char* alg_name(Alg a);
const char* map_name(MapKind k);
Alg map_source(MapKind k);
Alg map_target(MapKind k);
bool map_is_scalar(MapKind k);

struct Factor;
using Word = std::vector<Factor>;

// A word factor: a symbol a_k / b_k, or a map applied to a monic word.
// Map arguments are always a single word with coefficient 1 (linearity pulls out the rest).
struct Factor {
    bool is_symbol = true;
    Alg alg = Alg::A;  // symbol algebra
    int index = 0;     // symbol index
    MapKind kind = MapKind::Rho;
    TimeExpr time;     // phi only
    std::shared_ptr<const Word> arg;

    static Factor symbol(Alg alg, int index);
    static Factor map(MapKind kind, Word arg, TimeExpr time = {});

    Alg target() const { return is_symbol ? alg : map_target(kind); }
    const Word& argument() const;
};

int compare(const Factor& a, const Factor& b);
int compare(const Word& a, const Word& b);

struct Term {
    Rational coef{1};
    Word scalars;  // omega / nu applications, sorted
    Word word;     // empty word is the unit

    // Ordering key excludes the coefficient.
    friend int compare_key(const Term& a, const Term& b);
};

struct RewriteOptions {
    bool unital_rho = true;
    bool unital_phi = true;
    bool unital_psi = false;
    bool merge_phi = true;  // phi_s(phi_t(x)) = phi_{s+t}(x)
    bool invariant_omega = false;  // omega(phi_t(x)) = omega(x)
};

// Immutable normalized expression. Every constructor returns canonical form.
class Expr {
public:
    Expr() : target_(Alg::Scalar) {}

    static Expr zero(Alg target);
    static Expr scalar(const Rational& c);
    static Expr unit(Alg target) { return scalar(1).retarget(target); }
    static Expr symbol(Alg alg, int index);
    static Expr a(int index) { return symbol(Alg::A, index); }
    static Expr b(int index) { return symbol(Alg::B, index); }
    static Expr from_terms(Alg target, std::vector<Term> terms);

    Alg target() const { return target_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_scalar_multiple_of_unit() const;
    std::size_t size() const { return terms_.size(); }

    // Scalar-valued expressions may be retagged as multiples of the unit of A or B.
    Expr retarget(Alg target) const;

    Expr operator+(const Expr& o) const;
    Expr operator-(const Expr& o) const;
    Expr operator-() const;
    Expr operator*(const Expr& o) const;
    Expr operator*(const Rational& r) const;

    friend int compare(const Expr& a, const Expr& b);
    friend bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
    friend bool operator!=(const Expr& a, const Expr& b) { return compare(a, b) != 0; }
    friend bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

private:
    Alg target_;
    std::vector<Term> terms_;
};

Expr apply_map(MapKind kind, const Expr& arg, const TimeExpr& time = {}, const RewriteOptions& opt = {});
inline Expr rho(const Expr& e, const RewriteOptions& o = {}) { return apply_map(MapKind::Rho, e, {}, o); }
inline Expr psi(const Expr& e, const RewriteOptions& o = {}) { return apply_map(MapKind::Psi, e, {}, o); }
inline Expr omega(const Expr& e, const RewriteOptions& o = {}) { return apply_map(MapKind::Omega, e, {}, o); }
inline Expr nu(const Expr& e, const RewriteOptions& o = {}) { return apply_map(MapKind::Nu, e, {}, o); }
inline Expr phi(const TimeExpr& t, const Expr& e, const RewriteOptions& o = {})
{
    return apply_map(MapKind::Phi, e, t, o);
}

// Product of a list of expressions (unit of `target` when empty).
Expr product(const std::vector<Expr>& xs, Alg target);

// The monic word as an expression.
Expr word_expr(const Word& w, Alg target);

bool equal(const Expr& a, const Expr& b);

// Replace every psi(x) by nu(x) * 1.
Expr substitute_scalar_psi(const Expr& e, const RewriteOptions& opt = {});

// Substitute time variables in every phi and renormalize.
Expr substitute_times(const Expr& e, const std::map<int, TimeExpr>& values, const RewriteOptions& opt = {});

// --- parsing and serialization ---

enum class Format { Text, Latex, Json };

struct ParseOptions {
    RewriteOptions rewrite;
    bool allow_macros = false;  // rhoc(x1,...,xk): alternating interval-partition combination of rho
    Alg hint = Alg::Scalar;     // target to use if the parsed expression is scalar-valued
};

Expr parse(const std::string& s, const ParseOptions& opt = {});
std::string emit(const Expr& e, Format f);
std::string emit_text(const Expr& e);
std::string emit_latex(const Expr& e);
std::string emit_json(const Expr& e);
Expr parse_json(const std::string& s, const RewriteOptions& opt = {});

std::ostream& operator<<(std::ostream& os, const Expr& e);

// Raw expression trees; normalize() produces canonical form. Used by the parser and by tests
// that need un-normalized input.
struct Ast {
    enum class Op { Num, Sym, One, Map, Add, Sub, Mul, Neg } op = Op::Num;
    Rational num{0};
    Alg alg = Alg::A;
    int index = 0;
    MapKind kind = MapKind::Rho;
    TimeExpr time;
    std::vector<Ast> kids;
    std::size_t pos = 0;
};

Expr normalize(const Ast& a, const ParseOptions& opt = {});
Ast to_ast(const Expr& e);

}  // namespace sauv
