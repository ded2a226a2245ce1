#include "sauv/symexpr.hpp"

#include "sauv/errors.hpp"

#include <algorithm>
#include <ostream>

namespace sauv {

const char* alg_name(Alg a)
{
    switch (a) {
    case Alg::A: return "A";
    case Alg::B: return "B";
    case Alg::Scalar: return "scalar";
    }
    return "?";
}

const char* map_name(MapKind k)
{
    switch (k) {
    case MapKind::Rho: return "rho";
    case MapKind::Psi: return "psi";
    case MapKind::Omega: return "omega";
    case MapKind::Nu: return "nu";
    case MapKind::Phi: return "phi";
    }
    return "?";
}

Alg map_source(MapKind k)
{
    switch (k) {
    case MapKind::Rho:
    case MapKind::Omega:
    case MapKind::Phi: return Alg::A;
    case MapKind::Psi:
    case MapKind::Nu: return Alg::B;
    }
    return Alg::A;
}

Alg map_target(MapKind k)
{
    switch (k) {
    case MapKind::Rho: return Alg::B;
    case MapKind::Psi:
    case MapKind::Phi: return Alg::A;
    case MapKind::Omega:
    case MapKind::Nu: return Alg::Scalar;
    }
    return Alg::A;
}

bool map_is_scalar(MapKind k) { return k == MapKind::Omega || k == MapKind::Nu; }

Factor Factor::symbol(Alg alg, int index)
{
    if (alg == Alg::Scalar) throw TypeError("symbols live in A or B");
    if (index < 0) throw std::invalid_argument("symbol index must be >= 0");
    Factor f;
    f.is_symbol = true;
    f.alg = alg;
    f.index = index;
    return f;
}

Factor Factor::map(MapKind kind, Word arg, TimeExpr time)
{
    Factor f;
    f.is_symbol = false;
    f.kind = kind;
    if (kind == MapKind::Phi) f.time = std::move(time);
    f.arg = std::make_shared<const Word>(std::move(arg));
    return f;
}

const Word& Factor::argument() const
{
    static const Word empty;
    return arg ? *arg : empty;
}

int compare(const Factor& a, const Factor& b)
{
    if (a.is_symbol != b.is_symbol) return a.is_symbol ? -1 : 1;
    if (a.is_symbol) {
        if (a.alg != b.alg) return a.alg < b.alg ? -1 : 1;
        if (a.index != b.index) return a.index < b.index ? -1 : 1;
        return 0;
    }
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    if (int c = compare(a.time, b.time)) return c;
    if (a.arg == b.arg) return 0;
    return compare(a.argument(), b.argument());
}

int compare(const Word& a, const Word& b)
{
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (int c = compare(a[i], b[i])) return c;
    return 0;
}

int compare_key(const Term& a, const Term& b)
{
    if (int c = compare(a.word, b.word)) return c;
    return compare(a.scalars, b.scalars);
}

namespace {

void sort_scalars(Word& s)
{
    std::sort(s.begin(), s.end(), [](const Factor& x, const Factor& y) { return compare(x, y) < 0; });
}

std::vector<Term> canonical(std::vector<Term> terms)
{
    std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return compare_key(x, y) < 0; });
    std::vector<Term> out;
    out.reserve(terms.size());
    for (auto& t : terms) {
        if (!out.empty() && compare_key(out.back(), t) == 0)
            out.back().coef += t.coef;
        else
            out.push_back(std::move(t));
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.coef == 0; }), out.end());
    return out;
}

Term multiply(const Term& x, const Term& y)
{
    Term t;
    t.coef = x.coef * y.coef;
    t.scalars.reserve(x.scalars.size() + y.scalars.size());
    std::merge(x.scalars.begin(), x.scalars.end(), y.scalars.begin(), y.scalars.end(), std::back_inserter(t.scalars),
               [](const Factor& p, const Factor& q) { return compare(p, q) < 0; });
    t.word.reserve(x.word.size() + y.word.size());
    t.word.insert(t.word.end(), x.word.begin(), x.word.end());
    t.word.insert(t.word.end(), y.word.begin(), y.word.end());
    return t;
}

Alg combine_targets(Alg a, Alg b, const char* what)
{
    if (a == b) return a;
    if (a == Alg::Scalar) return b;
    if (b == Alg::Scalar) return a;
    throw TypeError(std::string("type error: ") + what + " mixes A-valued and B-valued expressions");
}

}  // namespace

Expr Expr::zero(Alg target)
{
    Expr e;
    e.target_ = target;
    return e;
}

Expr Expr::scalar(const Rational& c)
{
    Expr e;
    e.target_ = Alg::Scalar;
    if (c != 0) {
        Term t;
        t.coef = c;
        e.terms_.push_back(std::move(t));
    }
    return e;
}

Expr Expr::symbol(Alg alg, int index)
{
    Expr e;
    e.target_ = alg;
    Term t;
    t.word.push_back(Factor::symbol(alg, index));
    e.terms_.push_back(std::move(t));
    return e;
}

Expr Expr::from_terms(Alg target, std::vector<Term> terms)
{
    for (auto& t : terms) {
        sort_scalars(t.scalars);
        if (target == Alg::Scalar && !t.word.empty()) throw TypeError("scalar expression with nonempty word");
    }
    Expr e;
    e.target_ = target;
    e.terms_ = canonical(std::move(terms));
    return e;
}

bool Expr::is_scalar_multiple_of_unit() const
{
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.word.empty(); });
}

Expr Expr::retarget(Alg target) const
{
    if (target == target_) return *this;
    if (target_ != Alg::Scalar)
        throw TypeError(std::string("type error: cannot use a ") + alg_name(target_) + "-valued expression as " +
                        alg_name(target) + "-valued");
    Expr e = *this;
    e.target_ = target;
    return e;
}

Expr Expr::operator+(const Expr& o) const
{
    Alg t = combine_targets(target_, o.target_, "sum");
    std::vector<Term> all = terms_;
    all.insert(all.end(), o.terms_.begin(), o.terms_.end());
    Expr e;
    e.target_ = t;
    e.terms_ = canonical(std::move(all));
    return e;
}

Expr Expr::operator-() const
{
    Expr e = *this;
    for (auto& t : e.terms_) t.coef = -t.coef;
    return e;
}

Expr Expr::operator-(const Expr& o) const { return *this + (-o); }

Expr Expr::operator*(const Expr& o) const
{
    Alg t = combine_targets(target_, o.target_, "product");
    std::vector<Term> all;
    all.reserve(terms_.size() * o.terms_.size());
    for (const auto& x : terms_)
        for (const auto& y : o.terms_) all.push_back(multiply(x, y));
    Expr e;
    e.target_ = t;
    e.terms_ = canonical(std::move(all));
    return e;
}

Expr Expr::operator*(const Rational& r) const
{
    if (r == 0) return zero(target_);
    Expr e = *this;
    for (auto& t : e.terms_) t.coef *= r;
    return e;
}

int compare(const Expr& a, const Expr& b)
{
    if (a.target_ != b.target_) return a.target_ < b.target_ ? -1 : 1;
    if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        if (int c = compare_key(a.terms_[i], b.terms_[i])) return c;
        if (int c = compare(a.terms_[i].coef, b.terms_[i].coef)) return c;
    }
    return 0;
}

bool equal(const Expr& a, const Expr& b) { return a == b; }

Expr apply_map(MapKind kind, const Expr& arg_in, const TimeExpr& time, const RewriteOptions& opt)
{
    Alg src = map_source(kind);
    if (arg_in.target() != src && arg_in.target() != Alg::Scalar)
        throw TypeError(std::string("type error: ") + map_name(kind) + " applied to a " + alg_name(arg_in.target()) +
                        "-valued argument (expects " + alg_name(src) + ")");
    if (kind == MapKind::Phi) {
        if (time.is_constant() && time.constant() < 0)
            throw TypeError("type error: phi applied with negative time " + time.to_string());
        if (time.is_zero()) return arg_in.retarget(Alg::A);
    }
    bool unital = (kind == MapKind::Rho && opt.unital_rho) || (kind == MapKind::Phi && opt.unital_phi) ||
                  (kind == MapKind::Psi && opt.unital_psi);
    std::vector<Term> out;
    out.reserve(arg_in.terms().size());
    for (const auto& t : arg_in.terms()) {
        Term r;
        r.coef = t.coef;
        r.scalars = t.scalars;
        if (map_is_scalar(kind)) {
            const Word* w = &t.word;
            if (kind == MapKind::Omega && opt.invariant_omega)
                while (w->size() == 1 && !(*w)[0].is_symbol && (*w)[0].kind == MapKind::Phi) w = &(*w)[0].argument();
            if (!w->empty()) r.scalars.push_back(Factor::map(kind, *w));
        } else if (t.word.empty() && unital) {
            // unit maps to unit
        } else if (kind == MapKind::Phi && opt.merge_phi && t.word.size() == 1 && !t.word[0].is_symbol &&
                   t.word[0].kind == MapKind::Phi) {
            TimeExpr total = time + t.word[0].time;
            if (total.is_zero())
                r.word = t.word[0].argument();
            else
                r.word.push_back(Factor::map(MapKind::Phi, t.word[0].argument(), total));
        } else {
            r.word.push_back(Factor::map(kind, t.word, time));
        }
        out.push_back(std::move(r));
    }
    return Expr::from_terms(map_target(kind), std::move(out));
}

Expr product(const std::vector<Expr>& xs, Alg target)
{
    Expr acc = Expr::unit(target);
    for (const auto& x : xs) acc = acc * x;
    return acc.target() == Alg::Scalar ? acc.retarget(target) : acc;
}

Expr word_expr(const Word& w, Alg target)
{
    Term t;
    t.word = w;
    return Expr::from_terms(target, {t});
}

namespace {

Expr substitute_word(const Word& w, Alg target, const RewriteOptions& opt);

Expr substitute_factor(const Factor& f, const RewriteOptions& opt)
{
    if (f.is_symbol) return Expr::symbol(f.alg, f.index);
    Expr arg = substitute_word(f.argument(), map_source(f.kind), opt);
    if (f.kind == MapKind::Psi) return apply_map(MapKind::Nu, arg, {}, opt);
    return apply_map(f.kind, arg, f.time, opt);
}

Expr substitute_word(const Word& w, Alg target, const RewriteOptions& opt)
{
    Expr acc = Expr::unit(target);
    for (const auto& f : w) acc = acc * substitute_factor(f, opt);
    return acc.retarget(target == Alg::Scalar ? acc.target() : target);
}

Expr retime_word(const Word& w, Alg target, const std::map<int, TimeExpr>& values, const RewriteOptions& opt);

Expr retime_factor(const Factor& f, const std::map<int, TimeExpr>& values, const RewriteOptions& opt)
{
    if (f.is_symbol) return Expr::symbol(f.alg, f.index);
    Expr arg = retime_word(f.argument(), map_source(f.kind), values, opt);
    return apply_map(f.kind, arg, f.time.substitute(values), opt);
}

Expr retime_word(const Word& w, Alg target, const std::map<int, TimeExpr>& values, const RewriteOptions& opt)
{
    Expr acc = Expr::unit(target);
    for (const auto& f : w) acc = acc * retime_factor(f, values, opt);
    return acc.retarget(target == Alg::Scalar ? acc.target() : target);
}

}  // namespace

Expr substitute_times(const Expr& e, const std::map<int, TimeExpr>& values, const RewriteOptions& opt)
{
    Expr acc = Expr::zero(e.target());
    for (const auto& t : e.terms()) {
        Expr term = Expr::scalar(t.coef);
        for (const auto& s : t.scalars) term = term * retime_factor(s, values, opt);
        term = term * retime_word(t.word, e.target(), values, opt);
        acc = acc + term.retarget(e.target() == Alg::Scalar ? term.target() : e.target());
    }
    return acc;
}

Expr substitute_scalar_psi(const Expr& e, const RewriteOptions& opt)
{
    Expr acc = Expr::zero(e.target());
    for (const auto& t : e.terms()) {
        Expr term = Expr::scalar(t.coef);
        for (const auto& s : t.scalars) term = term * substitute_factor(s, opt);
        term = term * substitute_word(t.word, e.target(), opt);
        acc = acc + term.retarget(e.target() == Alg::Scalar ? term.target() : e.target());
    }
    return acc;
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << emit_text(e); }

}  // namespace sauv
