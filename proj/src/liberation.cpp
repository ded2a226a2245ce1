#include "sauv/liberation.hpp"

#include "sauv/errors.hpp"

#include <functional>
#include <map>
#include <stdexcept>

namespace sauv {

void AltWord::validate() const
{
    if (bs.size() != as.size() + 1) throw std::invalid_argument("alternating word needs l+1 B-entries and l A-entries");
    for (const auto& b : bs)
        if (b.target() == Alg::A) throw TypeError("type error: A-valued entry in a B slot");
    for (const auto& a : as)
        if (a.target() == Alg::B) throw TypeError("type error: B-valued entry in an A slot");
}

AltWord AltWord::generic(int ell)
{
    AltWord w;
    for (int i = 0; i <= ell; ++i) w.bs.push_back(Expr::b(i));
    for (int i = 1; i <= ell; ++i) w.as.push_back(Expr::a(i));
    return w;
}

void LeftWord::validate() const
{
    if (as.size() != bs.size() + 1) throw std::invalid_argument("left word needs l+1 A-entries and l B-entries");
    for (const auto& a : as)
        if (a.target() == Alg::B) throw TypeError("type error: B-valued entry in an A slot");
    for (const auto& b : bs)
        if (b.target() == Alg::A) throw TypeError("type error: A-valued entry in a B slot");
}

LeftWord LeftWord::generic(int ell)
{
    LeftWord w;
    for (int i = 0; i <= ell; ++i) w.as.push_back(Expr::a(i));
    for (int i = 1; i <= ell; ++i) w.bs.push_back(Expr::b(i));
    return w;
}

SubsetS SubsetS::from_members(int ell, const std::vector<int>& members)
{
    SubsetS s;
    s.ell = ell;
    for (int j : members) {
        if (j < 1 || j > 2 * ell - 1) throw std::invalid_argument("subset member out of range [1, 2l-1]");
        s.mask |= std::uint64_t{1} << (j - 1);
    }
    return s;
}

bool SubsetS::contains(int j) const { return j >= 1 && j <= 2 * ell - 1 && (mask >> (j - 1) & 1); }

int SubsetS::size() const { return __builtin_popcountll(mask); }

std::vector<int> SubsetS::members() const
{
    std::vector<int> out;
    for (int j = 1; j <= 2 * ell - 1; ++j)
        if (contains(j)) out.push_back(j);
    return out;
}

bool SubsetS::is_even_positions() const
{
    std::uint64_t even = 0;
    for (int j = 2; j <= 2 * ell - 2; j += 2) even |= std::uint64_t{1} << (j - 1);
    return mask == even;
}

namespace {

bool in_support(const SubsetS& s, int j) { return j == 0 || j == 2 * s.ell || s.contains(j); }

}  // namespace

int alternation_number(const SubsetS& s)
{
    int changes = 0;
    for (int j = 1; j <= 2 * s.ell; ++j) changes += in_support(s, j) != in_support(s, j - 1);
    return changes / 2;
}

ConsecutiveRuns consecutive_subsets(const SubsetS& s)
{
    ConsecutiveRuns r;
    bool prev_in = false;
    for (int j = 0; j <= 2 * s.ell; ++j) {
        bool in = in_support(s, j);
        auto& runs = in ? r.T : r.U;
        if (j == 0 || in != prev_in) runs.emplace_back();
        runs.back().push_back(j);
        prev_in = in;
    }
    return r;
}

namespace {

// A generic alternating word (u0, v1, u1, ..., v_l, u_l) with outer entries u and inner entries v.
// In-positions take x_odd = lift(v), x_even = u; out-positions take y_odd = v, y_even = drop(u).
struct Shape {
    Alg outer;
    Alg inner;
    std::function<Expr(const Expr&)> lift;  // inner -> outer
    std::function<Expr(const Expr&)> drop;  // outer -> inner
};

using Entries = std::pair<std::vector<Expr>, std::vector<Expr>>;  // (us, vs)

Entries collapse_generic(const Entries& w, const SubsetS& s, const Shape& sh)
{
    const auto& [us, vs] = w;
    auto x = [&](int j) { return j % 2 ? sh.lift(vs[(j + 1) / 2 - 1]) : us[j / 2]; };
    auto y = [&](int k) { return k % 2 ? vs[(k + 1) / 2 - 1] : sh.drop(us[k / 2]); };
    ConsecutiveRuns runs = consecutive_subsets(s);
    Entries out;
    for (std::size_t i = 0; i < runs.T.size(); ++i) {
        std::vector<Expr> xs;
        for (int j : runs.T[i]) xs.push_back(x(j));
        out.first.push_back(product(xs, sh.outer));
        if (i < runs.U.size()) {
            std::vector<Expr> ys;
            for (int k : runs.U[i]) ys.push_back(y(k));
            out.second.push_back(product(ys, sh.inner));
        }
    }
    return out;
}

struct Recursion {
    const Shape& shape;
    bool alternating_sign;
    bool memoize;
    std::map<std::vector<Expr>, Expr> memo;
    std::uint64_t leaves = 0;

    Expr run(const Entries& w)
    {
        int ell = static_cast<int>(w.second.size());
        if (ell == 0) {
            ++leaves;
            return w.first.at(0);
        }
        std::vector<Expr> key;
        if (memoize) {
            key = w.first;
            key.insert(key.end(), w.second.begin(), w.second.end());
            if (auto it = memo.find(key); it != memo.end()) return it->second;
        }
        Expr total = Expr::zero(shape.outer);
        SubsetS s;
        s.ell = ell;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (2 * ell - 1)); ++mask) {
            s.mask = mask;
            if (s.is_even_positions()) continue;
            int exponent = (alternating_sign ? ell : 1) + s.size();
            Expr m = run(collapse_generic(w, s, shape));
            total = exponent % 2 ? total - m : total + m;
        }
        if (memoize) memo.emplace(std::move(key), total);
        return total;
    }
};

Shape right_shape(const RewriteOptions& opt)
{
    return {Alg::B, Alg::A, [opt](const Expr& a) { return rho(a, opt); },
            [opt](const Expr& b) { return psi(b, opt); }};
}

Shape scalar_shape(const RewriteOptions& opt)
{
    return {Alg::B, Alg::A, [opt](const Expr& a) { return rho(a, opt); },
            [opt](const Expr& b) { return nu(b, opt).retarget(Alg::A); }};
}

Shape left_shape(const RewriteOptions& opt)
{
    return {Alg::A, Alg::B, [opt](const Expr& b) { return psi(b, opt); },
            [opt](const Expr& a) { return rho(a, opt); }};
}

}  // namespace

AltWord collapse(const AltWord& w, const SubsetS& s, const RewriteOptions& opt)
{
    w.validate();
    if (w.ell() == 0) throw std::invalid_argument("collapse requires l >= 1");
    if (s.ell != w.ell()) throw std::invalid_argument("subset and word lengths differ");
    auto [bs, as] = collapse_generic({w.bs, w.as}, s, right_shape(opt));
    return {bs, as};
}

LeftWord collapse_left(const LeftWord& w, const SubsetS& s, const RewriteOptions& opt)
{
    w.validate();
    if (w.ell() == 0) throw std::invalid_argument("collapse requires l >= 1");
    if (s.ell != w.ell()) throw std::invalid_argument("subset and word lengths differ");
    auto [as, bs] = collapse_generic({w.as, w.bs}, s, left_shape(opt));
    return {as, bs};
}

Expr moment_right(const AltWord& w, const LiberationOptions& opt)
{
    w.validate();
    Shape sh = right_shape(opt.rewrite);
    Recursion r{sh, true, opt.memoize, {}, 0};
    return r.run({w.bs, w.as}).retarget(Alg::B);
}

Expr moment_scalar(const AltWord& w, const LiberationOptions& opt)
{
    w.validate();
    Shape sh = scalar_shape(opt.rewrite);
    Recursion r{sh, true, opt.memoize, {}, 0};
    return r.run({w.bs, w.as}).retarget(Alg::B);
}

Expr moment_left(const LeftWord& w, const LiberationOptions& opt)
{
    w.validate();
    Shape sh = left_shape(opt.rewrite);
    Recursion r{sh, opt.left_sign == LeftSign::Alternating, opt.memoize, {}, 0};
    return r.run({w.as, w.bs}).retarget(Alg::A);
}

namespace {

AltWord stripped(int ell)
{
    AltWord w = AltWord::generic(ell);
    w.bs.front() = Expr::unit(Alg::B);
    w.bs.back() = Expr::unit(Alg::B);
    return w;
}

}  // namespace

Expr reduced_moment_right(int ell, const LiberationOptions& opt) { return moment_right(stripped(ell), opt); }

Expr reduced_moment_scalar(int ell, const LiberationOptions& opt) { return moment_scalar(stripped(ell), opt); }

TermCount term_count(const AltWord& w, const LiberationOptions& opt)
{
    w.validate();
    Shape sh = right_shape(opt.rewrite);
    Recursion r{sh, true, false, {}, 0};
    Expr e = r.run({w.bs, w.as});
    TermCount c;
    c.observed = r.leaves;
    int ell = w.ell();
    if (ell * ell >= 64) throw std::overflow_error("term-count bound exceeds 64 bits");
    c.bound = std::uint64_t{1} << (ell * ell);
    c.normalized = e.size();
    return c;
}

}  // namespace sauv
