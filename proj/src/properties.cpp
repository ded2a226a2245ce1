#include "sauv/properties.hpp"

#include "sauv/errors.hpp"
#include "sauv/liberation.hpp"
#include "sauv/momentpoly.hpp"
#include "sauv/quantum.hpp"

#include <functional>

namespace sauv {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Rational random_coef(std::mt19937_64& rng)
{
    int num = uniform(rng, -3, 3);
    if (num == 0) num = 1;
    return make_rational(num, uniform(rng, 1, 3));
}

TimeExpr random_time(std::mt19937_64& rng)
{
    switch (uniform(rng, 0, 3)) {
    case 0: return TimeExpr(make_rational(uniform(rng, 1, 4), 2));
    case 1: return TimeExpr::var(uniform(rng, 1, 3));
    case 2: return TimeExpr::var(2) - TimeExpr::var(1);
    default: return TimeExpr::var(1) + TimeExpr(make_rational(1, 2));
    }
}

Ast node(Ast::Op op, std::vector<Ast> kids = {})
{
    Ast a;
    a.op = op;
    a.kids = std::move(kids);
    return a;
}

Ast leaf(std::mt19937_64& rng, Alg target)
{
    if (target == Alg::Scalar) {
        Ast a = node(Ast::Op::Num);
        a.num = random_coef(rng);
        return a;
    }
    if (uniform(rng, 0, 5) == 0) return node(Ast::Op::One);
    Ast a = node(Ast::Op::Sym);
    a.alg = target;
    a.index = uniform(rng, 1, 4);
    return a;
}

Ast map_node(MapKind k, Ast arg, TimeExpr t = {})
{
    Ast a = node(Ast::Op::Map, {std::move(arg)});
    a.kind = k;
    a.time = std::move(t);
    return a;
}

// Runs `body` and records a failure message if it returns false or throws.
void run_case(PropertyResult& r, const std::function<std::string()>& body)
{
    ++r.cases;
    std::string msg;
    try {
        msg = body();
    } catch (const std::exception& e) {
        msg = std::string("exception: ") + e.what();
    }
    if (!msg.empty()) {
        ++r.failures;
        if (r.first_failure.empty()) r.first_failure = "case " + std::to_string(r.cases) + ": " + msg;
    }
}

ParseOptions hinted(Alg target)
{
    ParseOptions po;
    po.hint = target;
    return po;
}

Expr random_expr(std::mt19937_64& rng, Alg& target, int depth)
{
    target = static_cast<Alg>(uniform(rng, 0, 2));
    return normalize(random_ast(rng, target, depth), hinted(target));
}

std::string mismatch(const Expr& a, const Expr& b) { return emit_text(a) + "  vs  " + emit_text(b); }

Expr fresh_combination(Alg alg, const Rational& alpha, const Rational& beta)
{
    return Expr::symbol(alg, 7) * alpha + Expr::symbol(alg, 8) * beta;
}

TimedPair random_timed_pair(std::mt19937_64& rng, int len)
{
    TimedPair p;
    bool symbolic = uniform(rng, 0, 1) == 1;
    for (int i = 0; i < len; ++i) {
        int k = uniform(rng, 0, 3);
        if (symbolic)
            p.times.push_back(k == 0 ? TimeExpr() : TimeExpr::var(k));
        else
            p.times.push_back(TimeExpr(make_rational(k, 2)));
        p.elems.push_back(Expr::a(i + 1));
    }
    return p;
}

}  // namespace

Ast random_ast(std::mt19937_64& rng, Alg target, int depth)
{
    if (depth <= 1 || uniform(rng, 0, 4) == 0) return leaf(rng, target);
    int d = depth - 1;
    int choice = uniform(rng, 0, 5);
    switch (choice) {
    case 0: return node(Ast::Op::Add, {random_ast(rng, target, d), random_ast(rng, target, d)});
    case 1: return node(Ast::Op::Sub, {random_ast(rng, target, d), random_ast(rng, target, d)});
    case 2: {
        // Products may mix in scalar-valued factors.
        Alg left = uniform(rng, 0, 2) == 0 ? Alg::Scalar : target;
        return node(Ast::Op::Mul, {random_ast(rng, left, d), random_ast(rng, target, d)});
    }
    case 3: return node(Ast::Op::Neg, {random_ast(rng, target, d)});
    default: break;
    }
    switch (target) {
    case Alg::A:
        if (uniform(rng, 0, 1)) return map_node(MapKind::Phi, random_ast(rng, Alg::A, d), random_time(rng));
        return map_node(MapKind::Psi, random_ast(rng, Alg::B, d));
    case Alg::B: return map_node(MapKind::Rho, random_ast(rng, Alg::A, d));
    case Alg::Scalar:
        if (uniform(rng, 0, 1)) return map_node(MapKind::Omega, random_ast(rng, Alg::A, d));
        return map_node(MapKind::Nu, random_ast(rng, Alg::B, d));
    }
    return leaf(rng, target);
}

PropertyResult property_normalize_idempotent(int cases, std::uint64_t seed)
{
    PropertyResult r{"normalize idempotent", 0, 0, {}};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < cases; ++i)
        run_case(r, [&] {
            Alg t;
            Expr e = random_expr(rng, t, 6);
            Expr again = normalize(to_ast(e), hinted(e.target()));
            return again == e ? std::string() : mismatch(e, again);
        });
    return r;
}

PropertyResult property_normalize_compatible(int cases, std::uint64_t seed)
{
    PropertyResult r{"normalize compatible with products and sums", 0, 0, {}};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < cases; ++i)
        run_case(r, [&] {
            Alg t = static_cast<Alg>(uniform(rng, 0, 2));
            Ast x = random_ast(rng, t, 4), y = random_ast(rng, t, 4);
            Expr nx = normalize(x, hinted(t)), ny = normalize(y, hinted(t));
            Expr prod = normalize(node(Ast::Op::Mul, {x, y}), hinted(t));
            Expr sum = normalize(node(Ast::Op::Add, {x, y}), hinted(t));
            if (!(prod == (nx * ny).retarget(prod.target()))) return "product: " + mismatch(prod, nx * ny);
            if (!(sum == (nx + ny).retarget(sum.target()))) return "sum: " + mismatch(sum, nx + ny);
            return std::string();
        });
    return r;
}

PropertyResult property_json_roundtrip(int cases, std::uint64_t seed)
{
    PropertyResult r{"json round-trip", 0, 0, {}};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < cases; ++i)
        run_case(r, [&] {
            Alg t;
            Expr e = random_expr(rng, t, 6);
            std::string j = emit_json(e);
            Expr back = parse_json(j);
            if (!(back == e)) return mismatch(e, back);
            if (emit_json(back) != j) return std::string("serialization not deterministic");
            return std::string();
        });
    return r;
}

PropertyResult property_text_roundtrip(int cases, std::uint64_t seed)
{
    PropertyResult r{"text round-trip", 0, 0, {}};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < cases; ++i)
        run_case(r, [&] {
            Alg t;
            Expr e = random_expr(rng, t, 6);
            Expr back = parse(emit_text(e), hinted(e.target()));
            return back == e ? std::string() : mismatch(e, back);
        });
    return r;
}

PropertyResult property_moment_linearity(int cases, std::uint64_t seed, int max_ell)
{
    PropertyResult r{"moment function linear in each slot", 0, 0, {}};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < cases; ++i)
        run_case(r, [&] {
            int ell = uniform(rng, 1, max_ell);
            AltWord w = AltWord::generic(ell);
            int slot = uniform(rng, 0, 2 * ell);  // even: b_{slot/2}, odd: a_{(slot+1)/2}
            Rational alpha = random_coef(rng), beta = random_coef(rng);
            Alg alg = slot % 2 ? Alg::A : Alg::B;
            auto with = [&](const Expr& x) {
                AltWord v = w;
                (slot % 2 ? v.as[slot / 2] : v.bs[slot / 2]) = x;
                return moment_right(v);
            };
            Expr lhs = with(fresh_combination(alg, alpha, beta));
            Expr rhs = with(Expr::symbol(alg, 7)) * alpha + with(Expr::symbol(alg, 8)) * beta;
            return lhs == rhs ? std::string() : "l=" + std::to_string(ell) + " slot " + std::to_string(slot);
        });
    return r;
}

PropertyResult property_smoment_linearity(int cases, std::uint64_t seed, int max_len)
{
    PropertyResult r{"moment polynomial linear in each slot", 0, 0, {}};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < cases; ++i)
        run_case(r, [&] {
            TimedPair p = random_timed_pair(rng, uniform(rng, 1, max_len));
            int slot = uniform(rng, 0, static_cast<int>(p.size()) - 1);
            Rational alpha = random_coef(rng), beta = random_coef(rng);
            auto with = [&](const Expr& x) {
                TimedPair q = p;
                q.elems[slot] = x;
                return smoment(q);
            };
            Expr lhs = with(fresh_combination(Alg::A, alpha, beta));
            Expr rhs = with(Expr::a(7)) * alpha + with(Expr::a(8)) * beta;
            return lhs == rhs ? std::string() : p.label() + " slot " + std::to_string(slot);
        });
    return r;
}

PropertyResult property_unitality(int cases, std::uint64_t seed)
{
    PropertyResult r{"all-one inputs give one", 0, 0, {}};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < cases; ++i)
        run_case(r, [&] {
            if (uniform(rng, 0, 1)) {
                int ell = uniform(rng, 0, 3);
                AltWord w;
                w.bs.assign(ell + 1, Expr::unit(Alg::B));
                w.as.assign(ell, Expr::unit(Alg::A));
                Expr m = moment_right(w);
                return m == Expr::unit(Alg::B) ? std::string() : "moment l=" + std::to_string(ell) + ": " + emit_text(m);
            }
            TimedPair p = random_timed_pair(rng, uniform(rng, 1, 5));
            for (auto& e : p.elems) e = Expr::unit(Alg::A);
            Expr s = smoment(p);
            return s == Expr::unit(Alg::A) ? std::string() : p.label() + ": " + emit_text(s);
        });
    return r;
}

PropertyResult property_adjoint_symmetry(int cases, std::uint64_t seed, double tol)
{
    PropertyResult r{"adjoint symmetry of numeric moments", 0, 0, {}};
    std::mt19937_64 rng(seed);
    MatModel m = default_model();
    for (int i = 0; i < cases; ++i)
        run_case(r, [&] {
            int len = uniform(rng, 1, 5);
            NumericPair p, q;
            for (int k = 0; k < len; ++k) {
                p.times.push_back(make_rational(uniform(rng, 0, 8), 4));
                p.elems.push_back(random_matrix(m.n(), rng));
            }
            for (int k = len - 1; k >= 0; --k) {
                q.times.push_back(p.times[k]);
                q.elems.push_back(p.elems[k].adjoint());
            }
            Mat x = smoment_numeric(p, m);
            Mat y = smoment_numeric(q, m);
            double err = (x.adjoint() - y).norm() / std::max(1.0, x.norm());
            return err <= tol ? std::string() : "error " + std::to_string(err);
        });
    return r;
}

std::vector<PropertyResult> run_all_properties(int cases, std::uint64_t seed)
{
    return {
        property_normalize_idempotent(cases, seed),
        property_normalize_compatible(cases, seed + 1),
        property_json_roundtrip(cases, seed + 2),
        property_text_roundtrip(cases, seed + 3),
        property_moment_linearity(cases, seed + 4),
        property_smoment_linearity(cases, seed + 5),
        property_unitality(cases, seed + 6),
        property_adjoint_symmetry(cases, seed + 7),
    };
}

}  // namespace sauv
