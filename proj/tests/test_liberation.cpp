#include "sauv/liberation.hpp"
#include "sauv/properties.hpp"

#include <doctest.h>

using namespace sauv;

namespace {

Expr P(const std::string& s, Alg hint = Alg::B)
{
    ParseOptions po;
    po.hint = hint;
    po.allow_macros = true;
    return parse(s, po);
}

// Exchange the roles of A and B: a_i <-> b_i, rho <-> psi, omega <-> nu.
Ast mirror(Ast a)
{
    if (a.op == Ast::Op::Sym) a.alg = a.alg == Alg::A ? Alg::B : Alg::A;
    if (a.op == Ast::Op::Map) {
        switch (a.kind) {
        case MapKind::Rho: a.kind = MapKind::Psi; break;
        case MapKind::Psi: a.kind = MapKind::Rho; break;
        case MapKind::Omega: a.kind = MapKind::Nu; break;
        case MapKind::Nu: a.kind = MapKind::Omega; break;
        case MapKind::Phi: break;
        }
    }
    for (auto& k : a.kids) k = mirror(k);
    return a;
}

}  // namespace

TEST_CASE("alternation number")
{
    CHECK(alternation_number(SubsetS::from_members(5, {1, 3, 4, 8})) == 3);
    CHECK(alternation_number(SubsetS::from_members(3, {2, 4})) == 3);
    CHECK(alternation_number(SubsetS::from_members(1, {})) == 1);
}

TEST_CASE("alternation number drops below l except at the even positions")
{
    for (int ell = 1; ell <= 4; ++ell)
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (2 * ell - 1)); ++mask) {
            SubsetS s{ell, mask};
            if (s.is_even_positions())
                CHECK(alternation_number(s) == ell);
            else
                CHECK(alternation_number(s) < ell);
        }
}

TEST_CASE("consecutive subsets")
{
    auto r = consecutive_subsets(SubsetS::from_members(5, {1, 3, 4, 8}));
    CHECK(r.T == std::vector<std::vector<int>>{{0, 1}, {3, 4}, {8}, {10}});
    CHECK(r.U == std::vector<std::vector<int>>{{2}, {5, 6, 7}, {9}});

    r = consecutive_subsets(SubsetS::from_members(1, {1}));
    CHECK(r.T == std::vector<std::vector<int>>{{0, 1, 2}});
    CHECK(r.U.empty());

    r = consecutive_subsets(SubsetS::from_members(2, {}));
    CHECK(r.T == std::vector<std::vector<int>>{{0}, {4}});
    CHECK(r.U == std::vector<std::vector<int>>{{1, 2, 3}});
}

TEST_CASE("collapse")
{
    AltWord w1 = AltWord::generic(1);
    AltWord c = collapse(w1, SubsetS::from_members(1, {1}));
    CHECK(c.ell() == 0);
    CHECK(c.bs[0] == P("b0*rho(a1)*b1"));

    AltWord w2 = AltWord::generic(2);
    c = collapse(w2, SubsetS::from_members(2, {}));
    CHECK(c.ell() == 1);
    CHECK(c.bs[0] == P("b0"));
    CHECK(c.as[0] == P("a1*psi(b1)*a2", Alg::A));
    CHECK(c.bs[1] == P("b2"));
}

TEST_CASE("moment function, short words")
{
    AltWord w0;
    w0.bs = {Expr::b(3)};
    CHECK(moment_right(w0) == P("b3"));
    CHECK(moment_right(AltWord::generic(1)) == P("b0*rho(a1)*b1"));
    CHECK(moment_right(AltWord::generic(2)) ==
          P("b0*(rho(a1)*b1*rho(a2) + rho(a1*psi(b1)*a2) - rho(a1)*rho(psi(b1)*a2) - rho(a1*psi(b1))*rho(a2)"
            " + rho(a1)*rho(psi(b1))*rho(a2))*b2"));
}

TEST_CASE("reduced moments drop the outer letters")
{
    CHECK(reduced_moment_right(1) == P("rho(a1)"));
    CHECK(reduced_moment_scalar(2) == P("nu(b1)*rhoc(a1,a2) + rho(a1)*b1*rho(a2)"));
}

TEST_CASE("scalar psi specialization")
{
    CHECK(moment_scalar(AltWord::generic(2)) == P("b0*(nu(b1)*(rho(a1*a2) - rho(a1)*rho(a2)) + rho(a1)*b1*rho(a2))*b2"));
    for (int ell = 1; ell <= 3; ++ell)
        CHECK(substitute_scalar_psi(moment_right(AltWord::generic(ell))) == moment_scalar(AltWord::generic(ell)));
}

TEST_CASE("left moment function")
{
    LeftWord w0;
    w0.as = {Expr::a(2)};
    CHECK(moment_left(w0) == P("a2", Alg::A));
    CHECK(moment_left(LeftWord::generic(1)) == P("a0*psi(b1)*a1", Alg::A));

    // Mirrors of the right moments, with unitality of both maps so the rewrite rules are symmetric.
    LiberationOptions opt;
    opt.rewrite.unital_psi = true;
    ParseOptions po;
    po.rewrite = opt.rewrite;
    for (int ell = 1; ell <= 3; ++ell) {
        Expr right = moment_right(AltWord::generic(ell), opt);
        Expr mirrored = normalize(mirror(to_ast(right)), po);
        CHECK(mirrored == moment_left(LeftWord::generic(ell), opt));
    }
}

TEST_CASE("the displayed left sign does not reproduce the mirror")
{
    LiberationOptions alt, shown;
    alt.rewrite.unital_psi = shown.rewrite.unital_psi = true;
    shown.left_sign = LeftSign::Displayed;
    CHECK(moment_left(LeftWord::generic(1), alt) == moment_left(LeftWord::generic(1), shown));
    CHECK_FALSE(moment_left(LeftWord::generic(2), alt) == moment_left(LeftWord::generic(2), shown));
}

TEST_CASE("bimodule compatibility")
{
    for (int ell = 1; ell <= 3; ++ell) {
        AltWord w = AltWord::generic(ell);
        AltWord inner = w;
        inner.bs.front() = Expr::unit(Alg::B);
        inner.bs.back() = Expr::unit(Alg::B);
        CHECK(w.bs.front() * moment_right(inner) * w.bs.back() == moment_right(w));
    }
}

TEST_CASE("term counts stay below the bound")
{
    AltWord w0;
    w0.bs = {Expr::b(0)};
    TermCount c0 = term_count(w0);
    CHECK(c0.observed == 1);
    CHECK(c0.bound == 1);
    TermCount c1 = term_count(AltWord::generic(1));
    CHECK(c1.bound == 2);
    CHECK(c1.observed <= 2);
    for (int ell = 2; ell <= 3; ++ell) {
        TermCount c = term_count(AltWord::generic(ell));
        CHECK(c.bound == std::uint64_t{1} << (ell * ell));
        CHECK(c.observed <= c.bound);
        CHECK(c.normalized <= c.observed);
    }
}

TEST_CASE("memoization does not change the result")
{
    LiberationOptions plain;
    plain.memoize = false;
    for (int ell = 1; ell <= 3; ++ell) CHECK(moment_right(AltWord::generic(ell), plain) == moment_right(AltWord::generic(ell)));
}

TEST_CASE("linearity, reduced case count")
{
    PropertyResult r = property_moment_linearity(100, 11);
    INFO(r.first_failure);
    CHECK(r.ok());
}
