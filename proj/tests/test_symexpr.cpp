#include "sauv/errors.hpp"
#include "sauv/properties.hpp"
#include "sauv/symexpr.hpp"

#include <doctest.h>

using namespace sauv;

namespace {

Expr P(const std::string& s, Alg hint = Alg::Scalar)
{
    ParseOptions po;
    po.hint = hint;
    return parse(s, po);
}

}  // namespace

TEST_CASE("unit absorption and state normalization")
{
    CHECK(P("rho(a1)*one") == P("rho(a1)"));
    Expr w = omega(Expr::unit(Alg::A));
    CHECK(w.target() == Alg::Scalar);
    CHECK(w == Expr::scalar(1));
    CHECK(P("nu(one)") == Expr::scalar(1));
}

TEST_CASE("maps are linear")
{
    CHECK(P("rho(2*a1 + a2)") == P("2*rho(a1) + rho(a2)"));
    CHECK(P("phi[t1](1/3*a1 - a2*a3)") == P("1/3*phi[t1](a1) - phi[t1](a2*a3)"));
    CHECK(P("rho(omega(a2)*a1)") == P("omega(a2)*rho(a1)"));
}

TEST_CASE("equality under cancellation and noncommutativity")
{
    CHECK(P("rho(a1)*b1 + b1*rho(a1) - rho(a1)*b1") == P("b1*rho(a1)"));
    CHECK_FALSE(P("rho(a1)*b1") == P("b1*rho(a1)"));
}

TEST_CASE("scalar factors commute")
{
    CHECK(P("omega(a1)*nu(b2)*a3") == P("nu(b2)*omega(a1)*a3"));
    CHECK(P("a3*omega(a1)") == P("omega(a1)*a3"));
}

TEST_CASE("unitality rewrites are flaggable")
{
    ParseOptions po;
    CHECK(parse("rho(one)*b1", po) == P("b1"));
    CHECK(parse("phi[1](one)", po) == Expr::unit(Alg::A));
    po.rewrite.unital_rho = false;
    CHECK_FALSE(parse("rho(one)*b1", po) == P("b1"));
}

TEST_CASE("semigroup merge and invariant state")
{
    CHECK(P("phi[1/2](phi[t1](a1))") == P("phi[t1 + 1/2](a1)"));
    CHECK(P("phi[0](a1)") == P("a1"));
    ParseOptions po;
    po.rewrite.invariant_omega = true;
    CHECK(parse("omega(phi[t2](a1))", po) == P("omega(a1)"));
    CHECK_FALSE(P("omega(phi[t2](a1))") == P("omega(a1)"));
}

TEST_CASE("scalar psi substitution")
{
    CHECK(substitute_scalar_psi(P("rho(a1*psi(b1)*a2)")) == P("nu(b1)*rho(a1*a2)"));
    CHECK(substitute_scalar_psi(P("rho(a1)*rho(psi(b1))*rho(a2)")) == P("nu(b1)*rho(a1)*rho(a2)"));
    Expr none = P("rho(a1)*b1*rho(a2) + b2");
    CHECK(substitute_scalar_psi(none) == none);
    Expr e = P("rho(a1*psi(b1*rho(a2*psi(b2))))*b3");
    CHECK(substitute_scalar_psi(substitute_scalar_psi(e)) == substitute_scalar_psi(e));
}

TEST_CASE("emitters")
{
    CHECK(emit_latex(P("rho(a1)")) == "\\rho(a_1)");
    CHECK(emit_text(P("rho(a1)*b1*rho(a2)")) == "rho(a1)*b1*rho(a2)");
    Expr e = P("omega(a2)*(phi[1](a1*a3) - phi[1](a1)*phi[1](a3))");
    CHECK(emit_json(e) == emit_json(parse_json(emit_json(e))));
}

TEST_CASE("parser examples")
{
    Expr e = P("rho(a1)*b1*rho(a2)");
    CHECK(e.target() == Alg::B);
    CHECK(e.size() == 1);

    Expr s = P("omega(a2)*(phi[1](a1*a3) - phi[1](a1)*phi[1](a3))");
    CHECK(s.target() == Alg::A);
    CHECK(s.size() == 2);
}

TEST_CASE("parser errors carry positions")
{
    CHECK_THROWS_AS(P("rho(b1)"), TypeError);
    try {
        P("a1 + b1");
        FAIL("mixed sum accepted");
    } catch (const TypeError& e) {
        CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
    try {
        P("rho(a1");
        FAIL("unbalanced parenthesis accepted");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("6") != std::string::npos);
    }
    CHECK_THROWS_AS(P("phi[](a1)"), ParseError);
    CHECK_THROWS_AS(P("a1 $ a2"), ParseError);
}

TEST_CASE("sums and products respect normalization")
{
    Expr x = P("rho(a1)*b1 - b2"), y = P("b1 + nu(b3)*rho(a2)");
    CHECK(x * y == P("(rho(a1)*b1 - b2)*(b1 + nu(b3)*rho(a2))"));
    CHECK(x + y == P("rho(a1)*b1 - b2 + b1 + nu(b3)*rho(a2)"));
    CHECK(x - x == Expr::zero(Alg::B));
}

TEST_CASE("random properties, reduced case count")
{
    for (const auto& r : {property_normalize_idempotent(200, 1), property_normalize_compatible(200, 2),
                          property_json_roundtrip(200, 3), property_text_roundtrip(200, 4)}) {
        INFO(r.name << ": " << r.first_failure);
        CHECK(r.ok());
    }
}
