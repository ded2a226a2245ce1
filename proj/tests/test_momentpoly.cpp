#include "sauv/golden.hpp"
#include "sauv/interpret.hpp"
#include "sauv/momentpoly.hpp"
#include "sauv/properties.hpp"

#include <doctest.h>

#include <random>

using namespace sauv;

namespace {

Expr PA(const std::string& s)
{
    ParseOptions po;
    po.hint = Alg::A;
    return parse(s, po);
}

TimedPair pair(const std::string& times, const std::vector<std::string>& elems = {})
{
    return TimedPair::parse(times, elems);
}

std::vector<Mat> bound_elems(const MatModel& m, int n)
{
    std::vector<Mat> out;
    for (int i = 1; i <= n; ++i) out.push_back(m.binding("a" + std::to_string(i)));
    return out;
}

}  // namespace

TEST_CASE("merging equal neighbours")
{
    TimedPair p = merge_equal(pair("t1,t1,t2,t3,t3"));
    CHECK(p.times.size() == 3);
    CHECK(p.elems[0] == PA("a1*a2"));
    CHECK(p.elems[1] == PA("a3"));
    CHECK(p.elems[2] == PA("a4*a5"));
    CHECK(smoment(pair("t1,t1,t2,t3,t3")) == smoment(pair("t1,t2,t3", {"a1*a2", "a3", "a4*a5"})));
}

TEST_CASE("reduction peels boundary zeros and the common shift")
{
    ReducedPair r = reduce(pair("0,t2,t1"));
    CHECK(r.left == PA("a1"));
    CHECK(r.tau.to_string() == "t1");
    CHECK(r.core.times.size() == 2);
    CHECK(smoment(pair("0,t2,t1")) == PA("a1*phi[t1](phi[t2 - t1](a2)*a3)"));

    ReducedPair single = reduce(pair("t2"));
    CHECK(single.core.times.size() == 1);
    CHECK(smoment(pair("t2")) == PA("phi[t2](a1)"));
}

TEST_CASE("decomposition into zero and positive runs")
{
    PairDecomposition d = decompose(pair("1,0,1"));
    REQUIRE(d.zero_runs.size() == 3);
    REQUIRE(d.pos_runs.size() == 2);
    CHECK(d.zero_runs[0].size() == 0);
    CHECK(d.zero_runs[1].elems == std::vector<Expr>{PA("a2")});
    CHECK(d.zero_runs[2].size() == 0);
    CHECK(d.pos_runs[0].elems == std::vector<Expr>{PA("a1")});
    CHECK(d.pos_runs[1].elems == std::vector<Expr>{PA("a3")});

    d = decompose(pair("0,1"));
    REQUIRE(d.zero_runs.size() == 2);
    CHECK(d.zero_runs[0].elems == std::vector<Expr>{PA("a1")});
    CHECK(d.zero_runs[1].size() == 0);
    CHECK(d.pos_runs[0].elems == std::vector<Expr>{PA("a2")});

    CHECK_THROWS(decompose(pair("1,2")));
}

TEST_CASE("moment polynomial examples")
{
    CHECK(smoment(pair("0")) == PA("a1"));
    CHECK(smoment(pair("1,0")) == PA("phi[1](a1)*a2"));
    CHECK(smoment(pair("1,0,1")) == PA("phi[1](a1)*a2*phi[1](a3) + omega(a2)*(phi[1](a1*a3) - phi[1](a1)*phi[1](a3))"));
    // The omega(a2)*omega(a3) tail pairs phi_2(a1*a4) with phi_1(phi_1(a1)*phi_1(a4)), not phi_2(a1)*phi_2(a4).
    Expr s = smoment(pair("2,0,1,2"));
    Expr tail = PA("omega(a2)*omega(a3)*(phi[2](a1*a4) - phi[1](phi[1](a1)*phi[1](a4)))");
    CHECK((s - tail).size() == s.size() - tail.size());
    Expr naive = PA("omega(a2)*omega(a3)*phi[2](a1)*phi[2](a4)");
    CHECK((s + naive).size() == s.size() + 1);
}

TEST_CASE("moment polynomial golden table")
{
    TableCheck c = check_table(Table::MomentPolys);
    for (const auto& r : c.rows) {
        INFO(r.id << ": " << r.difference);
        CHECK(r.match);
    }
}

TEST_CASE("numeric recursion agrees with the symbolic polynomial")
{
    MatModel m = default_model();
    std::map<int, Rational> at{{1, make_rational(1, 2)}, {2, Rational(1)}, {3, make_rational(3, 2)}};
    for (const char* times : {"t1", "t1,0", "0,t2,t1", "t2,0,t1,t2", "t1,t2,0,t3", "t3,t1,0,t2,0", "t1,0,t3,0,t2"}) {
        TimedPair p = pair(times);
        Mat x = smoment_numeric(p, m, at);
        Mat y = smoment_interpreted(p, m, at);
        INFO(times);
        CHECK((x - y).norm() < 1e-12);
    }
}

TEST_CASE("all-one elements give the identity")
{
    MatModel m = default_model();
    NumericPair p{{Rational(1), Rational(0), make_rational(1, 2), Rational(2)}, std::vector<Mat>(4, Mat::Identity(2, 2))};
    CHECK((smoment_numeric(p, m) - Mat::Identity(2, 2)).norm() < 1e-13);
}

TEST_CASE("shift covariance of the numeric recursion")
{
    MatModel m = default_model();
    std::vector<Mat> a = bound_elems(m, 4);
    std::vector<Rational> t{Rational(1), Rational(0), make_rational(1, 2), Rational(1)};
    Rational tau = make_rational(1, 3);
    std::vector<Rational> shifted;
    for (const auto& x : t) shifted.push_back(x + tau);
    Mat lhs = smoment_numeric(NumericPair{shifted, a}, m);
    Mat rhs = m.phi(to_double(tau), smoment_numeric(NumericPair{t, a}, m));
    CHECK((lhs - rhs).norm() < 1e-12);
}

TEST_CASE("reduction preserves the polynomial")
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        int len = 1 + static_cast<int>(rng() % 5);
        std::string times;
        for (int k = 0; k < len; ++k) times += (k ? "," : "") + std::vector<std::string>{"0", "t1", "t2", "t3"}[rng() % 4];
        TimedPair p = pair(times);
        ReducedPair r = reduce(p);
        Expr rebuilt = r.left * phi(r.tau, r.core.size() ? smoment(r.core) : Expr::unit(Alg::A)) * r.right;
        INFO(times);
        CHECK(rebuilt == smoment(p));
    }
}

TEST_CASE("order relations")
{
    using R = std::vector<Rational>;
    CHECK(same_order(R{2, 0, 2}, R{1, 0, 1}));
    CHECK_FALSE(same_order(R{2, 0, 1}, R{1, 0, 1}));
    CHECK_FALSE(same_order(R{1, 1, 1}, R{1, 0, 1}));
}

TEST_CASE("non-crossing continuity")
{
    MatModel m = default_model();
    std::vector<Mat> a = bound_elems(m, 3);
    std::vector<Rational> lim{Rational(1), Rational(0), Rational(1)};

    NoncrossingReport constant = noncrossing_check(a, lim, {lim, lim}, m);
    CHECK(constant.deviations == std::vector<double>{0.0, 0.0});

    std::vector<std::vector<Rational>> seq, crossing;
    for (int k = 1; k <= 64; k *= 2) {
        Rational e = make_rational(1, k);
        seq.push_back({1 + e, Rational(0), 1 + e});
        crossing.push_back({1 + e, Rational(0), Rational(1)});
    }
    NoncrossingReport r = noncrossing_check(a, lim, seq, m);
    CHECK(r.monotone);
    CHECK_FALSE(r.crossing);
    CHECK(r.deviations.back() < r.deviations.front() / 32);

    CHECK_THROWS_AS(noncrossing_check(a, lim, crossing, m), std::invalid_argument);
    NoncrossingReport c = noncrossing_check(a, lim, crossing, m, true);
    CHECK(c.crossing);
    CHECK(c.deviations.back() < c.deviations.front() / 32);
}

TEST_CASE("discontinuity family")
{
    MatModel m = default_model();
    std::vector<Mat> a = bound_elems(m, 5);
    std::vector<Rational> taus{make_rational(1, 2), make_rational(1, 4), make_rational(1, 8)};
    DiscontinuityReport r = discontinuity(a, Rational(1), Rational(2), Rational(3), taus, m);
    CHECK(r.mismatch < 1e-9);
    CHECK(r.limit_gap.norm() > 1e-3);
    CHECK(r.rows[2].distance_to_limit < r.rows[0].distance_to_limit);

    std::vector<Mat> ones(5, Mat::Identity(2, 2));
    CHECK(discontinuity(ones, Rational(1), Rational(2), Rational(3), taus, m).limit_gap.norm() < 1e-12);
    std::vector<Mat> b = a;
    b[0] = Mat::Identity(2, 2);
    CHECK(discontinuity(b, Rational(1), Rational(2), Rational(3), taus, m).limit_gap.norm() < 1e-12);

    CHECK_THROWS(discontinuity(a, Rational(2), Rational(1), Rational(3), taus, m));
}

TEST_CASE("symbolic jump")
{
    Expr gap = discontinuity_gap_symbolic();
    CHECK_FALSE(gap.is_zero());
    RewriteOptions inv;
    inv.invariant_omega = true;
    CHECK(discontinuity_gap_symbolic(inv).size() <= gap.size());
}

TEST_CASE("linearity and adjoint symmetry, reduced case count")
{
    for (const auto& r : {property_smoment_linearity(100, 5), property_unitality(100, 6),
                          property_adjoint_symmetry(100, 7)}) {
        INFO(r.name << ": " << r.first_failure);
        CHECK(r.ok());
    }
}

TEST_CASE("diagonal elements do not give classical Markov moments")
{
    // Depolarizing dynamics preserve the diagonal subalgebra, where it is a classical Markov chain.
    MatModel m = default_model();
    Mat f = Mat::Zero(2, 2), g = Mat::Zero(2, 2), h = Mat::Zero(2, 2);
    f(0, 0) = 1;
    g(1, 1) = 1;
    h(0, 0) = 1;
    Mat s = smoment_numeric(NumericPair{{Rational(1), Rational(0), Rational(1)}, {f, g, h}}, m);
    for (const Mat& x : {f, g, h}) CHECK((s * x - x * s).norm() < 1e-14);
    cd markov = m.omega(Mat(g * m.phi(1.0, Mat(f * h))));
    CHECK(std::abs(m.omega(s) - markov) > 1e-3);
}
