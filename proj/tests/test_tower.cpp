#include "sauv/errors.hpp"
#include "sauv/momentpoly.hpp"
#include "sauv/tower.hpp"
#include "sauv/verify.hpp"

#include <doctest.h>

using namespace sauv;

namespace {

void require_all_pass(const std::vector<Check>& checks)
{
    REQUIRE_FALSE(checks.empty());
    for (const auto& c : checks) {
        INFO(c.suite << ": " << c.name << " residual " << c.residual << " tolerance " << c.tolerance << " " << c.detail);
        CHECK(c.pass);
    }
}

std::vector<Mat> elems(const MatModel& m, int n)
{
    std::vector<Mat> out;
    for (int i = 1; i <= n; ++i) out.push_back(m.binding("a" + std::to_string(i)));
    return out;
}

double distance(const Mat& x, const Mat& y) { return (x - y).norm() / std::max(1.0, y.norm()); }

}  // namespace

TEST_CASE("construction is validated")
{
    MatModel m = default_model();
    CHECK_THROWS_AS(DilationTower(m, {}), std::invalid_argument);
    CHECK_THROWS_AS(DilationTower(m, {Rational(0), Rational(1), Rational(2), Rational(3)}), std::invalid_argument);
    CHECK_THROWS_AS(DilationTower(m, {Rational(1), Rational(1)}), std::invalid_argument);
    CHECK_THROWS_AS(DilationTower(m, {Rational(-1), Rational(1)}), std::invalid_argument);
    TowerOptions opt;
    opt.max_word_len = 5;
    CHECK_THROWS_AS(DilationTower(m, {Rational(0), Rational(1)}, opt), std::invalid_argument);

    DilationTower tw(m, {Rational(1), Rational(0)});
    CHECK(tw.gamma() == std::vector<Rational>{Rational(0), Rational(1)});
    CHECK_THROWS_AS(tw.retract({Rational(2)}, elems(m, 1)), std::invalid_argument);
    std::vector<Rational> five(5, Rational(1));
    CHECK_THROWS_AS(tw.retract(five, elems(m, 5)), TruncationOverflow);
}

TEST_CASE("single point and two-letter words")
{
    MatModel m = default_model();
    std::vector<Mat> a = elems(m, 3);
    DilationTower one(m, {Rational(0)});
    CHECK(distance(one.retract({Rational(0), Rational(0)}, {a[0], a[1]}), a[0] * a[1]) < 1e-13);

    DilationTower two(m, {Rational(0), Rational(1)});
    CHECK(distance(two.retract({Rational(1), Rational(0)}, {a[0], a[1]}), m.phi(1.0, a[0]) * a[1]) < 1e-12);
    Mat s101 = smoment_numeric(NumericPair{{Rational(1), Rational(0), Rational(1)}, a}, m);
    CHECK(distance(two.retract({Rational(1), Rational(0), Rational(1)}, a), s101) < 1e-10);
}

TEST_CASE("three-point tower against the recursion")
{
    for (const MatModel& m : {default_model(), gks_default_model()}) {
        DilationTower tw(m, {Rational(0), make_rational(1, 2), Rational(1)});
        std::vector<Mat> a = elems(m, 4);
        using R = std::vector<Rational>;
        Rational h = make_rational(1, 2);
        for (const R& t : {R{Rational(1), Rational(0), h, Rational(1)}, R{h, Rational(1), Rational(0), h},
                           R{Rational(1), h, Rational(0), Rational(1)}, R{Rational(0), Rational(1), h, Rational(0)}}) {
            TowerDiagnostics d;
            Mat x = tw.retract(t, a, &d);
            Mat y = smoment_numeric(NumericPair{t, a}, m);
            CHECK(d.levels == 2);
            CHECK(d.gram_min_eigenvalue > -1e-9);
            CHECK(distance(x, y) < 1e-9);
        }
    }
}

TEST_CASE("shifted words use the tail construction")
{
    MatModel m = default_model();
    DilationTower tw(m, {Rational(0), make_rational(1, 2)});
    std::vector<Mat> a = elems(m, 3);
    std::vector<Rational> t{make_rational(3, 2), Rational(1), make_rational(3, 2)};
    Mat x = word_expectation(tw, t, a);
    Mat y = smoment_numeric(NumericPair{t, a}, m);
    CHECK(distance(x, y) < 1e-10);
    CHECK_THROWS_AS(word_expectation(tw, {Rational(0), Rational(2)}, {a[0], a[1]}), std::invalid_argument);
}

TEST_CASE("tower, oracle and shift suites")
{
    Tolerances tol;
    MatModel m = default_model();
    std::vector<Rational> times{make_rational(1, 4), Rational(1)};
    require_all_pass(check_oracle(m, times, 4, 10, 1, tol));
    require_all_pass(check_tower(m, make_rational(1, 2), Rational(1), 4, 10, 2, tol));
    require_all_pass(check_tower(gks_default_model(), make_rational(1, 3), Rational(1), 4, 10, 3, tol));
    require_all_pass(check_shift(m, 4, 10, 4, tol));
}
