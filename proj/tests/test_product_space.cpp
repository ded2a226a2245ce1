#include "sauv/liberation.hpp"
#include "sauv/product_space.hpp"
#include "sauv/verify.hpp"

#include <doctest.h>

#include <Eigen/SVD>

using namespace sauv;

namespace {

Vec unit_vec(int n, int i)
{
    Vec v = Vec::Zero(n);
    v(i) = 1;
    return v;
}

Mat isometry(int k, int h)
{
    Mat V = Mat::Zero(k, h);
    V.topRows(h) = Mat::Identity(h, h);
    return V;
}

std::vector<Rational> quarter_half_one() { return {make_rational(1, 4), make_rational(1, 2), Rational(1)}; }

void require_all_pass(const std::vector<Check>& checks)
{
    REQUIRE_FALSE(checks.empty());
    for (const auto& c : checks) {
        INFO(c.suite << ": " << c.name << " residual " << c.residual << " tolerance " << c.tolerance << " " << c.detail);
        CHECK(c.pass);
    }
}

}  // namespace

TEST_CASE("block dimensions")
{
    // dim H^- = 3, dim L = 2, depth 2.
    ProductSpace s(unit_vec(4, 0), isometry(6, 4), 2);
    CHECK(s.dim_L() == 2);
    CHECK(s.dim_E(0) == 2);
    CHECK(s.dim_E(1) == 6);
    CHECK(s.dim_E(2) == 18);
    for (int n = 0; n <= 2; ++n) CHECK(s.dim_F(n) == 3 * s.dim_E(n));
    CHECK(s.dim_total() == 4 + (2 + 6 + 18) * 4);
}

TEST_CASE("degenerate factors")
{
    // L = {0}: only the H block survives.
    ProductSpace noL(unit_vec(4, 0), isometry(4, 4), 3);
    CHECK(noL.dim_total() == 4);
    // H^- = {0}: the E blocks alone.
    ProductSpace noH(unit_vec(1, 0), isometry(3, 1), 2);
    CHECK(noH.dim_total() == 1 + 2 + 6 + 18);
    for (int n = 0; n <= 2; ++n) CHECK(noH.dim_F(n) == 0);
}

TEST_CASE("centered right letters move E_n into H^- (x) E_n")
{
    MatModel m = default_model();
    CPTuple t = tuple_from_model(m, 0.5);
    SauvageotProduct p = SauvageotProduct::minimal(t, 2);
    const ProductSpace& s = p.space();
    Mat a = m.binding("a1"), b = m.binding("b1");
    Mat I = Mat::Identity(2, 2);
    a -= m.omega(m.phi(0.5, a)) * I;
    b -= m.omega(b) * I;

    PSVector v = s.from_H(p.representation().Omega);
    s.apply({p.psi_L(a)}, v);
    REQUIRE(v.top_level() == 0);
    v.H.setZero();
    double xi = v.E[0].norm();
    REQUIRE(xi > 1e-3);

    s.apply({p.psi_R(b)}, v);
    CHECK(v.H.norm() < 1e-14);
    CHECK((v.E.empty() || v.E[0].norm() < 1e-14));
    REQUIRE(v.F.size() >= 1);
    Eigen::JacobiSVD<Mat> svd(v.F[0]);
    CHECK(svd.singularValues()(0) == doctest::Approx((p.representation().piR(b) * p.representation().Omega).norm() * xi));
    if (svd.singularValues().size() > 1) CHECK(svd.singularValues()(1) < 1e-13);
}

TEST_CASE("retraction of single letters")
{
    MatModel m = default_model();
    CPTuple t = tuple_from_model(m, 1.0);
    SauvageotProduct p = SauvageotProduct::minimal(t, 3);
    Mat a = m.binding("a2"), b = m.binding("b2");
    CHECK((p.theta({p.psi_R(b)}).value - b).norm() < 1e-12);
    CHECK((p.theta({p.psi_L(a)}).value - m.phi(1.0, a)).norm() < 1e-12);
    CHECK((p.theta({p.psi_L(a), p.psi_R(b)}).value - m.phi(1.0, a) * b).norm() < 1e-12);
}

TEST_CASE("retraction of two-letter words matches the moment function")
{
    MatModel m = default_model();
    CPTuple t = tuple_from_model(m, 0.5);
    SauvageotProduct p = SauvageotProduct::minimal(t, 4);
    Mat a1 = m.binding("a1"), a2 = m.binding("a2"), b1 = m.binding("b1");
    // theta(psi_L(a1) psi_R(b1) psi_L(a2)) = rho(a1) b1 rho(a2) + omega(b1) (rho(a1 a2) - rho(a1) rho(a2)).
    Mat rho1 = m.phi(0.5, a1), rho2 = m.phi(0.5, a2);
    Mat expect = rho1 * b1 * rho2 + m.omega(b1) * (m.phi(0.5, Mat(a1 * a2)) - rho1 * rho2);
    CHECK((p.theta({p.psi_L(a1), p.psi_R(b1), p.psi_L(a2)}).value - expect).norm() < 1e-12);
}

TEST_CASE("trivial right factor: theta is the state")
{
    // B = C: the product retracts onto omega.
    MatModel m = default_model();
    CPTuple t;
    t.nA = 2;
    t.nB = 1;
    t.state = Mat::Identity(1, 1);
    Mat st = m.state();
    t.phi = superop_from([&](const Mat& a) { return Mat((st * a).trace() * Mat::Identity(1, 1)); }, 2, 1);
    SauvageotProduct p = SauvageotProduct::minimal(t, 3);
    Mat a1 = m.binding("a1"), a2 = m.binding("a2");
    cd w = p.theta({p.psi_L(a1), p.psi_L(a2)}).value(0, 0);
    CHECK(std::abs(w - m.omega(Mat(a1 * a2))) < 1e-12);
}

TEST_CASE("retraction suites on the default and GKS models")
{
    Tolerances tol;
    for (const MatModel& m : {default_model(), gks_default_model()}) {
        require_all_pass(check_retractions(m, quarter_half_one(), 4, 10, 3, tol));
        require_all_pass(check_representations(m, quarter_half_one(), tol));
    }
}

TEST_CASE("liberation suites")
{
    Tolerances tol;
    require_all_pass(check_liberation(default_model(), quarter_half_one(), 4, 10, 5, tol));
    require_all_pass(check_liberation(random_model(2, 9), {make_rational(1, 2)}, 4, 5, 6, tol));
}
