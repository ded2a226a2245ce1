#include "sauv/errors.hpp"
#include "sauv/model_io.hpp"
#include "sauv/quantum.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

using namespace sauv;

namespace {

double min_eig(const Mat& h)
{
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
    return es.eigenvalues().minCoeff();
}

Mat diag_state()
{
    Mat s = Mat::Zero(2, 2);
    s(0, 0) = 2.0 / 3;
    s(1, 1) = 1.0 / 3;
    return s;
}

}  // namespace

TEST_CASE("vectorization round trip")
{
    std::mt19937_64 rng(1);
    Mat x = random_matrix(3, rng);
    CHECK((unvec(vec(x), 3) - x).norm() < 1e-15);
    Mat S = superop_from([](const Mat& a) { return Mat(a.transpose()); }, 3, 3);
    CHECK((apply_superop(S, x, 3) - x.transpose()).norm() < 1e-15);
    CHECK((S - transpose_superop(3)).norm() < 1e-15);
}

TEST_CASE("Choi matrices")
{
    Mat C = choi(identity_superop(2), 2, 2);
    // Sum_ij E_ij (x) E_ij: twice the projector onto the maximally entangled vector.
    Eigen::SelfAdjointEigenSolver<Mat> es(C);
    CHECK(es.eigenvalues()(3) == doctest::Approx(2.0));
    CHECK(std::abs(es.eigenvalues()(0)) < 1e-14);
    CHECK(std::abs(es.eigenvalues()(2)) < 1e-14);

    CHECK(min_eig(choi(transpose_superop(2), 2, 2)) == doctest::Approx(-1.0));

    Mat st = diag_state();
    Mat omega_map = superop_from([&](const Mat& a) { return Mat((st * a).trace() * Mat::Identity(2, 2)); }, 2, 2);
    CHECK(min_eig(choi(omega_map, 2, 2)) > -1e-14);
}

TEST_CASE("CP and unital checks")
{
    CPCheck id = is_cp_unital(identity_superop(2), 2, 2, 1e-10);
    CHECK(id.cp);
    CHECK(id.unital);
    CPCheck tr = is_cp_unital(transpose_superop(2), 2, 2, 1e-10);
    CHECK_FALSE(tr.cp);
    CHECK(tr.unital);
    CPCheck twice = is_cp_unital(2.0 * identity_superop(2), 2, 2, 1e-10);
    CHECK(twice.cp);
    CHECK_FALSE(twice.unital);
}

TEST_CASE("semigroup")
{
    MatModel m = default_model();
    std::mt19937_64 rng(2);
    Mat a = random_matrix(2, rng);
    CHECK((m.phi(0.0, a) - a).norm() < 1e-14);
    CHECK((m.phi(0.3, m.phi(0.7, a)) - m.phi(1.0, a)).norm() < 1e-13);
    CHECK((m.phi(0.5, Mat::Identity(2, 2)) - Mat::Identity(2, 2)).norm() < 1e-13);
    CHECK(m.validate().ok());
    CHECK(gks_default_model().validate().ok());
    for (unsigned seed : {1u, 2u, 3u}) CHECK(random_model(2, seed).validate().ok());
}

TEST_CASE("GNS representation")
{
    Gns g1 = gns(Mat::Identity(1, 1));
    CHECK(g1.Omega.size() == 1);

    Mat st = diag_state();
    Gns g = gns(st);
    CHECK(g.Omega.size() == 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            cd v = g.Omega.dot(g.piR_units[i + 2 * j] * g.Omega);
            CHECK(std::abs(v - st(j, i)) < 1e-14);
        }
    CHECK_THROWS_AS(gns(matrix_unit(2, 0, 0)), NumericError);
}

TEST_CASE("representations of CP tuples")
{
    for (const MatModel& m : {default_model(), gks_default_model(), random_model(2, 5)}) {
        for (double t : {0.25, 1.0}) {
            CPTuple tu = tuple_from_model(m, t);
            for (const Representation& r : {minimal_representation(tu), right_augmented_representation(tu),
                                            faithful_representation(tu).rep}) {
                RepresentationCheck c = check_representation(r, tu);
                CHECK(c.state_error < 1e-10);
                CHECK(c.isometry_error < 1e-10);
                CHECK(c.compression_error < 1e-10);
                CHECK(c.right_hom_error < 1e-10);
                CHECK(c.left_hom_error < 1e-10);
            }
            FaithfulRepresentation f = faithful_representation(tu);
            CHECK(decomposition_faithful(f.rep, f.decomposition));
        }
    }
}

TEST_CASE("Stinespring rank of a conditional expectation")
{
    // pi_R(omega(a) 1) on the 4-dimensional GNS space has Choi rank 8, so dim K = 16.
    Mat st = diag_state();
    CPTuple tu;
    tu.nA = tu.nB = 2;
    tu.state = st;
    tu.phi = superop_from([&](const Mat& a) { return Mat((st * a).trace() * Mat::Identity(2, 2)); }, 2, 2);
    Representation r = minimal_representation(tu);
    CHECK(r.k() == 16);
    CHECK(check_representation(r, tu).max() < 1e-10);
}

TEST_CASE("model files")
{
    MatModel m = load_model(std::string(SAUV_DATA_DIR) + "/models/default.json");
    MatModel d = default_model();
    CHECK((m.state() - d.state()).norm() < 1e-15);
    CHECK((m.generator() - d.generator()).norm() < 1e-14);
    CHECK((m.binding("a1") - d.binding("a1")).norm() < 1e-15);

    MatModel g = load_model(std::string(SAUV_DATA_DIR) + "/models/gks.json");
    CHECK(g.validate().ok());
    MatModel bad = load_model(std::string(SAUV_DATA_DIR) + "/models/corrupted.json");
    CHECK_FALSE(bad.validate().ok());

    Mat x = parse_matrix(R"([[1, "1/2"], [[0, 1], -3]])");
    CHECK(x(0, 1) == cd(0.5, 0));
    CHECK(x(1, 0) == cd(0, 1));
    CHECK((parse_matrix(matrix_to_json(x)) - x).norm() == 0);

    CHECK_THROWS(parse_model(R"({"dimension": 2, "state": [[1, 0], [0, 0]], "generator": {"kind": "nope"}})"));
    CHECK_THROWS(parse_matrix("[[1, 2], [3]]"));
}
