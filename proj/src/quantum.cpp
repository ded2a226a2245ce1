#include "sauv/quantum.hpp"

#include "sauv/errors.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <random>

namespace sauv {

Mat matrix_unit(int n, int i, int j)
{
    Mat e = Mat::Zero(n, n);
    e(i, j) = 1.0;
    return e;
}

Mat vec(const Mat& X) { return Eigen::Map<const Mat>(X.data(), X.size(), 1); }

Mat unvec(const Mat& v, int n) { return Eigen::Map<const Mat>(v.data(), n, v.size() / n); }

Mat superop_from(const std::function<Mat(const Mat&)>& f, int n_in, int n_out)
{
    Mat S(n_out * n_out, n_in * n_in);
    for (int j = 0; j < n_in; ++j)
        for (int i = 0; i < n_in; ++i) S.col(i + n_in * j) = vec(f(matrix_unit(n_in, i, j)));
    return S;
}

Mat apply_superop(const Mat& S, const Mat& X, int n_out) { return unvec(S * vec(X), n_out); }

Mat choi(const Mat& S, int n_in, int n_out)
{
    Mat C(n_in * n_out, n_in * n_out);
    for (int i = 0; i < n_in; ++i)
        for (int j = 0; j < n_in; ++j)
            C.block(i * n_out, j * n_out, n_out, n_out) = apply_superop(S, matrix_unit(n_in, i, j), n_out);
    return C;
}

CPCheck is_cp_unital(const Mat& S, int n_in, int n_out, double tol)
{
    CPCheck r;
    Mat C = choi(S, n_in, n_out);
    Mat herm = 0.5 * (C + C.adjoint());
    double asym = (C - herm).norm();
    Eigen::SelfAdjointEigenSolver<Mat> es(herm);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    r.cp = asym <= tol && r.min_eigenvalue >= -tol;
    Mat one_in = Mat::Identity(n_in, n_in);
    r.unital_error = (apply_superop(S, one_in, n_out) - Mat::Identity(n_out, n_out)).norm();
    r.unital = r.unital_error <= tol;
    return r;
}

Mat superop_exp(const Mat& L, double t)
{
    if (t < 0) throw std::invalid_argument("semigroup time must be nonnegative");
    if (t == 0) return Mat::Identity(L.rows(), L.cols());
    Mat tl = L * cd(t, 0);
    return tl.exp();
}

Mat identity_superop(int n) { return Mat::Identity(n * n, n * n); }

Mat transpose_superop(int n)
{
    return superop_from([](const Mat& a) { return Mat(a.transpose()); }, n, n);
}

Mat depolarizing_generator(const Mat& state)
{
    int n = static_cast<int>(state.rows());
    return superop_from([&](const Mat& a) { return Mat((state * a).trace() * Mat::Identity(n, n) - a); }, n, n);
}

Mat gks_generator(const std::vector<Mat>& kraus, const Mat& k)
{
    int n = static_cast<int>(k.rows());
    return superop_from(
        [&](const Mat& a) {
            Mat out = k.adjoint() * a + a * k;
            for (const auto& v : kraus) out += v.adjoint() * a * v;
            return out;
        },
        n, n);
}

Mat gks_unital_k(const std::vector<Mat>& kraus, const Mat& hamiltonian)
{
    Mat k = cd(0, 1) * hamiltonian;
    for (const auto& v : kraus) k -= 0.5 * v.adjoint() * v;
    return k;
}

Mat sqrt_psd(const Mat& A)
{
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.adjoint()));
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
}

Mat range_basis(const Mat& M, double rel_tol)
{
    if (M.cols() == 0 || M.rows() == 0) return Mat(M.rows(), 0);
    Eigen::BDCSVD<Mat> svd(M, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) < 1e-300) return Mat(M.rows(), 0);
    int r = 0;
    while (r < s.size() && s(r) > rel_tol * s(0)) ++r;
    return svd.matrixU().leftCols(r);
}

Mat complement_basis(const Mat& Q, int dim, double rel_tol)
{
    Mat P = Mat::Identity(dim, dim);
    if (Q.cols() > 0) P -= Q * Q.adjoint();
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (P + P.adjoint()));
    std::vector<int> keep;
    for (int i = 0; i < dim; ++i)
        if (es.eigenvalues()(i) > 0.5 + rel_tol) keep.push_back(i);
    Mat out(dim, static_cast<int>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) out.col(c) = es.eigenvectors().col(keep[c]);
    return out;
}

// --- MatModel ---

MatModel::MatModel(Mat state, Mat generator, std::string generator_kind)
    : state_(std::move(state)), generator_(std::move(generator)), generator_kind_(std::move(generator_kind))
{
    if (state_.rows() != state_.cols()) throw std::invalid_argument("state density must be square");
    if (generator_.rows() != state_.rows() * state_.rows() || generator_.cols() != generator_.rows())
        throw std::invalid_argument("generator must be an n^2 x n^2 superoperator");
}

MatModel::MatModel(const MatModel& o)
    : state_(o.state_), generator_(o.generator_), generator_kind_(o.generator_kind_), bindings_(o.bindings_)
{
}

MatModel& MatModel::operator=(const MatModel& o)
{
    if (this != &o) {
        state_ = o.state_;
        generator_ = o.generator_;
        generator_kind_ = o.generator_kind_;
        bindings_ = o.bindings_;
        std::lock_guard<std::mutex> lock(cache_mutex_);
        cache_.clear();
    }
    return *this;
}

Mat MatModel::phi_superop(double t) const
{
    if (t < 0) throw std::invalid_argument("semigroup time must be nonnegative");
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(t);
    if (it != cache_.end()) return it->second;
    Mat s = superop_exp(generator_, t);
    cache_.emplace(t, s);
    return s;
}

Mat MatModel::phi(double t, const Mat& a) const
{
    if (t == 0) return a;
    return apply_superop(phi_superop(t), a, n());
}

const Mat& MatModel::binding(const std::string& name) const
{
    auto it = bindings_.find(name);
    if (it == bindings_.end()) throw std::invalid_argument("unbound symbol '" + name + "'");
    return it->second;
}

MatModel::Check MatModel::validate(double tol, const std::vector<double>& times) const
{
    Check c;
    int n = this->n();
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (state_ + state_.adjoint()));
    c.min_state_eigenvalue = es.eigenvalues().minCoeff();
    bool herm = (state_ - state_.adjoint()).norm() <= tol;
    c.state_ok = herm && c.min_state_eigenvalue > tol && std::abs(state_.trace() - cd(1, 0)) <= tol;
    c.generator_unit_error = (apply_superop(generator_, Mat::Identity(n, n), n)).norm();
    c.min_choi_eigenvalue = 1e300;
    bool cp = true;
    for (double t : times) {
        CPCheck k = is_cp_unital(superop_exp(generator_, t), n, n, tol);
        c.min_choi_eigenvalue = std::min(c.min_choi_eigenvalue, k.min_eigenvalue);
        cp = cp && k.cp && k.unital;
    }
    c.generator_ok = cp && c.generator_unit_error <= tol;
    return c;
}

Mat random_matrix(int n, std::mt19937_64& rng)
{
    std::normal_distribution<double> d(0.0, 1.0);
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = cd(d(rng), d(rng));
    return m;
}

void bind_random_symbols(MatModel& m, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    for (int i = 0; i <= 8; ++i) m.bind("a" + std::to_string(i), random_matrix(m.n(), rng));
    for (int i = 0; i <= 8; ++i) m.bind("b" + std::to_string(i), random_matrix(m.n(), rng));
}

namespace {

Mat default_state()
{
    Mat s = Mat::Zero(2, 2);
    s(0, 0) = 2.0 / 3.0;
    s(1, 1) = 1.0 / 3.0;
    return s;
}

}  // namespace

MatModel default_model()
{
    Mat s = default_state();
    MatModel m(s, depolarizing_generator(s), "depolarizing");
    bind_random_symbols(m, 1);
    return m;
}

MatModel gks_default_model()
{
    Mat s = default_state();
    Mat v = Mat::Zero(2, 2);
    v(0, 1) = 1.0;
    Mat h = Mat::Zero(2, 2);
    h(0, 0) = 0.5;
    h(1, 1) = -0.5;
    h(0, 1) = 0.25;
    h(1, 0) = 0.25;
    std::vector<Mat> kraus{v};
    MatModel m(s, gks_generator(kraus, gks_unital_k(kraus, h)), "gks");
    bind_random_symbols(m, 2);
    return m;
}

MatModel random_model(int n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    Mat g = random_matrix(n, rng);
    Mat s = g * g.adjoint() + 0.1 * Mat::Identity(n, n);
    s /= s.trace();
    std::vector<Mat> kraus{random_matrix(n, rng) * 0.5};
    Mat h = random_matrix(n, rng);
    h = (0.25 * (h + h.adjoint())).eval();
    MatModel m(s, gks_generator(kraus, gks_unital_k(kraus, h)), "gks");
    bind_random_symbols(m, seed + 1000);
    return m;
}

CPTuple tuple_from_model(const MatModel& m, double t)
{
    CPTuple c;
    c.nA = c.nB = m.n();
    c.phi = m.phi_superop(t);
    c.state = m.state();
    return c;
}

// --- representations ---

namespace {

Mat combine(const std::vector<Mat>& units, const Mat& x)
{
    int n = static_cast<int>(x.rows());
    Mat out = Mat::Zero(units.at(0).rows(), units.at(0).cols());
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (x(i, j) != cd(0, 0)) out += x(i, j) * units[i + n * j];
    return out;
}

Mat block_diag(const Mat& a, const Mat& b)
{
    Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

}  // namespace

Mat Representation::piR(const Mat& b) const { return combine(piR_units, b); }

Mat Representation::piL(const Mat& a) const { return combine(piL_units, a); }

Gns gns(const Mat& state)
{
    int n = static_cast<int>(state.rows());
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (state + state.adjoint()));
    if (es.eigenvalues().minCoeff() <= 1e-14) throw NumericError("state is not faithful; GNS quotient is not implemented");
    Gns g;
    g.Omega = vec(sqrt_psd(state));
    Mat id = Mat::Identity(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g.piR_units.push_back(Eigen::kroneckerProduct(id, matrix_unit(n, i, j)).eval());
    return g;
}

Stinespring stinespring(const std::vector<Mat>& T_units, int nA, double tol_rank)
{
    int h = static_cast<int>(T_units.at(0).rows());
    // Choi matrix sum_jl E_jl (x) T(E_jl), index j*h + p.
    Mat C(nA * h, nA * h);
    for (int j = 0; j < nA; ++j)
        for (int l = 0; l < nA; ++l) C.block(j * h, l * h, h, h) = T_units[j + nA * l];
    C = (0.5 * (C + C.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(C);
    const auto& ev = es.eigenvalues();
    double lmax = std::max(ev.maxCoeff(), 0.0);
    if (ev.minCoeff() < -1e-8 * std::max(lmax, 1.0)) throw NumericError("Choi matrix is not positive: input map is not CP");
    std::vector<int> keep;
    for (int k = 0; k < nA * h; ++k)
        if (ev(k) > tol_rank * lmax) keep.push_back(k);
    int m = static_cast<int>(keep.size());
    // K = C^nA (x) C^m, (V xi_q)_{l,k} = sqrt(lambda_k) conj(w_k(l*h + q)), pi_L(a) = a (x) 1.
    Stinespring out;
    out.rank = m;
    out.V = Mat::Zero(nA * m, h);
    for (int k = 0; k < m; ++k) {
        double s = std::sqrt(ev(keep[k]));
        for (int l = 0; l < nA; ++l)
            for (int q = 0; q < h; ++q) out.V(l * m + k, q) = s * std::conj(es.eigenvectors()(l * h + q, keep[k]));
    }
    Mat id = Mat::Identity(m, m);
    for (int b = 0; b < nA; ++b)
        for (int a = 0; a < nA; ++a) out.piL_units.push_back(Eigen::kroneckerProduct(matrix_unit(nA, a, b), id).eval());
    return out;
}

namespace {

Representation dilate(int nA, int nB, const Vec& Omega, const std::vector<Mat>& piR_units, const CPTuple& t,
                      double tol_rank)
{
    Representation r;
    r.nA = nA;
    r.nB = nB;
    r.Omega = Omega;
    r.piR_units = piR_units;
    std::vector<Mat> T;
    for (int j = 0; j < nA; ++j)
        for (int i = 0; i < nA; ++i) T.push_back(combine(piR_units, t.apply(matrix_unit(nA, i, j))));
    Stinespring s = stinespring(T, nA, tol_rank);
    r.V = s.V;
    r.piL_units = s.piL_units;
    return r;
}

}  // namespace

Representation minimal_representation(const CPTuple& t, double tol_rank)
{
    Gns g = gns(t.state);
    return dilate(t.nA, t.nB, g.Omega, g.piR_units, t, tol_rank);
}

Representation augment_defining(const Representation& r)
{
    Representation out = r;
    out.V = Mat::Zero(r.k() + r.nA, r.h());
    out.V.topRows(r.k()) = r.V;
    for (int j = 0; j < r.nA; ++j)
        for (int i = 0; i < r.nA; ++i) out.piL_units[i + r.nA * j] = block_diag(r.piL_units[i + r.nA * j], matrix_unit(r.nA, i, j));
    return out;
}

Representation right_augmented_representation(const CPTuple& t, double tol_rank)
{
    Gns g = gns(t.state);
    Vec Omega = Vec::Zero(g.Omega.size() + t.nB);
    Omega.head(g.Omega.size()) = g.Omega;
    std::vector<Mat> units;
    for (int j = 0; j < t.nB; ++j)
        for (int i = 0; i < t.nB; ++i) units.push_back(block_diag(g.piR_units[i + t.nB * j], matrix_unit(t.nB, i, j)));
    return augment_defining(dilate(t.nA, t.nB, Omega, units, t, tol_rank));
}

Decomposition decompose(const Representation& r, double tol)
{
    Mat Hm = complement_basis(r.Omega, r.h());
    Mat M(r.k(), r.nA * r.nA * r.h());
    Mat Mm(r.k(), r.nA * r.nA * Hm.cols());
    for (int u = 0; u < r.nA * r.nA; ++u) {
        Mat piV = r.piL_units[u] * r.V;
        M.middleCols(u * r.h(), r.h()) = piV;
        Mm.middleCols(u * Hm.cols(), Hm.cols()) = piV * Hm;
    }
    Decomposition d;
    d.Lprime = complement_basis(range_basis(M, tol), r.k());
    d.Ldoubleprime = complement_basis(range_basis(Mm, tol), r.k());
    return d;
}

bool decomposition_faithful(const Representation& r, const Decomposition& d, double tol)
{
    if (d.Lprime.cols() == 0) return false;
    Mat imgs(d.Lprime.cols() * d.Lprime.cols(), r.nA * r.nA);
    for (int u = 0; u < r.nA * r.nA; ++u) imgs.col(u) = vec(Mat(d.Lprime.adjoint() * r.piL_units[u] * d.Lprime));
    return range_basis(imgs, tol).cols() == r.nA * r.nA;
}

FaithfulRepresentation faithful_representation(const CPTuple& t, double tol_rank)
{
    FaithfulRepresentation f;
    f.rep = minimal_representation(t, tol_rank);
    f.decomposition = decompose(f.rep, tol_rank);
    if (!decomposition_faithful(f.rep, f.decomposition, tol_rank)) {
        f.rep = augment_defining(f.rep);
        f.decomposition = decompose(f.rep, tol_rank);
        f.augmented = true;
    }
    return f;
}

double RepresentationCheck::max() const
{
    return std::max({state_error, isometry_error, compression_error, right_hom_error, left_hom_error});
}

RepresentationCheck check_representation(const Representation& r, const CPTuple& t)
{
    RepresentationCheck c;
    c.isometry_error = (r.V.adjoint() * r.V - Mat::Identity(r.h(), r.h())).norm();
    for (int j = 0; j < r.nB; ++j)
        for (int i = 0; i < r.nB; ++i) {
            Mat e = matrix_unit(r.nB, i, j);
            cd s = r.Omega.dot(r.piR_units[i + r.nB * j] * r.Omega);
            c.state_error = std::max(c.state_error, std::abs(s - t.omega(e)));
            for (int l = 0; l < r.nB; ++l)
                for (int k = 0; k < r.nB; ++k) {
                    Mat lhs = r.piR_units[i + r.nB * j] * r.piR_units[k + r.nB * l];
                    Mat rhs = j == k ? r.piR_units[i + r.nB * l] : Mat::Zero(lhs.rows(), lhs.cols());
                    c.right_hom_error = std::max(c.right_hom_error, (lhs - rhs).norm());
                }
            c.right_hom_error =
                std::max(c.right_hom_error, (r.piR_units[i + r.nB * j].adjoint() - r.piR_units[j + r.nB * i]).norm());
        }
    for (int j = 0; j < r.nA; ++j)
        for (int i = 0; i < r.nA; ++i) {
            Mat e = matrix_unit(r.nA, i, j);
            Mat comp = r.V.adjoint() * r.piL_units[i + r.nA * j] * r.V - r.piR(t.apply(e));
            c.compression_error = std::max(c.compression_error, comp.norm());
            for (int l = 0; l < r.nA; ++l)
                for (int k = 0; k < r.nA; ++k) {
                    Mat lhs = r.piL_units[i + r.nA * j] * r.piL_units[k + r.nA * l];
                    Mat rhs = j == k ? r.piL_units[i + r.nA * l] : Mat::Zero(lhs.rows(), lhs.cols());
                    c.left_hom_error = std::max(c.left_hom_error, (lhs - rhs).norm());
                }
            c.left_hom_error =
                std::max(c.left_hom_error, (r.piL_units[i + r.nA * j].adjoint() - r.piL_units[j + r.nA * i]).norm());
        }
    return c;
}

}  // namespace sauv
