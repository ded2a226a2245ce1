#include "sauv/tower.hpp"

#include "sauv/errors.hpp"

#include <algorithm>

namespace sauv {

namespace {

Mat unit_combination(const std::vector<Mat>& units, const Mat& x)
{
    int n = static_cast<int>(x.rows());
    Mat out = Mat::Zero(units.at(0).rows(), units.at(0).cols());
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (x(i, j) != cd(0)) out += x(i, j) * units[i + n * j];
    return out;
}

Mat pseudo_inverse(const Mat& M, double tol)
{
    Eigen::BDCSVD<Mat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    double cut = sv.size() ? tol * sv(0) : 0;
    for (long i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) inv(i) = 1 / sv(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

bool contains(const std::vector<Rational>& set, const Rational& t)
{
    return std::find(set.begin(), set.end(), t) != set.end();
}

}  // namespace

DilationTower::DilationTower(const MatModel& m, std::vector<Rational> gamma, const TowerOptions& opt)
    : model_(m), opt_(opt)
{
    if (gamma.empty() || gamma.size() > 3) throw std::invalid_argument("tower time sets must have 1 to 3 points");
    if (opt.max_word_len < 1 || opt.max_word_len > 4) throw std::invalid_argument("max word length must be in 1..4");
    std::sort(gamma.begin(), gamma.end());
    if (std::adjacent_find(gamma.begin(), gamma.end()) != gamma.end())
        throw std::invalid_argument("tower time set has repeated points");
    if (gamma.front() < 0) throw std::invalid_argument("tower time set has a negative point");
    gamma_ = gamma;
    offset_ = gamma.front();
    for (const auto& t : gamma) shifted_.push_back(t - offset_);

    gns_ = gns(m.state());
    gns_solver_ = UnitSolver(gns_.piR_units, m.n());
    // {0, t}: product for phi_t. {0, s, t}: the inner product is the tail {0, t - s}.
    if (shifted_.size() == 2)
        inner_.emplace(SauvageotProduct::minimal(tuple_from_model(m, to_double(shifted_[1])), opt.max_word_len));
    else if (shifted_.size() == 3)
        inner_.emplace(
            SauvageotProduct::minimal(tuple_from_model(m, to_double(shifted_[2] - shifted_[1])), opt.max_word_len));
}

Mat DilationTower::retract(const std::vector<Rational>& times, const std::vector<Mat>& elems,
                           TowerDiagnostics* diag) const
{
    if (times.size() != elems.size()) throw std::invalid_argument("word needs as many times as elements");
    if (static_cast<int>(times.size()) > opt_.max_word_len)
        throw TruncationOverflow("word longer than the tower's maximal word length");
    std::vector<Rational> local;
    for (const auto& t : times) {
        if (!contains(gamma_, t)) throw std::invalid_argument("word time " + to_string(t) + " is not in the tower's time set");
        local.push_back(t - offset_);
    }
    TowerDiagnostics d;
    Mat out;
    if (shifted_.size() == 1) {
        d.levels = 0;
        out = Mat::Identity(model_.n(), model_.n());
        for (const auto& a : elems) out = (out * a).eval();
    } else if (shifted_.size() == 2) {
        out = retract_two(local, elems, &d);
    } else {
        out = retract_three(local, elems, &d);
    }
    if (offset_ != 0) out = model_.phi(to_double(offset_), out);
    if (diag) *diag = d;
    return out;
}

Mat DilationTower::retract_two(const std::vector<Rational>& times, const std::vector<Mat>& elems,
                               TowerDiagnostics* diag) const
{
    std::vector<SpaceLetter> word;
    for (std::size_t i = 0; i < times.size(); ++i)
        word.push_back(times[i] == 0 ? inner_->psi_R(elems[i]) : inner_->psi_L(elems[i]));
    if (word.empty()) return Mat::Identity(model_.n(), model_.n());
    auto r = inner_->theta(word);
    diag->levels = 1;
    diag->residual = r.residual;
    return r.value;
}

Mat DilationTower::retract_three(const std::vector<Rational>& times, const std::vector<Mat>& elems,
                                 TowerDiagnostics* diag) const
{
    const Rational& s = shifted_[1];
    const int n = static_cast<int>(elems.size());
    const int nA = model_.n();
    if (n == 0) return Mat::Identity(nA, nA);

    std::vector<int> pos;  // positions of positive-time letters
    for (int i = 0; i < n; ++i)
        if (times[i] != 0) pos.push_back(i);
    const int np = static_cast<int>(pos.size());
    const int nS = 1 << np;

    // Level 1: vectors x_S u_j for the ordered products x_S of positive letters, S a subset of pos.
    const SauvageotProduct& P1 = *inner_;
    const ProductSpace& S1 = P1.space();
    const int h1 = S1.h();
    std::vector<std::vector<PSVector>> xs(nS);
    for (int mask = 0; mask < nS; ++mask) {
        std::vector<SpaceLetter> word;
        for (int b = 0; b < np; ++b) {
            if (!(mask >> b & 1)) continue;
            int i = pos[b];
            word.push_back(times[i] == s ? P1.psi_R(elems[i]) : P1.psi_L(elems[i]));
        }
        for (int j = 0; j < h1; ++j) {
            PSVector v = S1.from_H(Vec::Unit(h1, j));
            S1.apply(word, v);
            xs[mask].push_back(std::move(v));
        }
    }

    // Gram kernel <x_S (x) h_p, x_S' (x) h_q> = pi_R(phi_s(eps(x_S^* x_S')))_{pq} on the GNS space of omega.
    const int h2 = static_cast<int>(gns_.Omega.size());
    const int N = nS * h2;
    Mat G(N, N);
    double residual = 0;
    for (int a = 0; a < nS; ++a)
        for (int b = a; b < nS; ++b) {
            Mat Y(h1, h1);
            for (int i = 0; i < h1; ++i)
                for (int j = 0; j < h1; ++j) Y(i, j) = inner(xs[a][i], xs[b][j]);
            auto r = P1.retract_H(Y);
            residual = std::max(residual, r.residual);
            Mat block = unit_combination(gns_.piR_units, model_.phi(to_double(s), r.value));
            G.block(a * h2, b * h2, h2, h2) = block;
            if (b != a) G.block(b * h2, a * h2, h2, h2) = block.adjoint();
        }
    G = (0.5 * (G + G.adjoint())).eval();

    // Coordinates on K: the empty-word block is V H itself; the rest is read off the Schur complement,
    // with columns normalized before the rank cutoff.
    const int M = N - h2;
    Mat B = G.topRightCorner(h2, M);
    Mat C = (G.bottomRightCorner(M, M) - B.adjoint() * B).eval();
    Eigen::VectorXd scale(M);
    for (int i = 0; i < M; ++i) scale(i) = 1.0 / std::sqrt(std::max(G(h2 + i, h2 + i).real(), 1e-300));
    Mat Cs = scale.asDiagonal() * C * scale.asDiagonal();
    Cs = (0.5 * (Cs + Cs.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es;
    if (M) es.compute(Cs);
    const Eigen::VectorXd lam = M ? es.eigenvalues() : Eigen::VectorXd();
    double lmax = M ? std::max(lam.maxCoeff(), 1.0) : 1.0;
    double lmin_rel = M ? std::min(0.0, lam.minCoeff() / lmax) : 0.0;
    if (lmin_rel < -opt_.gram_tol) throw NumericError("Gram kernel of the tower is not positive semidefinite");
    std::vector<int> keep;
    for (int i = 0; i < M; ++i)
        if (lam(i) > opt_.tol_rank * lmax) keep.push_back(i);
    const int r = h2 + static_cast<int>(keep.size());
    Mat J = Mat::Zero(r, N);
    J.topLeftCorner(h2, h2).setIdentity();
    J.topRightCorner(h2, M) = B;
    Eigen::VectorXd inv_scale = scale.cwiseInverse();
    for (std::size_t i = 0; i < keep.size(); ++i)
        J.block(h2 + static_cast<long>(i), h2, 1, M) =
            std::sqrt(lam(keep[i])) * es.eigenvectors().col(keep[i]).adjoint() * inv_scale.asDiagonal();

    // Level 2: K = span of the x_S (x) h, V h = 1 (x) h, positive letters act by x_S (x) h -> x_{i,S} (x) h.
    Mat V2 = J.leftCols(h2);
    ProductSpace S2(gns_.Omega, V2, n);
    std::vector<SpaceLetter> word;
    for (int i = 0; i < n; ++i) {
        if (times[i] == 0) {
            word.push_back({false, unit_combination(gns_.piR_units, elems[i])});
            continue;
        }
        int b = static_cast<int>(std::find(pos.begin(), pos.end(), i) - pos.begin());
        std::vector<int> domain;
        for (int mask = 0; mask < nS; ++mask)
            if ((mask & ((2 << b) - 1)) == 0) domain.push_back(mask);
        Mat JD(r, static_cast<long>(domain.size()) * h2), JT(r, static_cast<long>(domain.size()) * h2);
        for (std::size_t c = 0; c < domain.size(); ++c) {
            JD.middleCols(static_cast<long>(c) * h2, h2) = J.middleCols(domain[c] * h2, h2);
            JT.middleCols(static_cast<long>(c) * h2, h2) = J.middleCols((domain[c] | (1 << b)) * h2, h2);
        }
        word.push_back({true, JT * pseudo_inverse(JD, opt_.tol_rank)});
    }
    double res2 = 0;
    Mat out = gns_solver_.solve(S2.compress_H(word), &res2);

    diag->levels = 2;
    diag->word_basis = nS;
    diag->gram_size = N;
    diag->gram_rank = r;
    diag->gram_min_eigenvalue = lmin_rel;
    diag->residual = std::max(residual, res2);
    return out;
}

Mat word_expectation(const DilationTower& tower, const std::vector<Rational>& times, const std::vector<Mat>& elems,
                     TowerDiagnostics* diag)
{
    const auto& g = tower.gamma();
    if (times.empty()) return tower.retract(times, elems, diag);
    bool inside = std::all_of(times.begin(), times.end(), [&](const Rational& t) { return contains(g, t); });
    if (inside) return tower.retract(times, elems, diag);
    // Shift covariance: drop the smallest time and restore it with phi.
    Rational tau = *std::min_element(times.begin(), times.end());
    std::vector<Rational> local;
    for (const auto& t : times) local.push_back(t - tau);
    bool shifted_inside = std::all_of(local.begin(), local.end(), [&](const Rational& t) { return contains(g, t); });
    if (!shifted_inside) throw std::invalid_argument("word times are not a shift of a subset of the tower's time set");
    return tower.model().phi(to_double(tau), tower.retract(local, elems, diag));
}

}  // namespace sauv
