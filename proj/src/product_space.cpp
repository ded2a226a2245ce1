#include "sauv/product_space.hpp"

#include "sauv/errors.hpp"

#include <cmath>
#include <string>

namespace sauv {

int PSVector::top_level() const
{
    int top = -1;
    for (std::size_t n = 0; n < E.size(); ++n)
        if (E[n].size() && E[n].norm() > 0) top = static_cast<int>(n);
    for (std::size_t n = 0; n < F.size(); ++n)
        if (F[n].size() && F[n].norm() > 0) top = std::max(top, static_cast<int>(n));
    return top;
}

double PSVector::norm() const { return std::sqrt(std::real(inner(*this, *this))); }

namespace {

template <class T>
void add_block(T& x, const T& y, cd s)
{
    if (!y.size()) return;
    if (!x.size())
        x = s * y;
    else
        x += s * y;
}

void add_into(PSVector& x, const PSVector& y, cd s)
{
    x.H += s * y.H;
    if (x.E.size() < y.E.size()) x.E.resize(y.E.size());
    if (x.F.size() < y.F.size()) x.F.resize(y.F.size());
    for (std::size_t n = 0; n < y.E.size(); ++n) add_block(x.E[n], y.E[n], s);
    for (std::size_t n = 0; n < y.F.size(); ++n) add_block(x.F[n], y.F[n], s);
}

}  // namespace

PSVector& PSVector::operator+=(const PSVector& o)
{
    add_into(*this, o, 1.0);
    return *this;
}

PSVector& PSVector::operator-=(const PSVector& o)
{
    add_into(*this, o, -1.0);
    return *this;
}

PSVector& PSVector::operator*=(cd s)
{
    H *= s;
    for (auto& e : E) e *= s;
    for (auto& f : F) f *= s;
    return *this;
}

cd inner(const PSVector& x, const PSVector& y)
{
    cd s = x.H.dot(y.H);
    for (std::size_t n = 0; n < std::min(x.E.size(), y.E.size()); ++n)
        if (x.E[n].size() && y.E[n].size()) s += x.E[n].dot(y.E[n]);
    for (std::size_t n = 0; n < std::min(x.F.size(), y.F.size()); ++n)
        if (x.F[n].size() && y.F[n].size()) s += (x.F[n].adjoint() * y.F[n]).trace();
    return s;
}

namespace {

// Orthonormal basis whose first column is u / |u|, completed to span the whole space.
Mat frame_with_first(const Vec& u)
{
    int n = static_cast<int>(u.size());
    Mat Q(n, 1);
    Q.col(0) = u / u.norm();
    Mat rest = complement_basis(Q, n);
    Mat out(n, n);
    out.col(0) = Q.col(0);
    out.rightCols(n - 1) = rest;
    return out;
}

}  // namespace

ProductSpace::ProductSpace(const Vec& Omega, const Mat& V, int depth, const Mat& Lprime, const Mat& Ldoubleprime,
                           const Mat& Hprime, double tol)
    : h_(static_cast<int>(Omega.size())), k_(static_cast<int>(V.rows())), depth_(depth), tol_(tol)
{
    if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
    if (V.cols() != h_) throw std::invalid_argument("V must map H into K");
    if ((V.adjoint() * V - Mat::Identity(h_, h_)).norm() > 1e-8) throw NumericError("V is not an isometry");
    dL_ = k_ - h_;
    UH_ = frame_with_first(Omega);
    UK_ = Mat(k_, k_);
    Mat VU = V * UH_;
    UK_.leftCols(h_) = VU;
    if (dL_ > 0) UK_.rightCols(dL_) = complement_basis(VU, k_);
    if (Hprime.size()) {
        Hp_ = (UH_.adjoint() * Hprime).bottomRows(h_ - 1);
        if (Hp_.rows() && (UH_.adjoint() * Hprime).row(0).norm() > 1e-8)
            throw std::invalid_argument("H' must be orthogonal to Omega");
    } else {
        Hp_ = Mat(h_ - 1, 0);
    }
    if (Lprime.size()) {
        Mat c = UK_.adjoint() * Lprime;
        if (c.topRows(h_).norm() > 1e-8) throw std::invalid_argument("L' must lie in L");
        Lp_ = c.bottomRows(dL_);
        LpK_ = Lprime;
    } else {
        Lp_ = Mat(dL_, 0);
        LpK_ = Mat(k_, 0);
    }
    if (Ldoubleprime.size()) {
        Mat c = UK_.adjoint() * Ldoubleprime;
        if (c.middleRows(1, h_ - 1).norm() > 1e-8) throw std::invalid_argument("L'' must lie in L + C V Omega");
        Lpp_ = Mat(dL_ + 1, c.cols());
        Lpp_.row(0) = c.row(0);
        Lpp_.bottomRows(dL_) = c.bottomRows(dL_);
    } else {
        Lpp_ = Mat(dL_ + 1, 0);
    }
}

long ProductSpace::dim_E(int n) const
{
    long d = dL_;
    for (int i = 0; i < n; ++i) d *= dL_ + 1;
    return d;
}

long ProductSpace::dim_total() const
{
    long d = h_;
    for (int n = 0; n <= depth_; ++n) d += dim_E(n) + dim_F(n);
    return d;
}

long ProductSpace::dim_Eprime(int n) const
{
    return n == 0 ? dim_Lprime() : static_cast<long>(dim_Ldoubleprime()) * dim_E(n - 1);
}

PSVector ProductSpace::zero() const
{
    PSVector v;
    v.H = Vec::Zero(h_);
    return v;
}

PSVector ProductSpace::from_H(const Vec& h) const
{
    PSVector v = zero();
    v.H = UH_.adjoint() * h;
    return v;
}

Vec ProductSpace::H_part(const PSVector& v) const { return UH_ * v.H; }

void ProductSpace::ensure_E(PSVector& v, int n) const
{
    if (static_cast<int>(v.E.size()) <= n) v.E.resize(n + 1);
    if (!v.E[n].size()) v.E[n] = Vec::Zero(dim_E(n));
}

void ProductSpace::ensure_F(PSVector& v, int n) const
{
    if (static_cast<int>(v.F.size()) <= n) v.F.resize(n + 1);
    if (!v.F[n].size()) v.F[n] = Mat::Zero(h_ - 1, dim_E(n));
}

PSVector ProductSpace::Hprime_basis(int n, long j) const
{
    if (n < 0 || n > depth_) throw std::out_of_range("level out of range");
    int dp = dim_Hprime();
    if (j < 0 || j >= dim_Fprime(n)) throw std::out_of_range("basis index out of range");
    PSVector v = zero();
    ensure_F(v, n);
    v.F[n].col(j / dp) = Hp_.col(j % dp);
    return v;
}

PSVector ProductSpace::Eprime_basis(int n, long j) const
{
    if (n < 0 || n > depth_) throw std::out_of_range("level out of range");
    if (j < 0 || j >= dim_Eprime(n)) throw std::out_of_range("basis index out of range");
    PSVector v = zero();
    ensure_E(v, n);
    if (n == 0) {
        v.E[0] = Lp_.col(j);
    } else {
        int dpp = dim_Ldoubleprime();
        Eigen::Map<Mat> M(v.E[n].data(), dL_ + 1, dim_E(n - 1));
        M.col(j / dpp) = Lpp_.col(j % dpp);
    }
    return v;
}

namespace {

Vec random_unit(long n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Vec v(n);
    for (long i = 0; i < n; ++i) v[i] = cd(g(rng), g(rng));
    return v / v.norm();
}

}  // namespace

PSVector ProductSpace::random_Fprime(int n, std::mt19937_64& rng) const
{
    PSVector v = zero();
    if (!dim_Fprime(n)) return v;
    ensure_F(v, n);
    Vec c = random_unit(dim_Fprime(n), rng);
    Eigen::Map<Mat> C(c.data(), dim_Hprime(), dim_E(n));
    v.F[n] = Hp_ * C;
    return v;
}

PSVector ProductSpace::random_Eprime(int n, std::mt19937_64& rng) const
{
    PSVector v = zero();
    if (!dim_Eprime(n)) return v;
    ensure_E(v, n);
    Vec c = random_unit(dim_Eprime(n), rng);
    if (n == 0) {
        v.E[0] = Lp_ * c;
    } else {
        Eigen::Map<Mat> C(c.data(), dim_Ldoubleprime(), dim_E(n - 1));
        Eigen::Map<Mat> M(v.E[n].data(), dL_ + 1, dim_E(n - 1));
        M = Lpp_ * C;
    }
    return v;
}

PSVector ProductSpace::project_Fprime(int n, const PSVector& v) const
{
    PSVector out = zero();
    if (n < static_cast<int>(v.F.size()) && v.F[n].size() && dim_Hprime()) {
        ensure_F(out, n);
        out.F[n] = Hp_ * (Hp_.adjoint() * v.F[n]);
    }
    return out;
}

PSVector ProductSpace::project_Eprime(int n, const PSVector& v) const
{
    PSVector out = zero();
    if (n < static_cast<int>(v.E.size()) && v.E[n].size() && dim_Eprime(n)) {
        ensure_E(out, n);
        if (n == 0) {
            out.E[0] = Lp_ * (Lp_.adjoint() * v.E[0]);
        } else {
            Eigen::Map<const Mat> M(v.E[n].data(), dL_ + 1, dim_E(n - 1));
            Eigen::Map<Mat> O(out.E[n].data(), dL_ + 1, dim_E(n - 1));
            O = Lpp_ * (Lpp_.adjoint() * M);
        }
    }
    return out;
}

void ProductSpace::apply_Phi(const Mat& b, PSVector& v) const { apply_Phi_internal(to_internal_H(b), v); }

void ProductSpace::apply_Psi(const Mat& a, PSVector& v) const { apply_Psi_internal(to_internal_K(a), v); }

void ProductSpace::apply_Phi_internal(const Mat& b, PSVector& v) const
{
    // H block: Phi(b) h = b h. Row n: H (x) E_n with Omega (x) xi identified with xi in E_n.
    v.H = b * v.H;
    std::size_t levels = std::max(v.E.size(), v.F.size());
    for (std::size_t n = 0; n < levels; ++n) {
        bool hasE = n < v.E.size() && v.E[n].size();
        bool hasF = n < v.F.size() && v.F[n].size();
        if (!hasE && !hasF) continue;
        long e = dim_E(static_cast<int>(n));
        Mat row(h_, e);
        row.setZero();
        if (hasE) row.row(0) = v.E[n].transpose();
        if (h_ > 1 && hasF) row.bottomRows(h_ - 1) = v.F[n];
        Mat out = b * row;
        ensure_E(v, static_cast<int>(n));
        v.E[n] = out.row(0).transpose();
        if (h_ > 1) {
            ensure_F(v, static_cast<int>(n));
            v.F[n] = out.bottomRows(h_ - 1);
        }
    }
}

void ProductSpace::apply_Psi_internal(const Mat& a, PSVector& v) const
{
    // Column -1: K = H + L with L = E_0.
    {
        Vec c(k_);
        c.head(h_) = v.H;
        if (dL_) c.tail(dL_) = (!v.E.empty() && v.E[0].size()) ? Vec(v.E[0]) : Vec::Zero(dL_);
        Vec out = a * c;
        v.H = out.head(h_);
        if (dL_ && (out.tail(dL_).norm() > 0 || (!v.E.empty() && v.E[0].size()))) {
            ensure_E(v, 0);
            v.E[0] = out.tail(dL_);
        }
    }
    // Column n: K (x) E_n = F_n + E_{n+1}, with V Omega -> Omega_L and L -> L in the new L+ factor.
    std::size_t levels = std::max(v.E.size(), v.F.size());
    for (std::size_t n = 0; n < levels; ++n) {
        int ni = static_cast<int>(n);
        bool hasF = n < v.F.size() && v.F[n].size();
        bool hasE = n + 1 < v.E.size() && v.E[n + 1].size();
        if (!hasF && !hasE) continue;
        long e = dim_E(ni);
        Mat C = Mat::Zero(k_, e);
        if (hasF) C.middleRows(1, h_ - 1) = v.F[n];
        if (hasE) {
            Eigen::Map<const Mat> M(v.E[n + 1].data(), dL_ + 1, e);
            C.row(0) = M.row(0);
            if (dL_) C.bottomRows(dL_) = M.bottomRows(dL_);
        }
        Mat out = a * C;
        if (h_ > 1) {
            ensure_F(v, ni);
            v.F[n] = out.middleRows(1, h_ - 1);
        }
        double spill = out.row(0).norm() + (dL_ ? out.bottomRows(dL_).norm() : 0.0);
        if (ni + 1 > depth_) {
            if (spill > 1e-13 * std::max(1.0, out.norm()))
                throw TruncationOverflow("operator spreads past truncation depth " + std::to_string(depth_));
            continue;
        }
        if (spill > 0 || hasE) {
            ensure_E(v, ni + 1);
            Eigen::Map<Mat> M(v.E[n + 1].data(), dL_ + 1, e);
            M.row(0) = out.row(0);
            if (dL_) M.bottomRows(dL_) = out.bottomRows(dL_);
        }
    }
}

void ProductSpace::apply(const std::vector<SpaceLetter>& word, PSVector& v) const
{
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        if (it->left)
            apply_Psi(it->op, v);
        else
            apply_Phi(it->op, v);
    }
}

Mat ProductSpace::compress_H(const std::vector<SpaceLetter>& word) const
{
    Mat X(h_, h_);
    for (int j = 0; j < h_; ++j) {
        PSVector v = from_H(Vec::Unit(h_, j));
        apply(word, v);
        X.col(j) = H_part(v);
    }
    return X;
}

Mat ProductSpace::compress_Lprime(const std::vector<SpaceLetter>& word) const
{
    int d = dim_Lprime();
    Mat X(d, d);
    for (int j = 0; j < d; ++j) {
        PSVector v = Eprime_basis(0, j);
        apply(word, v);
        Vec e0 = (!v.E.empty() && v.E[0].size()) ? Vec(v.E[0]) : Vec::Zero(dL_);
        X.col(j) = Lp_.adjoint() * e0;
    }
    return X;
}

Vec ProductSpace::coords_Fprime(int n, const PSVector& v) const
{
    Vec c = Vec::Zero(dim_Fprime(n));
    if (n < static_cast<int>(v.F.size()) && v.F[n].size() && c.size()) {
        Mat C = Hp_.adjoint() * v.F[n];
        c = Eigen::Map<Vec>(C.data(), C.size());
    }
    return c;
}

Vec ProductSpace::coords_Eprime(int n, const PSVector& v) const
{
    Vec c = Vec::Zero(dim_Eprime(n));
    if (n < static_cast<int>(v.E.size()) && v.E[n].size() && c.size()) {
        if (n == 0) {
            c = Lp_.adjoint() * v.E[0];
        } else {
            Eigen::Map<const Mat> M(v.E[n].data(), dL_ + 1, dim_E(n - 1));
            Mat C = Lpp_.adjoint() * M;
            c = Eigen::Map<Vec>(C.data(), C.size());
        }
    }
    return c;
}

Mat ProductSpace::corner_block_Fprime(const std::vector<SpaceLetter>& word, int n) const
{
    long d = dim_Fprime(n);
    Mat X(d, d);
    for (long j = 0; j < d; ++j) {
        PSVector v = Hprime_basis(n, j);
        apply(word, v);
        X.col(j) = coords_Fprime(n, v);
    }
    return X;
}

Mat ProductSpace::corner_block_Eprime(const std::vector<SpaceLetter>& word, int n) const
{
    long d = dim_Eprime(n);
    Mat X(d, d);
    for (long j = 0; j < d; ++j) {
        PSVector v = Eprime_basis(n, j);
        apply(word, v);
        X.col(j) = coords_Eprime(n, v);
    }
    return X;
}

UnitSolver::UnitSolver(const std::vector<Mat>& images, int n) : n_(n)
{
    if (static_cast<int>(images.size()) != n * n) throw std::invalid_argument("need n^2 matrix-unit images");
    long rows = images.front().size();
    A_ = Mat(rows, n * n);
    for (int u = 0; u < n * n; ++u) A_.col(u) = Eigen::Map<const Vec>(images[u].data(), rows);
    qr_.compute(A_);
}

Mat UnitSolver::solve(const Mat& target, double* residual) const
{
    Vec y = Eigen::Map<const Vec>(target.data(), target.size());
    Vec c = qr_.solve(y);
    if (residual) *residual = (A_ * c - y).norm();
    return Eigen::Map<Mat>(c.data(), n_, n_);
}

Mat hprime_basis(const Representation& r, double tol)
{
    Mat cyc(r.h(), r.nB * r.nB);
    for (int u = 0; u < r.nB * r.nB; ++u) cyc.col(u) = r.piR_units[u] * r.Omega;
    return complement_basis(range_basis(cyc, tol), r.h());
}

SauvageotProduct::SauvageotProduct(const CPTuple& t, const Representation& r, int depth,
                                   const std::optional<Decomposition>& d)
    : tuple_(t), rep_(r), decomposition_(d),
      space_(r.Omega, r.V, depth, d ? d->Lprime : Mat(), d ? d->Ldoubleprime : Mat(), hprime_basis(r))
{
    right_solver_ = UnitSolver(r.piR_units, r.nB);
    if (d && d->Lprime.cols()) {
        std::vector<Mat> restricted;
        for (const auto& u : r.piL_units) restricted.push_back(d->Lprime.adjoint() * u * d->Lprime);
        left_solver_ = UnitSolver(restricted, r.nA);
    }
}

SauvageotProduct SauvageotProduct::minimal(const CPTuple& t, int depth)
{
    return SauvageotProduct(t, minimal_representation(t), depth);
}

SauvageotProduct SauvageotProduct::faithful(const CPTuple& t, int depth)
{
    FaithfulRepresentation f = faithful_representation(t);
    return SauvageotProduct(t, f.rep, depth, f.decomposition);
}

SauvageotProduct SauvageotProduct::right_augmented(const CPTuple& t, int depth)
{
    Representation r = right_augmented_representation(t);
    return SauvageotProduct(t, r, depth, decompose(r));
}

SauvageotProduct::Retraction SauvageotProduct::theta(const std::vector<SpaceLetter>& word) const
{
    return retract_H(space_.compress_H(word));
}

SauvageotProduct::Retraction SauvageotProduct::retract_H(const Mat& compressed) const
{
    Retraction out;
    out.value = right_solver_.solve(compressed, &out.residual);
    return out;
}

SauvageotProduct::Retraction SauvageotProduct::theta_left(const std::vector<SpaceLetter>& word) const
{
    if (!decomposition_ || !decomposition_->Lprime.cols())
        throw std::logic_error("left retraction needs a decomposition with L' != 0");
    Mat X = space_.compress_Lprime(word);
    // compress_Lprime uses the internal L' basis; express it in the K-coordinate basis of the decomposition.
    Mat W = decomposition_->Lprime.adjoint() * space_.Lprime_K();
    Retraction out;
    out.value = left_solver_.solve(W * X * W.adjoint(), &out.residual);
    return out;
}

void SauvageotProduct::apply_centered_pair(const Mat& a, const Mat& b, PSVector& v) const
{
    space_.apply_Phi(rep_.piR(b), v);
    PSVector w = v;
    space_.apply_Psi(rep_.piL(a), w);
    space_.apply_Phi(rep_.piR(tuple_.apply(a)), v);
    w -= v;
    v = std::move(w);
}

namespace {

Mat centered(const CPTuple& t, const Mat& b) { return b - t.omega(b) * Mat::Identity(b.rows(), b.cols()); }

double opnorm(const Mat& X)
{
    if (!X.size()) return 0;
    Eigen::JacobiSVD<Mat> svd(X);
    return svd.singularValues()(0);
}

}  // namespace

SauvageotProduct::Residual SauvageotProduct::right_liberation_residual(const std::vector<Mat>& as,
                                                                       const std::vector<Mat>& bs,
                                                                       const ResidualOptions& opt) const
{
    if (as.size() != bs.size() || as.empty()) throw std::invalid_argument("need equally many a's and b's");
    std::vector<Mat> cb;
    for (const auto& b : bs) cb.push_back(centered(tuple_, b));
    auto run = [&](PSVector v) {
        for (std::size_t k = 0; k < as.size(); ++k) apply_centered_pair(as[k], cb[k], v);
        return v;
    };
    Residual r;
    int h = space_.h();
    Mat X(h, h);
    for (int j = 0; j < h; ++j) X.col(j) = space_.H_part(run(space_.from_H(Vec::Unit(h, j))));
    r.H = opnorm(X);
    for (int n = 0; n < opt.exact_levels; ++n) {
        long d = space_.dim_Fprime(n);
        if (!d) continue;
        Mat Q(d, d);
        for (long j = 0; j < d; ++j) Q.col(j) = space_.coords_Fprime(n, run(space_.Hprime_basis(n, j)));
        r.exact = std::max(r.exact, opnorm(Q));
        ++r.exact_blocks;
    }
    std::mt19937_64 rng(opt.seed);
    for (int n = opt.exact_levels; n < opt.exact_levels + opt.sampled_levels; ++n) {
        if (!space_.dim_Fprime(n)) continue;
        for (int s = 0; s < opt.samples; ++s) {
            r.sampled = std::max(r.sampled, space_.coords_Fprime(n, run(space_.random_Fprime(n, rng))).norm());
            ++r.samples;
        }
    }
    return r;
}

SauvageotProduct::Residual SauvageotProduct::left_liberation_residual(const std::vector<Mat>& as,
                                                                      const std::vector<Mat>& bs,
                                                                      const ResidualOptions& opt) const
{
    if (!decomposition_) throw std::logic_error("left liberation needs decomposition data");
    if (bs.size() != as.size() + 1 || as.empty()) throw std::invalid_argument("need n a's and n+1 b's");
    std::vector<Mat> cb;
    for (const auto& b : bs) cb.push_back(centered(tuple_, b));
    auto run = [&](PSVector v) {
        for (std::size_t k = 0; k < as.size(); ++k) apply_centered_pair(as[k], cb[k + 1], v);
        space_.apply_Phi(rep_.piR(cb[0]), v);
        return v;
    };
    Residual r;
    for (int n = 0; n < opt.exact_levels; ++n) {
        long d = space_.dim_Eprime(n);
        if (!d) continue;
        Mat P(d, d);
        for (long j = 0; j < d; ++j) P.col(j) = space_.coords_Eprime(n, run(space_.Eprime_basis(n, j)));
        r.exact = std::max(r.exact, opnorm(P));
        ++r.exact_blocks;
    }
    std::mt19937_64 rng(opt.seed);
    for (int n = opt.exact_levels; n < opt.exact_levels + opt.sampled_levels; ++n) {
        if (!space_.dim_Eprime(n)) continue;
        for (int s = 0; s < opt.samples; ++s) {
            r.sampled = std::max(r.sampled, space_.coords_Eprime(n, run(space_.random_Eprime(n, rng))).norm());
            ++r.samples;
        }
    }
    return r;
}

}  // namespace sauv
