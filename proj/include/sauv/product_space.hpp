#pragma once

// Truncated product Hilbert space  h = H^- * L  built from (H, Omega, K, V), with the two staggered
// representations: Phi(b) for operators b on H and Psi(a) for operators a on K.
//
// Layout: the H block, then for 0 <= n <= depth the blocks E_n = L+^{(x)n} (x) L and F_n = H^- (x) E_n.
// Rows  {H}, {E_n, F_n} are Phi-invariant; columns {H, E_0}, {F_n, E_{n+1}} are Psi-invariant.
// Internal coordinates: H in the basis [Omega, H^-], K in [V Omega, V H^-, L], L+ in [Omega_L, L].
// E_{n+1} is stored with the new (leftmost) L+ factor as the fastest index.

#include "sauv/quantum.hpp"

#include <optional>
#include <random>
#include <vector>

namespace sauv {

struct PSVector {
    Vec H;
    std::vector<Vec> E;  // E[n], empty means zero
    std::vector<Mat> F;  // F[n] is (h-1) x e_n, empty means zero

    int top_level() const;  // highest n with a nonzero E_n or F_n block, -1 if only H
    double norm() const;
    PSVector& operator+=(const PSVector& o);
    PSVector& operator-=(const PSVector& o);
    PSVector& operator*=(cd s);
};

cd inner(const PSVector& x, const PSVector& y);

// A letter of a word acting on the product space: Phi(op) if right, Psi(op) if left.
// Operators are given in the caller's coordinates on H (right) or K (left).
struct SpaceLetter {
    bool left = false;
    Mat op;
};

class ProductSpace {
public:
    // Omega in H, V: H -> K isometry. Lprime (K coordinates, inside L) and Ldoubleprime (K coordinates, inside
    // L+ = L + C V Omega) are optional.
    ProductSpace(const Vec& Omega, const Mat& V, int depth, const Mat& Lprime = Mat(), const Mat& Ldoubleprime = Mat(),
                 const Mat& Hprime = Mat(), double tol = 1e-9);

    int h() const { return h_; }
    int k() const { return k_; }
    int dim_L() const { return dL_; }
    int depth() const { return depth_; }
    long dim_E(int n) const;
    long dim_F(int n) const { return static_cast<long>(h_ - 1) * dim_E(n); }
    long dim_total() const;
    int dim_Hprime() const { return static_cast<int>(Hp_.cols()); }
    int dim_Lprime() const { return static_cast<int>(Lp_.cols()); }
    int dim_Ldoubleprime() const { return static_cast<int>(Lpp_.cols()); }

    PSVector zero() const;
    // Vector in the H block, given in the caller's H coordinates.
    PSVector from_H(const Vec& h) const;
    Vec H_part(const PSVector& v) const;  // caller's coordinates
    // Basis vector j of H' (x) E_n, j = p + dim H' * m with m the E_n index.
    PSVector Hprime_basis(int n, long j) const;
    // Basis vector j of E'_n: n = 0 uses L', n >= 1 uses L'' (x) E_{n-1}.
    PSVector Eprime_basis(int n, long j) const;
    long dim_Fprime(int n) const { return static_cast<long>(dim_Hprime()) * dim_E(n); }
    long dim_Eprime(int n) const;
    PSVector random_Fprime(int n, std::mt19937_64& rng) const;
    PSVector random_Eprime(int n, std::mt19937_64& rng) const;

    // Coordinates of q_n v in the basis of Hprime_basis, and of p_n v in the basis of Eprime_basis.
    Vec coords_Fprime(int n, const PSVector& v) const;
    Vec coords_Eprime(int n, const PSVector& v) const;
    PSVector project_Fprime(int n, const PSVector& v) const;  // q_n
    PSVector project_Eprime(int n, const PSVector& v) const;  // p_n

    void apply_Phi(const Mat& b, PSVector& v) const;  // b on H, caller's coordinates
    void apply_Psi(const Mat& a, PSVector& v) const;  // a on K, caller's coordinates
    // The rightmost letter acts first.
    void apply(const std::vector<SpaceLetter>& word, PSVector& v) const;

    // P_H x P_H as an h x h matrix in the caller's H coordinates.
    Mat compress_H(const std::vector<SpaceLetter>& word) const;
    // Restriction of p_0 x p_0 to L', in an orthonormal basis of L'.
    Mat compress_Lprime(const std::vector<SpaceLetter>& word) const;
    // Matrix of q_n x q_n on H' (x) E_n (exact, enumerates the basis).
    Mat corner_block_Fprime(const std::vector<SpaceLetter>& word, int n) const;
    Mat corner_block_Eprime(const std::vector<SpaceLetter>& word, int n) const;

    // Caller's K-coordinate basis of L' (orthonormal columns).
    const Mat& Lprime_K() const { return LpK_; }

private:
    Mat to_internal_H(const Mat& b) const { return UH_.adjoint() * b * UH_; }
    Mat to_internal_K(const Mat& a) const { return UK_.adjoint() * a * UK_; }
    void apply_Phi_internal(const Mat& b, PSVector& v) const;
    void apply_Psi_internal(const Mat& a, PSVector& v) const;
    void ensure_E(PSVector& v, int n) const;
    void ensure_F(PSVector& v, int n) const;

    int h_ = 1;
    int k_ = 1;
    int dL_ = 0;
    int depth_ = 1;
    double tol_ = 1e-9;
    Mat UH_;   // columns: Omega, basis of H^-
    Mat UK_;   // columns: V Omega, V H^-, basis of L
    Mat Hp_;   // H' in H^- coordinates, (h-1) x dim H'
    Mat Lp_;   // L' in L coordinates
    Mat Lpp_;  // L'' in L+ coordinates
    Mat LpK_;
};

// Least-squares inverse of a linear map M_n -> matrices given on matrix units.
class UnitSolver {
public:
    UnitSolver() = default;
    UnitSolver(const std::vector<Mat>& images, int n);
    // x with sum x_ij images_ij closest to target; residual is the Frobenius misfit.
    Mat solve(const Mat& target, double* residual = nullptr) const;

private:
    int n_ = 0;
    Mat A_;
    Eigen::CompleteOrthogonalDecomposition<Mat> qr_;
};

// The product of a CP-tuple realized by a representation: psi_L, psi_R, the corners and the retractions.
class SauvageotProduct {
public:
    SauvageotProduct(const CPTuple& t, const Representation& r, int depth,
                     const std::optional<Decomposition>& d = std::nullopt);
    // GNS and minimal Stinespring; H' = 0 and no decomposition.
    static SauvageotProduct minimal(const CPTuple& t, int depth);
    // Augmented so that a faithful decomposition exists.
    static SauvageotProduct faithful(const CPTuple& t, int depth);
    // GNS plus the defining representation of B (so H' != 0), augmented as above.
    static SauvageotProduct right_augmented(const CPTuple& t, int depth);

    const CPTuple& tuple() const { return tuple_; }
    const Representation& representation() const { return rep_; }
    const ProductSpace& space() const { return space_; }
    bool has_decomposition() const { return decomposition_.has_value(); }

    SpaceLetter psi_L(const Mat& a) const { return {true, rep_.piL(a)}; }
    SpaceLetter psi_R(const Mat& b) const { return {false, rep_.piR(b)}; }

    struct Retraction {
        Mat value;
        double residual = 0;
    };
    // theta = (C o psi_R)^{-1} o C, read off the H block.
    Retraction theta(const std::vector<SpaceLetter>& word) const;
    // b with pi_R(b) closest to an operator on H given in the caller's coordinates.
    Retraction retract_H(const Mat& compressed) const;
    // theta' = (C' o psi_L)^{-1} o C', read off the L' block.
    Retraction theta_left(const std::vector<SpaceLetter>& word) const;

    // v -> (psi_L(a) - psi_R(phi(a))) psi_R(b) v
    void apply_centered_pair(const Mat& a, const Mat& b, PSVector& v) const;

    struct Residual {
        double H = 0;          // |P_H X P_H|
        double exact = 0;      // max over exactly enumerated corner blocks
        double sampled = 0;    // max |p X v| over sampled unit vectors v in deeper blocks
        int exact_blocks = 0;
        int samples = 0;
        double max() const { return std::max(H, std::max(exact, sampled)); }
    };
    struct ResidualOptions {
        int exact_levels = 1;  // corner blocks 0..exact_levels-1 enumerated
        int sampled_levels = 0;  // further levels tested with random vectors
        int samples = 2;
        std::uint64_t seed = 7;
    };
    // C[prod_k (psi_L(a_k) - psi_R(phi(a_k))) psi_R(b_k)] with b_k centered.
    Residual right_liberation_residual(const std::vector<Mat>& as, const std::vector<Mat>& bs,
                                       const ResidualOptions& opt) const;
    // C'[psi_R(b_0) prod_k (psi_L(a_k) - psi_R(phi(a_k))) psi_R(b_k)] with b_0..b_n centered; bs has n+1 entries.
    Residual left_liberation_residual(const std::vector<Mat>& as, const std::vector<Mat>& bs,
                                      const ResidualOptions& opt) const;

private:
    CPTuple tuple_;
    Representation rep_;
    std::optional<Decomposition> decomposition_;
    ProductSpace space_;
    UnitSolver right_solver_;
    UnitSolver left_solver_;
};

// Orthonormal basis of H' = H - span pi_R(B) Omega in H coordinates.
Mat hprime_basis(const Representation& r, double tol = 1e-9);

}  // namespace sauv
