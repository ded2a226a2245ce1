#pragma once

// Finite-dimensional models: matrix algebras, faithful states, CP semigroups,
// Choi checks, GNS and Gram-based minimal Stinespring dilations.

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <vector>

namespace sauv {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Superoperators from M_nin to M_nout act on column-major vec: vec(f(X)) = S vec(X).
Mat superop_from(const std::function<Mat(const Mat&)>& f, int n_in, int n_out);
Mat apply_superop(const Mat& S, const Mat& X, int n_out);
Mat matrix_unit(int n, int i, int j);
Mat vec(const Mat& X);
Mat unvec(const Mat& v, int n);

// Block matrix [phi(E_ij)]_{ij}, of size (n_in * n_out)^2.
Mat choi(const Mat& S, int n_in, int n_out);

struct CPCheck {
    bool cp = false;
    bool unital = false;
    double min_eigenvalue = 0;
    double unital_error = 0;
};
CPCheck is_cp_unital(const Mat& S, int n_in, int n_out, double tol);

Mat superop_exp(const Mat& L, double t);

Mat identity_superop(int n);
Mat transpose_superop(int n);
// L(a) = omega(a) 1 - a, with omega = Tr(state .)
Mat depolarizing_generator(const Mat& state);
// L(a) = sum_i V_i^* a V_i + k^* a + a k
Mat gks_generator(const std::vector<Mat>& kraus, const Mat& k);
// k = -1/2 sum V_i^* V_i + i H, which makes L unital.
Mat gks_unital_k(const std::vector<Mat>& kraus, const Mat& hamiltonian);

Mat sqrt_psd(const Mat& A);
// Orthonormal basis (columns) of the range of the columns of M, rank decided relative to the largest singular value.
Mat range_basis(const Mat& M, double rel_tol);
// Orthonormal basis of the orthogonal complement of span(cols of Q) in C^dim, Q orthonormal.
Mat complement_basis(const Mat& Q, int dim, double rel_tol = 1e-9);

class MatModel {
public:
    MatModel() = default;
    MatModel(Mat state, Mat generator, std::string generator_kind);

    int n() const { return static_cast<int>(state_.rows()); }
    const Mat& state() const { return state_; }
    const Mat& generator() const { return generator_; }
    const std::string& generator_kind() const { return generator_kind_; }

    cd omega(const Mat& a) const { return (state_ * a).trace(); }
    Mat phi(double t, const Mat& a) const;
    Mat phi_superop(double t) const;

    void bind(const std::string& name, Mat m) { bindings_[name] = std::move(m); }
    const Mat& binding(const std::string& name) const;
    bool has_binding(const std::string& name) const { return bindings_.count(name) != 0; }
    const std::map<std::string, Mat>& bindings() const { return bindings_; }

    struct Check {
        bool state_ok = false;   // positive definite, trace 1
        bool generator_ok = false;  // L1 = 0 and e^{tL} CP at sampled t
        double min_state_eigenvalue = 0;
        double generator_unit_error = 0;
        double min_choi_eigenvalue = 0;
        bool ok() const { return state_ok && generator_ok; }
    };
    Check validate(double tol = 1e-10, const std::vector<double>& times = {0.1, 0.5, 1.0}) const;

private:
    Mat state_;
    Mat generator_;
    std::string generator_kind_;
    std::map<std::string, Mat> bindings_;
    mutable std::mutex cache_mutex_;
    mutable std::map<double, Mat> cache_;

public:
    MatModel(const MatModel& o);
    MatModel& operator=(const MatModel& o);
};

// Standard complex Gaussian entries.
Mat random_matrix(int n, std::mt19937_64& rng);
// Binds a0..a8 and b0..b8 to random matrices.
void bind_random_symbols(MatModel& m, std::uint64_t seed);

// n = 2, state diag(2/3, 1/3), depolarizing generator.
MatModel default_model();
// The GKS model shipped with the default state; one Kraus operator and a Hamiltonian.
MatModel gks_default_model();
// Random faithful state and GKS generator; deterministic for a given seed.
MatModel random_model(int n, unsigned seed);

// (A, B, phi, omega) with A = M_nA, B = M_nB, phi given as a superoperator of size nB^2 x nA^2.
struct CPTuple {
    int nA = 1;
    int nB = 1;
    Mat phi;
    Mat state;  // density on B
    cd omega(const Mat& b) const { return (state * b).trace(); }
    Mat apply(const Mat& a) const { return apply_superop(phi, a, nB); }
};

CPTuple tuple_from_model(const MatModel& m, double t);

// (H, Omega, pi_R, K, V, pi_L). Representations of matrix algebras are stored by their values on matrix units
// (index i + n*j for E_ij).
struct Representation {
    int nA = 1;
    int nB = 1;
    Vec Omega;
    std::vector<Mat> piR_units;
    Mat V;
    std::vector<Mat> piL_units;

    int h() const { return static_cast<int>(Omega.size()); }
    int k() const { return static_cast<int>(V.rows()); }
    Mat piR(const Mat& b) const;
    Mat piL(const Mat& a) const;
};

struct Gns {
    Vec Omega;
    std::vector<Mat> piR_units;
};
// H = M_n with <x, y> = omega(x^* y), realized on vec(x state^{1/2}).
Gns gns(const Mat& state);

struct Stinespring {
    Mat V;
    std::vector<Mat> piL_units;
    int rank = 0;
};
// Minimal dilation of a CP map T: M_nA -> B(H) given on matrix units, in Kraus form:
// K = C^nA (x) C^rank and pi_L(a) = a (x) 1, with rank the rank of the Choi matrix.
Stinespring stinespring(const std::vector<Mat>& T_units, int nA, double tol_rank = 1e-9);

struct Decomposition {
    Mat Lprime;       // orthonormal columns in K coordinates, inside L = K - VH
    Mat Ldoubleprime;  // orthonormal columns in K coordinates, inside L^+ = L + C V Omega
};

Representation minimal_representation(const CPTuple& t, double tol_rank = 1e-9);
// Direct sum of the left representation with the defining representation of M_nA.
Representation augment_defining(const Representation& r);
// GNS direct sum with the defining representation of M_nB (so H' != 0), then minimal Stinespring.
Representation right_augmented_representation(const CPTuple& t, double tol_rank = 1e-9);

// L' = K - span pi_L(A) V H and L'' = K - span pi_L(A) V H^-.
Decomposition decompose(const Representation& r, double tol = 1e-9);
bool decomposition_faithful(const Representation& r, const Decomposition& d, double tol = 1e-9);

// GNS, minimal Stinespring, then augmentation until pi_L restricted to L' is faithful.
struct FaithfulRepresentation {
    Representation rep;
    Decomposition decomposition;
    bool augmented = false;
};
FaithfulRepresentation faithful_representation(const CPTuple& t, double tol_rank = 1e-9);

struct RepresentationCheck {
    double state_error = 0;        // |<Omega, pi_R(E_ij) Omega> - omega(E_ij)|
    double isometry_error = 0;     // |V^*V - 1|
    double compression_error = 0;  // |V^* pi_L(E_ij) V - pi_R(phi(E_ij))|
    double right_hom_error = 0;
    double left_hom_error = 0;
    double max() const;
};
RepresentationCheck check_representation(const Representation& r, const CPTuple& t);

}  // namespace sauv
