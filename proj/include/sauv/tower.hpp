#pragma once

// Iterated Sauvageot products for time sets with at most three points, realized per word through
// Gram kernels, and the retraction of timed words onto A.

#include "sauv/product_space.hpp"
#include "sauv/rational.hpp"

#include <optional>
#include <vector>

namespace sauv {

struct TowerOptions {
    int max_word_len = 4;
    double tol_rank = 1e-9;  // relative eigenvalue cutoff for Gram kernels
    double gram_tol = 1e-9;  // tolerated negativity of Gram kernels, relative to the largest eigenvalue
};

struct TowerDiagnostics {
    int levels = 0;                  // number of nested products used
    int word_basis = 0;              // size of the level-2 word basis (subsets of positive letters)
    int gram_size = 0;
    int gram_rank = 0;
    double gram_min_eigenvalue = 0;  // relative to the largest eigenvalue
    double residual = 0;             // worst least-squares misfit of the retractions involved
};

class DilationTower {
public:
    // gamma: distinct nonnegative times, at most three; sorted internally.
    DilationTower(const MatModel& m, std::vector<Rational> gamma, const TowerOptions& opt = {});

    const std::vector<Rational>& gamma() const { return gamma_; }
    const TowerOptions& options() const { return opt_; }
    const MatModel& model() const { return model_; }

    // epsilon_gamma of sigma_{t1}(a1) ... sigma_{tn}(an); every time must lie in gamma.
    Mat retract(const std::vector<Rational>& times, const std::vector<Mat>& elems,
                TowerDiagnostics* diag = nullptr) const;

    // The single-step product at the bottom of the tower (gamma = {0, t} or the tail of a three-point set).
    const SauvageotProduct* inner_product() const { return inner_ ? &*inner_ : nullptr; }

private:
    Mat retract_two(const std::vector<Rational>& times, const std::vector<Mat>& elems, TowerDiagnostics* diag) const;
    Mat retract_three(const std::vector<Rational>& times, const std::vector<Mat>& elems, TowerDiagnostics* diag) const;

    MatModel model_;
    std::vector<Rational> gamma_;
    Rational offset_;  // min gamma; the tower is built for gamma - offset
    std::vector<Rational> shifted_;
    TowerOptions opt_;
    std::optional<SauvageotProduct> inner_;
    Gns gns_;
    UnitSolver gns_solver_;
};

// E[sigma_{t1}(a1) ... sigma_{tn}(an)] computed in the tower; times may be a shift of a subset of gamma.
Mat word_expectation(const DilationTower& tower, const std::vector<Rational>& times, const std::vector<Mat>& elems,
                     TowerDiagnostics* diag = nullptr);

}  // namespace sauv
