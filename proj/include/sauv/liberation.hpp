#pragma once

// Alternating words, subset collapses and the recursive moment functions.

#include "sauv/symexpr.hpp"

#include <cstdint>
#include <vector>

namespace sauv {

// (b0, a1, b1, ..., a_l, b_l)
struct AltWord {
    std::vector<Expr> bs;  // l+1 entries, B-valued
    std::vector<Expr> as;  // l entries, A-valued

    int ell() const { return static_cast<int>(as.size()); }
    void validate() const;
    // The word (b0, a1, ..., b_l) with symbolic entries a_i, b_i.
    static AltWord generic(int ell);
};

// (a0, b1, a1, ..., b_l, a_l)
struct LeftWord {
    std::vector<Expr> as;  // l+1 entries
    std::vector<Expr> bs;  // l entries

    int ell() const { return static_cast<int>(bs.size()); }
    void validate() const;
    static LeftWord generic(int ell);
};

// Subset of [2l-1], stored as a bitmask (bit j-1 set iff j is a member).
struct SubsetS {
    int ell = 0;
    std::uint64_t mask = 0;

    static SubsetS from_members(int ell, const std::vector<int>& members);
    bool contains(int j) const;
    int size() const;
    std::vector<int> members() const;
    bool is_even_positions() const;  // S = {2, 4, ..., 2l-2}
};

int alternation_number(const SubsetS& s);

struct ConsecutiveRuns {
    std::vector<std::vector<int>> T;  // in-runs of S u {0, 2l}
    std::vector<std::vector<int>> U;  // out-runs of [2l-1] \ S
};
ConsecutiveRuns consecutive_subsets(const SubsetS& s);

enum class LeftSign {
    Alternating,  // (-1)^{l+|S|}, as in the right recursion
    Displayed,    // (-1)^{1+|S|}
};

struct LiberationOptions {
    RewriteOptions rewrite;
    LeftSign left_sign = LeftSign::Alternating;
    bool memoize = true;
};

AltWord collapse(const AltWord& w, const SubsetS& s, const RewriteOptions& opt = {});
LeftWord collapse_left(const LeftWord& w, const SubsetS& s, const RewriteOptions& opt = {});

Expr moment_right(const AltWord& w, const LiberationOptions& opt = {});
Expr moment_left(const LeftWord& w, const LiberationOptions& opt = {});
// moment_right with psi(b) replaced by the scalar nu(b).
Expr moment_scalar(const AltWord& w, const LiberationOptions& opt = {});

// Moment of the generic word with the outer b0, b_l stripped (b0 = b_l = 1).
Expr reduced_moment_right(int ell, const LiberationOptions& opt = {});
Expr reduced_moment_scalar(int ell, const LiberationOptions& opt = {});

struct TermCount {
    std::uint64_t observed = 0;  // leaves of the unmemoized recursion
    std::uint64_t bound = 0;     // 2^{l^2}
    std::uint64_t normalized = 0;
};
TermCount term_count(const AltWord& w, const LiberationOptions& opt = {});

}  // namespace sauv
