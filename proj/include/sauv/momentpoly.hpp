#pragma once

// Moment polynomials of timed pairs <<t1..tn; a1..an>> and their numeric evaluation.

#include "sauv/interpret.hpp"
#include "sauv/quantum.hpp"
#include "sauv/symexpr.hpp"
#include "sauv/time_expr.hpp"

#include <map>
#include <string>
#include <vector>

namespace sauv {

struct TimedPair {
    std::vector<TimeExpr> times;
    std::vector<Expr> elems;  // A-valued

    std::size_t size() const { return times.size(); }
    void validate() const;
    // "1,0,1" or "t2, 0, t1"; elements default to a1..an.
    static TimedPair parse(const std::string& times, const std::vector<std::string>& elems = {});
    std::string label() const;  // "S(1,0,1)"
};

TimedPair concat(const TimedPair& x, const TimedPair& y);

// S(p) = left * phi_tau(S(core)) * right; core is empty or contains a zero time.
struct ReducedPair {
    Expr left = Expr::unit(Alg::A);
    TimeExpr tau;
    TimedPair core;
    Expr right = Expr::unit(Alg::A);
};

// Merge consecutive equal times only.
TimedPair merge_equal(const TimedPair& p);
ReducedPair reduce(const TimedPair& p);

struct PairDecomposition {
    std::vector<TimedPair> zero_runs;  // l+1 runs, boundary runs may be empty
    std::vector<TimedPair> pos_runs;   // l runs
};
PairDecomposition decompose(const TimedPair& p);

Expr smoment(const TimedPair& p, const RewriteOptions& opt = {});

struct NumericPair {
    std::vector<Rational> times;
    std::vector<Mat> elems;
};

// Direct numeric recursion.
Mat smoment_numeric(const NumericPair& p, const MatModel& m);
// Times evaluated exactly from `values`, elements interpreted in the model.
NumericPair numeric_pair(const TimedPair& p, const MatModel& m, const std::map<int, Rational>& values = {});
Mat smoment_numeric(const TimedPair& p, const MatModel& m, const std::map<int, Rational>& values = {});
// Interpret the symbolic moment polynomial in the model.
Mat smoment_interpreted(const TimedPair& p, const MatModel& m, const std::map<int, Rational>& values = {});

// Entrywise order relations (<=) agree.
bool same_order(const std::vector<Rational>& s, const std::vector<Rational>& t);

struct NoncrossingReport {
    std::vector<double> deviations;
    bool monotone = true;
    bool crossing = false;
    std::string csv() const;
};
// Deviations of S(t_k; a) from S(t; a). Throws if a sequence element crosses and allow_crossing is false.
NoncrossingReport noncrossing_check(const std::vector<Mat>& elems, const std::vector<Rational>& limit,
                                    const std::vector<std::vector<Rational>>& sequence, const MatModel& m,
                                    bool allow_crossing = false);

// The family S(t1, tau, t3, 0, t2) as tau -> 0+, against S(t1, 0, t3, 0, t2).
struct DiscontinuityRow {
    Rational tau;
    double distance_to_limit;  // |S(t1,tau,t3,0,t2) - lim|
    double gap_error;          // |(S(t1,0,t3,0,t2) - S(t1,tau,t3,0,t2)) - closed form|
};
struct DiscontinuityReport {
    std::vector<DiscontinuityRow> rows;
    Mat limit_gap;     // S(t1,0,t3,0,t2) - lim S(t1,tau,t3,0,t2)
    Mat closed_form;   // closed-form gap expression
    double mismatch = 0;  // |limit_gap - closed_form|
    std::string csv() const;
};
// Symbolic forms in t1 < t2 < t3: lim_{tau->0+} S(t1,tau,t3,0,t2) and the jump S(t1,0,t3,0,t2) - lim.
Expr discontinuity_limit_symbolic(const RewriteOptions& opt = {});
Expr discontinuity_gap_symbolic(const RewriteOptions& opt = {});
// The printed jump uses omega(a3); with general = true it uses omega(phi_t3(a3)), which agrees for invariant states.
Mat discontinuity_closed_form(const std::vector<Mat>& a, double t1, double t2, double t3, const MatModel& m,
                              bool general = false);
// lim_{tau->0+} S(t1,tau,t3,0,t2): the symbolic polynomial with tau as the smallest time, evaluated at tau = 0.
Mat discontinuity_limit(const std::vector<Mat>& a, const Rational& t1, const Rational& t2, const Rational& t3,
                        const MatModel& m);
DiscontinuityReport discontinuity(const std::vector<Mat>& a, const Rational& t1, const Rational& t2,
                                  const Rational& t3, const std::vector<Rational>& taus, const MatModel& m,
                                  bool general = false);

}  // namespace sauv
