// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "sauv/golden.hpp"
#include "sauv/liberation.hpp"
#include "sauv/momentpoly.hpp"
#include "sauv/properties.hpp"
#include "sauv/tower.hpp"
#include "sauv/verify.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

using namespace sauv;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Worst residual and tolerance of a list of checks.
Outcome summarize(const std::vector<Check>& checks)
{
    Outcome o{!checks.empty(), {}};
    double worst_ratio = 0;
    const Check* worst = nullptr;
    int cases = 0;
    for (const auto& c : checks) {
        cases += c.cases;
        if (!c.pass) {
            o.pass = false;
            if (o.detail.empty()) o.detail = "failed: " + c.suite + ": " + c.name;
        }
        double ratio = c.tolerance > 0 ? c.residual / c.tolerance : c.residual;
        if (!worst || ratio > worst_ratio) worst_ratio = ratio, worst = &c;
    }
    if (o.detail.empty() && worst) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "%zu checks, %d cases, worst %.2e (tol %.0e, %s)", checks.size(), cases,
                      worst->residual, worst->tolerance, worst->name.c_str());
        o.detail = buf;
    }
    return o;
}

std::vector<Check> concat(std::vector<Check> a, const std::vector<Check>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

Outcome tables(std::initializer_list<Table> which)
{
    Outcome o{true, {}};
    int rows = 0;
    for (Table t : which) {
        TableCheck c = check_table(t);
        rows += static_cast<int>(c.rows.size());
        for (const auto& r : c.rows)
            if (!r.match && o.pass) o.pass = false, o.detail = table_name(t) + " row " + r.id + ": " + r.difference;
        if (c.rows.empty()) o.pass = false, o.detail = table_name(t) + " is empty";
    }
    if (o.pass) o.detail = std::to_string(rows) + " rows, exact match";
    return o;
}

Outcome oracle_equivalence()
{
    MatModel m = default_model();
    std::mt19937_64 rng(2025);
    double worst = 0;
    int cases = 0;
    for (const Rational& t : {make_rational(1, 4), make_rational(1, 2), Rational(1)}) {
        DilationTower tower(m, {Rational(0), t});
        for (int k = 0; k < 200; ++k) {
            int len = 1 + k % 4;
            std::vector<Rational> ts;
            std::vector<Mat> es;
            for (int i = 0; i < len; ++i) {
                ts.push_back(rng() % 2 ? t : Rational(0));
                es.push_back(random_matrix(m.n(), rng));
            }
            double err = (word_expectation(tower, ts, es) - smoment_numeric(NumericPair{ts, es}, m)).norm();
            worst = std::max(worst, err);
            ++cases;
        }
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "%d words, worst |E - S| %.2e (tol 1e-8)", cases, worst);
    return {worst <= 1e-8, buf};
}

Outcome discontinuity_demo()
{
    MatModel m = default_model();
    std::vector<Mat> a;
    for (int i = 1; i <= 5; ++i) a.push_back(m.binding("a" + std::to_string(i)));
    std::vector<Rational> taus;
    for (int k = 1; k <= 8; ++k) taus.push_back(make_rational(1, std::int64_t{1} << k));
    DiscontinuityReport gap = discontinuity(a, Rational(1), Rational(2), Rational(3), taus, m);
    Outcome symbolic = tables({Table::Discontinuity});

    // t_k = (1 + 1/k^2, 0, 1 + 1/k^2) -> (1, 0, 1) with normalized elements.
    std::vector<Mat> e;
    for (int i = 1; i <= 3; ++i) e.push_back(a[i - 1] / a[i - 1].norm());
    std::vector<std::vector<Rational>> seq;
    for (std::int64_t k = 1; k <= 1024; ++k) {
        Rational d = make_rational(1, k * k);
        seq.push_back({1 + d, Rational(0), 1 + d});
    }
    NoncrossingReport nc = noncrossing_check(e, {Rational(1), Rational(0), Rational(1)}, seq, m);
    double last = nc.deviations.back();

    bool pass = gap.mismatch <= 1e-9 && symbolic.pass && nc.monotone && !nc.crossing && last < 1e-6;
    char buf[240];
    std::snprintf(buf, sizeof buf, "gap mismatch %.2e (tol 1e-9), |gap| %.3f; non-crossing deviation at k=1024 %.2e, %s",
                  gap.mismatch, gap.limit_gap.norm(), last, nc.monotone ? "monotone" : "NOT monotone");
    return {pass, symbolic.pass ? std::string(buf) : symbolic.detail};
}

Outcome term_counts()
{
    std::ostringstream os;
    bool pass = true;
    for (int ell = 0; ell <= 3; ++ell) {
        AltWord w = AltWord::generic(ell);
        TermCount c = term_count(w);
        pass = pass && c.observed <= c.bound;
        os << (ell ? ", " : "") << "l=" << ell << ": " << c.observed << " <= " << c.bound << " (" << c.normalized
           << " normalized)";
    }
    return {pass, os.str()};
}

Outcome properties()
{
    Outcome o{true, {}};
    int cases = 0;
    for (const auto& r : run_all_properties(1000, 90210)) {
        cases += r.cases;
        if (!r.ok() && o.pass) o.pass = false, o.detail = r.name + ": " + r.first_failure;
        if (r.cases != 1000) o.pass = false;
    }
    if (o.pass) o.detail = "8 suites, " + std::to_string(cases) + " cases, 0 failures";
    return o;
}

}  // namespace

int main()
{
    struct Criterion {
        int id;
        std::string name;
        double budget_seconds;
        std::function<Outcome()> run;
    };
    Tolerances tol;
    const std::vector<Rational> times{make_rational(1, 4), make_rational(1, 2), Rational(1)};
    std::vector<Criterion> criteria{
        {1, "moment function tables", 10, [] { return tables({Table::MomentsGeneral, Table::MomentsScalar}); }},
        {2, "moment polynomial table", 10, [] { return tables({Table::MomentPolys}); }},
        {3, "tower expectations equal moment polynomials", 120, oracle_equivalence},
        {4, "liberation residuals", 60,
         [&] { return summarize(check_liberation(default_model(), {make_rational(1, 2)}, 4, 100, 41, tol)); }},
        {5, "retraction identities", 300,
         [&] { return summarize(check_retractions(default_model(), times, 4, 50, 51, tol)); }},
        {6, "shift covariance and tower consistency", 300,
         [&] {
             MatModel m = default_model();
             return summarize(concat(check_shift(m, 4, 100, 61, tol),
                                     check_tower(m, make_rational(1, 2), Rational(1), 4, 100, 62, tol)));
         }},
        {7, "discontinuity and non-crossing continuity", 60, discontinuity_demo},
        {8, "term counts within 2^(l^2)", 60, term_counts},
        {9, "property suites", 300, properties},
        {10, "representation invariants", 60,
         [&] {
             std::vector<Check> all;
             for (const MatModel& m : {default_model(), random_model(2, 17), random_model(3, 18)}) {
                 all = concat(all, check_model(m, times, tol));
                 all = concat(all, check_representations(m, times, tol));
             }
             return summarize(all);
         }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = o.pass && s <= c.budget_seconds;
        if (o.pass && !pass) o.detail += " (over time budget)";
        failed += pass ? 0 : 1;
        std::printf("%s %2d  %-44s %s  [%.2f s, budget %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    o.detail.c_str(), s, c.budget_seconds);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
