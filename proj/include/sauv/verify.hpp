#pragma once

// Numerical verification suites and the scenario runner behind `sauvctl verify`.

#include "sauv/quantum.hpp"
#include "sauv/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sauv {

struct Check {
    std::string suite;
    std::string name;
    double residual = 0;   // worst case over all trials
    double tolerance = 0;
    int cases = 0;
    bool pass = false;
    std::string detail;    // set when the check could not be evaluated
};

struct Tolerances {
    double model = 1e-10;
    double representation = 1e-10;
    double retraction = 1e-10;
    double liberation = 1e-9;
    double oracle = 1e-8;
    double consistency = 1e-9;
    double shift = 1e-10;
    double discontinuity = 1e-9;
};

// Every suite draws its randomness from `seed` alone.
std::vector<Check> check_model(const MatModel& m, const std::vector<Rational>& times, const Tolerances& tol);
std::vector<Check> check_representations(const MatModel& m, const std::vector<Rational>& times, const Tolerances& tol);
std::vector<Check> check_retractions(const MatModel& m, const std::vector<Rational>& times, int depth, int trials,
                                     std::uint64_t seed, const Tolerances& tol);
std::vector<Check> check_liberation(const MatModel& m, const std::vector<Rational>& times, int depth, int trials,
                                    std::uint64_t seed, const Tolerances& tol);
// Words over {0, t} in the single-step product against the recursion.
std::vector<Check> check_oracle(const MatModel& m, const std::vector<Rational>& times, int max_word_len, int trials,
                                std::uint64_t seed, const Tolerances& tol);
// Three-point towers {0, s, t}: recursion, consistency with {0, t}, tail retractions, embedding.
std::vector<Check> check_tower(const MatModel& m, const Rational& s, const Rational& t, int max_word_len, int trials,
                               std::uint64_t seed, const Tolerances& tol);
// S(t + tau) = phi_tau(S(t)) for the recursion and for tower expectations.
std::vector<Check> check_shift(const MatModel& m, int max_word_len, int trials, std::uint64_t seed,
                               const Tolerances& tol);
std::vector<Check> check_discontinuity(const MatModel& m, const Rational& t1, const Rational& t2, const Rational& t3,
                                       const Tolerances& tol);

struct Scenario {
    std::string name;
    std::string model_path;
    MatModel model;
    std::uint64_t seed = 7;
    int depth = 4;
    int max_word_len = 4;
    int trials = 20;
    std::vector<Rational> times;  // step times for single-step products
    Rational tower_s, tower_t;    // three-point tower {0, s, t}
    Rational disc_t1, disc_t2, disc_t3;
    std::vector<std::string> suites;
    Tolerances tol;
};

const std::vector<std::string>& all_suites();
// Relative paths in the scenario are resolved against the scenario file's directory.
Scenario load_scenario(const std::string& path);

struct Report {
    std::string scenario;
    std::uint64_t seed = 0;
    std::vector<Check> checks;
    bool ok() const;
    std::string json() const;  // deterministic; no timings
    std::string text() const;
};

// Suites after a failed model check are skipped and reported as failures.
Report run_scenario(const Scenario& s);

}  // namespace sauv
