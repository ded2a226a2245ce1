#pragma once

// Randomized property suites over the symbolic and numeric layers.

#include "sauv/symexpr.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace sauv {

struct PropertyResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    std::string first_failure;  // empty when all cases pass
    bool ok() const { return cases > 0 && failures == 0; }
};

// Well-typed random expression tree with the given target and depth at most `depth`.
Ast random_ast(std::mt19937_64& rng, Alg target, int depth);

PropertyResult property_normalize_idempotent(int cases, std::uint64_t seed);
// normalize(e1 * e2) = normalize(normalize(e1) * normalize(e2)), same for sums.
PropertyResult property_normalize_compatible(int cases, std::uint64_t seed);
PropertyResult property_json_roundtrip(int cases, std::uint64_t seed);
PropertyResult property_text_roundtrip(int cases, std::uint64_t seed);
// Replacing one slot by alpha x + beta y gives alpha M(..x..) + beta M(..y..), lengths 1..max_ell.
PropertyResult property_moment_linearity(int cases, std::uint64_t seed, int max_ell = 3);
PropertyResult property_smoment_linearity(int cases, std::uint64_t seed, int max_len = 4);
// All-one inputs give one, for moment_right and smoment.
PropertyResult property_unitality(int cases, std::uint64_t seed);
// S(t; a)^* = S(reversed t; reversed a^*) in the default model.
PropertyResult property_adjoint_symmetry(int cases, std::uint64_t seed, double tol = 1e-10);

std::vector<PropertyResult> run_all_properties(int cases, std::uint64_t seed);

}  // namespace sauv
