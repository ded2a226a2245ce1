#pragma once

// JSON model files. Matrices are row-major nested arrays; entries are numbers, rational strings
// such as "2/3", or [re, im] pairs.
//
// {
//   "dimension": 2,
//   "state": [["2/3", 0], [0, "1/3"]],
//   "generator": {"kind": "depolarizing", "rate": 1}
//              | {"kind": "gks", "kraus": [M, ...], "hamiltonian": M}   (or "k": M instead of the Hamiltonian)
//              | {"kind": "superoperator", "matrix": M}                 (column-major vec convention)
//              | {"kind": "transpose"}                                  (L(a) = a^T - a, not CP)
//   "bindings": {"a1": M, ...},   optional
//   "binding_seed": 1             optional; random bindings for a0..a8, b0..b8 not given explicitly
// }

#include "sauv/quantum.hpp"

#include <string>

namespace sauv {

MatModel parse_model(const std::string& json_text);
MatModel load_model(const std::string& path);

// Matrix literal in the same format, e.g. "[[1, 0], [0, [0, 1]]]".
Mat parse_matrix(const std::string& json_text);
std::string matrix_to_json(const Mat& m, int precision = 17);

}  // namespace sauv
