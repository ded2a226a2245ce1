#pragma once

// Numeric evaluation of symbolic expressions in a concrete model.

#include "sauv/quantum.hpp"
#include "sauv/symexpr.hpp"

#include <functional>
#include <map>

namespace sauv {

struct Interpretation {
    int dimA = 1;
    int dimB = 1;
    std::function<Mat(Alg, int)> symbol;
    std::function<Mat(const Mat&)> rho;  // A -> B
    std::function<Mat(const Mat&)> psi;  // B -> A
    std::function<cd(const Mat&)> omega;
    std::function<cd(const Mat&)> nu;
    std::function<Mat(double, const Mat&)> phi;
    std::map<int, double> times;
};

// Matrix value of e; scalar-valued expressions give a 1x1 matrix.
Mat interpret(const Expr& e, const Interpretation& in);

// A-side symbols a<k> from the model bindings, phi and omega from the model.
Interpretation model_interpretation(const MatModel& m, std::map<int, double> times = {});

}  // namespace sauv
