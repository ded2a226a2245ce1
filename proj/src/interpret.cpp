#include "sauv/interpret.hpp"

#include <stdexcept>

namespace sauv {

namespace {

int dim_of(Alg a, const Interpretation& in) { return a == Alg::A ? in.dimA : a == Alg::B ? in.dimB : 1; }

Mat eval_word(const Word& w, Alg target, const Interpretation& in);

cd eval_scalar(const Factor& f, const Interpretation& in)
{
    Mat x = eval_word(f.argument(), map_source(f.kind), in);
    if (f.kind == MapKind::Omega) {
        if (!in.omega) throw std::invalid_argument("interpretation has no omega");
        return in.omega(x);
    }
    if (!in.nu) throw std::invalid_argument("interpretation has no nu");
    return in.nu(x);
}

Mat eval_factor(const Factor& f, const Interpretation& in)
{
    if (f.is_symbol) {
        if (!in.symbol) throw std::invalid_argument("interpretation has no symbol bindings");
        return in.symbol(f.alg, f.index);
    }
    Mat x = eval_word(f.argument(), map_source(f.kind), in);
    switch (f.kind) {
    case MapKind::Rho:
        if (!in.rho) throw std::invalid_argument("interpretation has no rho");
        return in.rho(x);
    case MapKind::Psi:
        if (!in.psi) throw std::invalid_argument("interpretation has no psi");
        return in.psi(x);
    case MapKind::Phi:
        if (!in.phi) throw std::invalid_argument("interpretation has no phi");
        return in.phi(f.time.evaluate(in.times), x);
    default:
        throw std::logic_error("scalar map inside a word");
    }
}

Mat eval_word(const Word& w, Alg target, const Interpretation& in)
{
    int n = dim_of(target, in);
    Mat acc = Mat::Identity(n, n);
    for (const auto& f : w) acc = acc * eval_factor(f, in);
    return acc;
}

}  // namespace

Mat interpret(const Expr& e, const Interpretation& in)
{
    int n = dim_of(e.target(), in);
    Mat out = Mat::Zero(n, n);
    for (const auto& t : e.terms()) {
        cd c = to_double(t.coef);
        for (const auto& s : t.scalars) c *= eval_scalar(s, in);
        out += c * eval_word(t.word, e.target(), in);
    }
    return out;
}

Interpretation model_interpretation(const MatModel& m, std::map<int, double> times)
{
    Interpretation in;
    in.dimA = in.dimB = m.n();
    in.symbol = [&m](Alg a, int k) {
        return m.binding((a == Alg::A ? "a" : "b") + std::to_string(k));
    };
    in.omega = [&m](const Mat& x) { return m.omega(x); };
    in.nu = in.omega;
    in.phi = [&m](double t, const Mat& x) { return m.phi(t, x); };
    in.times = std::move(times);
    return in;
}

}  // namespace sauv
