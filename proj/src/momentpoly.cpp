#include "sauv/momentpoly.hpp"

#include "sauv/errors.hpp"
#include "sauv/liberation.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sauv {

void TimedPair::validate() const
{
    if (times.size() != elems.size()) throw std::invalid_argument("timed pair needs as many times as elements");
    for (const auto& t : times)
        if (t.sign() < 0) throw std::invalid_argument("timed pair has a negative time " + t.to_string());
    for (const auto& e : elems)
        if (e.target() == Alg::B) throw TypeError("type error: timed pair element is B-valued");
}

TimedPair TimedPair::parse(const std::string& times, const std::vector<std::string>& elems)
{
    TimedPair p;
    std::stringstream ss(times);
    std::string item;
    while (std::getline(ss, item, ',')) p.times.push_back(TimeExpr::parse(item));
    ParseOptions po;
    po.hint = Alg::A;
    for (std::size_t i = 0; i < p.times.size(); ++i) {
        if (elems.empty())
            p.elems.push_back(Expr::a(static_cast<int>(i) + 1));
        else
            p.elems.push_back(sauv::parse(elems.at(i), po).retarget(Alg::A));
    }
    if (!elems.empty() && elems.size() != p.times.size())
        throw std::invalid_argument("timed pair needs as many elements as times");
    p.validate();
    return p;
}

std::string TimedPair::label() const
{
    std::string s = "S(";
    for (std::size_t i = 0; i < times.size(); ++i) s += (i ? "," : "") + times[i].to_string();
    return s + ")";
}

TimedPair concat(const TimedPair& x, const TimedPair& y)
{
    TimedPair r = x;
    r.times.insert(r.times.end(), y.times.begin(), y.times.end());
    r.elems.insert(r.elems.end(), y.elems.begin(), y.elems.end());
    return r;
}

namespace {

// One recursion, two backends: symbolic (TimeExpr times, Expr elements) and numeric (Rational times, matrices).
struct SymbolicBackend {
    using Time = TimeExpr;
    using Elem = Expr;
    using Scalar = Expr;
    using Memo = std::map<std::pair<std::vector<TimeExpr>, std::vector<Expr>>, Expr>;
    static constexpr bool memoizable = true;
    RewriteOptions opt;

    bool zero(const Time& t) const { return t.is_zero(); }
    bool equal(const Time& a, const Time& b) const { return (a - b).is_zero(); }
    bool less(const Time& a, const Time& b) const { return compare_times(a, b) < 0; }
    Time sub(const Time& a, const Time& b) const { return a - b; }
    Elem one() const { return Expr::unit(Alg::A); }
    Elem zero_elem() const { return Expr::zero(Alg::A); }
    Scalar one_scalar() const { return Expr::scalar(1); }
    Elem mul(const Elem& a, const Elem& b) const { return (a * b).retarget(Alg::A); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem scale(const Scalar& s, const Elem& a) const { return (s * a).retarget(Alg::A); }
    Scalar smul(const Scalar& a, const Scalar& b) const { return a * b; }
    Elem phi(const Time& t, const Elem& a) const { return sauv::phi(t, a, opt); }
    Scalar omega(const Elem& a) const { return sauv::omega(a, opt); }
};

struct NumericBackend {
    using Time = Rational;
    using Elem = Mat;
    using Scalar = cd;
    struct Memo {};
    static constexpr bool memoizable = false;
    const MatModel& m;

    bool zero(const Time& t) const { return t == 0; }
    bool equal(const Time& a, const Time& b) const { return a == b; }
    bool less(const Time& a, const Time& b) const { return a < b; }
    Time sub(const Time& a, const Time& b) const { return Rational(a - b); }
    Elem one() const { return Mat::Identity(m.n(), m.n()); }
    Elem zero_elem() const { return Mat::Zero(m.n(), m.n()); }
    Scalar one_scalar() const { return cd(1, 0); }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem scale(const Scalar& s, const Elem& a) const { return s * a; }
    Scalar smul(const Scalar& a, const Scalar& b) const { return a * b; }
    Elem phi(const Time& t, const Elem& a) const { return m.phi(to_double(t), a); }
    Scalar omega(const Elem& a) const { return m.omega(a); }
};

template <class Be>
struct Pair {
    std::vector<typename Be::Time> times;
    std::vector<typename Be::Elem> elems;
};

template <class Be>
Pair<Be> merge(const Be& be, const Pair<Be>& p)
{
    Pair<Be> out;
    for (std::size_t i = 0; i < p.times.size(); ++i) {
        if (!out.times.empty() && be.equal(out.times.back(), p.times[i])) {
            out.elems.back() = be.mul(out.elems.back(), p.elems[i]);
        } else {
            out.times.push_back(p.times[i]);
            out.elems.push_back(p.elems[i]);
        }
    }
    return out;
}

template <class Be>
struct Recursion {
    const Be& be;
    typename Be::Memo* memo;

    using Elem = typename Be::Elem;
    using Time = typename Be::Time;

    Elem run(const Pair<Be>& input)
    {
        Pair<Be> p = merge(be, input);
        std::size_t n = p.times.size();
        if (n == 0) return be.one();
        Elem left = be.one(), right = be.one();
        std::size_t lo = 0, hi = n;
        while (lo < hi && be.zero(p.times[lo])) left = be.mul(left, p.elems[lo++]);
        if (lo == hi) return left;
        while (be.zero(p.times[hi - 1])) right = be.mul(p.elems[--hi], right);
        Pair<Be> core;
        core.times.assign(p.times.begin() + lo, p.times.begin() + hi);
        core.elems.assign(p.elems.begin() + lo, p.elems.begin() + hi);
        return be.mul(be.mul(left, core_moment(core)), right);
    }

    // core: nonempty, first and last times positive
    Elem core_moment(const Pair<Be>& core)
    {
        if constexpr (Be::memoizable) {
            if (memo) {
                auto key = std::make_pair(core.times, core.elems);
                auto it = memo->find(key);
                if (it != memo->end()) return it->second;
                Elem r = core_uncached(core);
                memo->emplace(std::move(key), r);
                return r;
            }
        }
        return core_uncached(core);
    }

    Time min_positive(const Pair<Be>& p) const
    {
        const Time* best = nullptr;
        for (const auto& t : p.times)
            if (!be.zero(t) && (!best || be.less(t, *best))) best = &t;
        return *best;
    }

    Elem core_uncached(const Pair<Be>& core)
    {
        Time tau = min_positive(core);
        bool has_zero = std::any_of(core.times.begin(), core.times.end(), [&](const Time& t) { return be.zero(t); });
        if (!has_zero) {
            Pair<Be> shifted = core;
            for (auto& t : shifted.times) t = be.sub(t, tau);
            return be.phi(tau, run(shifted));
        }
        // Components: positive runs w_1..w_l, zero runs z_1..z_{l-1} between them; z_0 = z_l = empty.
        std::vector<Pair<Be>> w;
        std::vector<Elem> zprod{be.one()};
        bool in_pos = false;
        for (std::size_t i = 0; i < core.times.size(); ++i) {
            bool pos = !be.zero(core.times[i]);
            if (pos) {
                if (!in_pos) w.emplace_back();
                w.back().times.push_back(core.times[i]);
                w.back().elems.push_back(core.elems[i]);
            } else {
                if (in_pos) zprod.push_back(be.one());
                zprod.back() = be.mul(zprod.back(), core.elems[i]);
            }
            in_pos = pos;
        }
        zprod.push_back(be.one());
        int ell = static_cast<int>(w.size());
        std::vector<Elem> sw;
        for (const auto& wi : w) sw.push_back(run(wi));
        std::vector<typename Be::Scalar> oz;
        for (const auto& z : zprod) oz.push_back(be.omega(z));

        auto x = [&](int j) -> const Elem& { return j % 2 ? sw[(j + 1) / 2 - 1] : zprod[j / 2]; };
        Elem total = be.zero_elem();
        SubsetS s;
        s.ell = ell;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (2 * ell - 1)); ++mask) {
            s.mask = mask;
            if (s.is_even_positions()) continue;
            ConsecutiveRuns runs = consecutive_subsets(s);
            Pair<Be> col;
            auto coef = be.one_scalar();
            for (std::size_t i = 0; i < runs.T.size(); ++i) {
                Elem xs = be.one();
                for (int j : runs.T[i]) xs = be.mul(xs, x(j));
                col.times.push_back(Time{});
                col.elems.push_back(xs);
                if (i < runs.U.size()) {
                    for (int k : runs.U[i]) {
                        if (k % 2) {
                            const auto& wk = w[(k + 1) / 2 - 1];
                            col.times.insert(col.times.end(), wk.times.begin(), wk.times.end());
                            col.elems.insert(col.elems.end(), wk.elems.begin(), wk.elems.end());
                        } else {
                            coef = be.smul(coef, oz[k / 2]);
                        }
                    }
                }
            }
            Elem m = be.scale(coef, run(col));
            total = (ell + s.size()) % 2 ? be.add(total, be.neg(m)) : be.add(total, m);
        }
        return total;
    }
};

Pair<SymbolicBackend> to_backend(const TimedPair& p)
{
    return {p.times, p.elems};
}

}  // namespace

TimedPair merge_equal(const TimedPair& p)
{
    SymbolicBackend be;
    auto m = merge(be, to_backend(p));
    return {m.times, m.elems};
}

ReducedPair reduce(const TimedPair& p)
{
    p.validate();
    TimedPair m = merge_equal(p);
    ReducedPair r;
    std::size_t lo = 0, hi = m.size();
    while (lo < hi && m.times[lo].is_zero()) r.left = (r.left * m.elems[lo++]).retarget(Alg::A);
    while (hi > lo && m.times[hi - 1].is_zero()) r.right = (m.elems[--hi] * r.right).retarget(Alg::A);
    r.core.times.assign(m.times.begin() + lo, m.times.begin() + hi);
    r.core.elems.assign(m.elems.begin() + lo, m.elems.begin() + hi);
    bool has_zero = std::any_of(r.core.times.begin(), r.core.times.end(), [](const TimeExpr& t) { return t.is_zero(); });
    if (!r.core.times.empty() && !has_zero) {
        TimeExpr tau = r.core.times.front();
        for (const auto& t : r.core.times)
            if (compare_times(t, tau) < 0) tau = t;
        r.tau = tau;
        for (auto& t : r.core.times) t = t - tau;
    }
    return r;
}

PairDecomposition decompose(const TimedPair& p)
{
    p.validate();
    bool any_zero = false, any_pos = false;
    for (const auto& t : p.times) (t.is_zero() ? any_zero : any_pos) = true;
    if (!any_zero || !any_pos) throw std::invalid_argument("decompose requires a zero time and a nonzero time");
    PairDecomposition d;
    d.zero_runs.emplace_back();
    bool in_pos = false;
    for (std::size_t i = 0; i < p.size(); ++i) {
        bool pos = !p.times[i].is_zero();
        if (pos && !in_pos) d.pos_runs.emplace_back();
        if (!pos && in_pos) d.zero_runs.emplace_back();
        auto& target = pos ? d.pos_runs.back() : d.zero_runs.back();
        target.times.push_back(p.times[i]);
        target.elems.push_back(p.elems[i]);
        in_pos = pos;
    }
    if (in_pos) d.zero_runs.emplace_back();
    return d;
}

Expr smoment(const TimedPair& p, const RewriteOptions& opt)
{
    p.validate();
    SymbolicBackend be{opt};
    SymbolicBackend::Memo memo;
    Recursion<SymbolicBackend> r{be, &memo};
    return r.run(to_backend(p)).retarget(Alg::A);
}

Mat smoment_numeric(const NumericPair& p, const MatModel& m)
{
    if (p.times.size() != p.elems.size()) throw std::invalid_argument("timed pair needs as many times as elements");
    for (const auto& t : p.times)
        if (t < 0) throw std::invalid_argument("timed pair has a negative time");
    NumericBackend be{m};
    Recursion<NumericBackend> r{be, nullptr};
    return r.run({p.times, p.elems});
}

NumericPair numeric_pair(const TimedPair& p, const MatModel& m, const std::map<int, Rational>& values)
{
    p.validate();
    NumericPair np;
    Interpretation in = model_interpretation(m);
    for (std::size_t i = 0; i < p.size(); ++i) {
        np.times.push_back(p.times[i].evaluate_exact(values));
        np.elems.push_back(interpret(p.elems[i], in));
    }
    return np;
}

Mat smoment_numeric(const TimedPair& p, const MatModel& m, const std::map<int, Rational>& values)
{
    return smoment_numeric(numeric_pair(p, m, values), m);
}

Mat smoment_interpreted(const TimedPair& p, const MatModel& m, const std::map<int, Rational>& values)
{
    std::map<int, double> tv;
    for (const auto& [k, v] : values) tv[k] = to_double(v);
    return interpret(smoment(p), model_interpretation(m, tv));
}

bool same_order(const std::vector<Rational>& s, const std::vector<Rational>& t)
{
    if (s.size() != t.size()) return false;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
            if ((s[i] <= s[j]) != (t[i] <= t[j])) return false;
    return true;
}

std::string NoncrossingReport::csv() const
{
    std::ostringstream os;
    os.precision(17);
    os << "k,deviation\n";
    for (std::size_t k = 0; k < deviations.size(); ++k) os << k + 1 << ',' << deviations[k] << '\n';
    return os.str();
}

NoncrossingReport noncrossing_check(const std::vector<Mat>& elems, const std::vector<Rational>& limit,
                                    const std::vector<std::vector<Rational>>& sequence, const MatModel& m,
                                    bool allow_crossing)
{
    NoncrossingReport rep;
    Mat target = smoment_numeric(NumericPair{limit, elems}, m);
    for (const auto& s : sequence) {
        if (!same_order(s, limit)) {
            if (!allow_crossing) throw std::invalid_argument("sequence element crosses the order relations of the limit");
            rep.crossing = true;
        }
        double d = (smoment_numeric(NumericPair{s, elems}, m) - target).norm();
        if (!rep.deviations.empty() && d > rep.deviations.back() * (1 + 1e-9) + 1e-15) rep.monotone = false;
        rep.deviations.push_back(d);
    }
    return rep;
}

Expr discontinuity_limit_symbolic(const RewriteOptions& opt)
{
    // tau is t1 here; shift back after evaluating it at 0.
    Expr e = smoment(TimedPair::parse("t2,t1,t4,0,t3"), opt);
    return substitute_times(e, {{1, TimeExpr()}, {2, TimeExpr::var(1)}, {3, TimeExpr::var(2)}, {4, TimeExpr::var(3)}},
                            opt);
}

Expr discontinuity_gap_symbolic(const RewriteOptions& opt)
{
    return smoment(TimedPair::parse("t1,0,t3,0,t2"), opt) - discontinuity_limit_symbolic(opt);
}

Mat discontinuity_closed_form(const std::vector<Mat>& a, double t1, double t2, double t3, const MatModel& m,
                              bool general)
{
    if (a.size() != 5) throw std::invalid_argument("discontinuity family needs five elements");
    Mat p3 = m.phi(t3, a[2]);
    cd w = m.omega(a[1]) * (general ? m.omega(p3) : m.omega(a[2])) * m.omega(a[3]) - m.omega(a[1]) * m.omega(Mat(p3 * a[3])) -
           m.omega(Mat(a[1] * p3)) * m.omega(a[3]) + m.omega(Mat(a[1] * p3 * a[3]));
    Mat bracket = m.phi(t1, Mat(a[0] * m.phi(t2 - t1, a[4]))) - m.phi(t1, a[0]) * m.phi(t2, a[4]);
    return w * bracket;
}

Mat discontinuity_limit(const std::vector<Mat>& a, const Rational& t1, const Rational& t2, const Rational& t3,
                        const MatModel& m)
{
    if (a.size() != 5) throw std::invalid_argument("discontinuity family needs five elements");
    Interpretation in = model_interpretation(m, {{1, to_double(t1)}, {2, to_double(t2)}, {3, to_double(t3)}});
    in.symbol = [&a](Alg, int k) { return a.at(k - 1); };
    return interpret(discontinuity_limit_symbolic(), in);
}

std::string DiscontinuityReport::csv() const
{
    std::ostringstream os;
    os.precision(17);
    os << "tau,distance_to_limit,gap_error\n";
    for (const auto& r : rows) os << to_double(r.tau) << ',' << r.distance_to_limit << ',' << r.gap_error << '\n';
    return os.str();
}

DiscontinuityReport discontinuity(const std::vector<Mat>& a, const Rational& t1, const Rational& t2,
                                  const Rational& t3, const std::vector<Rational>& taus, const MatModel& m,
                                  bool general)
{
    if (!(0 < t1 && t1 < t2 && t2 < t3)) throw std::invalid_argument("discontinuity family requires 0 < t1 < t2 < t3");
    DiscontinuityReport rep;
    Mat at_zero = smoment_numeric(NumericPair{{t1, Rational(0), t3, Rational(0), t2}, a}, m);
    Mat lim = discontinuity_limit(a, t1, t2, t3, m);
    rep.closed_form = discontinuity_closed_form(a, to_double(t1), to_double(t2), to_double(t3), m, general);
    rep.limit_gap = at_zero - lim;
    rep.mismatch = (rep.limit_gap - rep.closed_form).norm();
    for (const auto& tau : taus) {
        if (!(0 < tau && tau < t1)) throw std::invalid_argument("tau must satisfy 0 < tau < t1");
        Mat v = smoment_numeric(NumericPair{{t1, tau, t3, Rational(0), t2}, a}, m);
        rep.rows.push_back({tau, (v - lim).norm(), ((at_zero - v) - rep.closed_form).norm()});
    }
    return rep;
}

}  // namespace sauv
