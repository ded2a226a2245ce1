#pragma once

#include "sauv/rational.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace sauv {

// Rational linear form c + sum_i q_i t_i over formal time variables t1 < t2 < ...,
// all of which are assumed strictly positive.
class TimeExpr {
public:
    TimeExpr() = default;
    explicit TimeExpr(const Rational& c) : constant_(c) {}
    explicit TimeExpr(std::int64_t c) : constant_(c) {}

    static TimeExpr var(int index, const Rational& coef = 1);
    static TimeExpr parse(const std::string& s);

    const Rational& constant() const { return constant_; }
    const std::vector<std::pair<int, Rational>>& coefficients() const { return coefs_; }

    bool is_zero() const { return coefs_.empty() && constant_ == 0; }
    bool is_constant() const { return coefs_.empty(); }

    // -1, 0 or +1 under the standing order 0 < t1 < t2 < ...; throws if undecidable.
    int sign() const;

    double evaluate(const std::map<int, double>& values) const;
    Rational evaluate_exact(const std::map<int, Rational>& values) const;
    // Replace variables by linear forms; unlisted variables are kept.
    TimeExpr substitute(const std::map<int, TimeExpr>& values) const;

    TimeExpr operator+(const TimeExpr& o) const;
    TimeExpr operator-(const TimeExpr& o) const;
    TimeExpr operator-() const;
    TimeExpr operator*(const Rational& r) const;

    std::string to_string() const;
    std::string to_latex() const;

    friend int compare(const TimeExpr& a, const TimeExpr& b);
    friend bool operator==(const TimeExpr& a, const TimeExpr& b) { return compare(a, b) == 0; }
    friend bool operator<(const TimeExpr& a, const TimeExpr& b) { return compare(a, b) < 0; }

private:
    void canonicalize();

    Rational constant_{0};
    std::vector<std::pair<int, Rational>> coefs_;  // sorted by variable, nonzero
};

// Sign of a - b under the standing order.
inline int compare_times(const TimeExpr& a, const TimeExpr& b) { return (a - b).sign(); }

}  // namespace sauv
