#include "sauv/time_expr.hpp"

#include "sauv/errors.hpp"

#include <algorithm>
#include <cctype>

namespace sauv {

TimeExpr TimeExpr::var(int index, const Rational& coef)
{
    if (index < 1) throw std::invalid_argument("time variable index must be >= 1");
    TimeExpr t;
    if (coef != 0) t.coefs_.emplace_back(index, coef);
    return t;
}

void TimeExpr::canonicalize()
{
    std::sort(coefs_.begin(), coefs_.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<std::pair<int, Rational>> out;
    for (const auto& [v, q] : coefs_) {
        if (!out.empty() && out.back().first == v)
            out.back().second += q;
        else
            out.emplace_back(v, q);
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto& p) { return p.second == 0; }), out.end());
    coefs_ = std::move(out);
}

int TimeExpr::sign() const
{
    if (coefs_.empty()) return constant_ > 0 ? 1 : (constant_ < 0 ? -1 : 0);
    // Rewrite in the gap basis g_k = t_k - t_{k-1} > 0: coefficient of g_k is the tail sum.
    int maxv = coefs_.back().first;
    bool any_pos = constant_ > 0, any_neg = constant_ < 0;
    Rational tail = 0;
    std::size_t idx = coefs_.size();
    for (int k = maxv; k >= 1; --k) {
        while (idx > 0 && coefs_[idx - 1].first >= k) {
            if (coefs_[idx - 1].first == k) tail += coefs_[idx - 1].second;
            --idx;
        }
        // tail only accumulates each variable once since variables are visited in decreasing order
        if (tail > 0) any_pos = true;
        if (tail < 0) any_neg = true;
    }
    if (any_pos && !any_neg) return 1;
    if (any_neg && !any_pos) return -1;
    throw std::domain_error("sign of time expression '" + to_string() + "' is not determined by 0 < t1 < t2 < ...");
}

double TimeExpr::evaluate(const std::map<int, double>& values) const
{
    double v = to_double(constant_);
    for (const auto& [k, q] : coefs_) {
        auto it = values.find(k);
        if (it == values.end()) throw std::invalid_argument("no value for time variable t" + std::to_string(k));
        v += to_double(q) * it->second;
    }
    return v;
}

Rational TimeExpr::evaluate_exact(const std::map<int, Rational>& values) const
{
    Rational v = constant_;
    for (const auto& [k, q] : coefs_) {
        auto it = values.find(k);
        if (it == values.end()) throw std::invalid_argument("no value for time variable t" + std::to_string(k));
        v += q * it->second;
    }
    return v;
}

TimeExpr TimeExpr::substitute(const std::map<int, TimeExpr>& values) const
{
    TimeExpr v(constant_);
    for (const auto& [k, q] : coefs_) {
        auto it = values.find(k);
        v = v + (it == values.end() ? var(k, q) : it->second * q);
    }
    return v;
}

TimeExpr TimeExpr::operator+(const TimeExpr& o) const
{
    TimeExpr r = *this;
    r.constant_ += o.constant_;
    r.coefs_.insert(r.coefs_.end(), o.coefs_.begin(), o.coefs_.end());
    r.canonicalize();
    return r;
}

TimeExpr TimeExpr::operator-() const
{
    TimeExpr r = *this;
    r.constant_ = -r.constant_;
    for (auto& p : r.coefs_) p.second = -p.second;
    return r;
}

TimeExpr TimeExpr::operator-(const TimeExpr& o) const { return *this + (-o); }

TimeExpr TimeExpr::operator*(const Rational& q) const
{
    TimeExpr r = *this;
    r.constant_ *= q;
    for (auto& p : r.coefs_) p.second *= q;
    r.canonicalize();
    return r;
}

namespace {

std::string render(const TimeExpr& t, bool latex)
{
    std::string out;
    auto emit_term = [&](const Rational& q, const std::string& body) {
        Rational a = q < 0 ? -q : q;
        if (out.empty())
            out += q < 0 ? "-" : "";
        else
            out += q < 0 ? "-" : "+";
        std::string coef = latex ? to_latex(a) : to_string(a);
        if (body.empty())
            out += coef;
        else if (a == 1)
            out += body;
        else
            out += coef + (latex ? " " : "*") + body;
    };
    for (const auto& [k, q] : t.coefficients())
        emit_term(q, latex ? "t_{" + std::to_string(k) + "}" : "t" + std::to_string(k));
    if (t.constant() != 0 || out.empty()) emit_term(t.constant(), "");
    return out;
}

class TimeParser {
public:
    explicit TimeParser(const std::string& s) : s_(s) {}

    TimeExpr run()
    {
        TimeExpr t = sum();
        skip();
        if (pos_ != s_.size()) throw ParseError(pos_, "unexpected character in time expression");
        return t;
    }

private:
    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    TimeExpr sum()
    {
        TimeExpr acc;
        bool neg = false;
        if (eat('-')) neg = true;
        else eat('+');
        acc = product();
        if (neg) acc = -acc;
        for (;;) {
            if (eat('+')) acc = acc + product();
            else if (eat('-')) acc = acc - product();
            else return acc;
        }
    }
    TimeExpr product()
    {
        TimeExpr acc = atom();
        while (eat('*')) {
            TimeExpr rhs = atom();
            if (acc.is_constant()) acc = rhs * acc.constant();
            else if (rhs.is_constant()) acc = acc * rhs.constant();
            else throw ParseError(pos_, "time expressions must be linear");
        }
        return acc;
    }
    std::int64_t integer()
    {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) throw ParseError(pos_, "expected integer");
        return std::stoll(s_.substr(start, pos_ - start));
    }
    TimeExpr atom()
    {
        skip();
        if (pos_ >= s_.size()) throw ParseError(pos_, "unexpected end of time expression");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            TimeExpr t = sum();
            if (!eat(')')) throw ParseError(pos_, "expected ')'");
            return t;
        }
        if (c == 't') {
            ++pos_;
            std::int64_t k = integer();
            if (k < 1) throw ParseError(pos_, "time variable index must be >= 1");
            return TimeExpr::var(static_cast<int>(k));
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::int64_t n = integer();
            skip();
            if (pos_ < s_.size() && s_[pos_] == '/' ) {
                ++pos_;
                std::int64_t d = integer();
                if (d == 0) throw ParseError(pos_, "zero denominator");
                return TimeExpr(make_rational(n, d));
            }
            return TimeExpr(make_rational(n, 1));
        }
        throw ParseError(pos_, std::string("unexpected '") + c + "' in time expression");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

TimeExpr TimeExpr::parse(const std::string& s) { return TimeParser(s).run(); }

std::string TimeExpr::to_string() const { return render(*this, false); }
std::string TimeExpr::to_latex() const { return render(*this, true); }

int compare(const TimeExpr& a, const TimeExpr& b)
{
    if (int c = sauv::compare(a.constant_, b.constant_)) return c;
    std::size_t n = std::min(a.coefs_.size(), b.coefs_.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a.coefs_[i].first != b.coefs_[i].first) return a.coefs_[i].first < b.coefs_[i].first ? -1 : 1;
        if (int c = sauv::compare(a.coefs_[i].second, b.coefs_[i].second)) return c;
    }
    if (a.coefs_.size() != b.coefs_.size()) return a.coefs_.size() < b.coefs_.size() ? -1 : 1;
    return 0;
}

}  // namespace sauv
