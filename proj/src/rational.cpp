#include "sauv/rational.hpp"

#include <stdexcept>

namespace sauv {

Rational make_rational(std::int64_t num, std::int64_t den)
{
    if (den == 0) throw std::invalid_argument("zero denominator");
    Rational r(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

std::string to_latex(const Rational& r)
{
    if (r.get_den() == 1) return r.get_num().get_str();
    std::string sign = sgn(r) < 0 ? "-" : "";
    mpz_class num = abs(r.get_num());
    return sign + "\\frac{" + num.get_str() + "}{" + r.get_den().get_str() + "}";
}

Rational parse_rational(const std::string& s)
{
    Rational r;
    auto ok = [](const std::string& part) {
        std::size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
        if (i >= part.size()) return false;
        for (; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9') return false;
        return true;
    };
    auto slash = s.find('/');
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!ok(num) || !ok(den) || den.find('-') != std::string::npos)
        throw std::invalid_argument("invalid rational literal '" + s + "'");
    mpz_class n(num[0] == '+' ? num.substr(1) : num), d(den);
    if (d == 0) throw std::invalid_argument("invalid rational literal '" + s + "'");
    r = Rational(n, d);
    r.canonicalize();
    return r;
}

double to_double(const Rational& r) { return r.get_d(); }

int compare(const Rational& a, const Rational& b)
{
    int c = cmp(a, b);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

}  // namespace sauv
