#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace sauv {

using Rational = mpq_class;

Rational make_rational(std::int64_t num, std::int64_t den);
std::string to_string(const Rational& r);
std::string to_latex(const Rational& r);
Rational parse_rational(const std::string& s);
double to_double(const Rational& r);
int compare(const Rational& a, const Rational& b);

}  // namespace sauv
