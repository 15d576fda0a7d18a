#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace pgn {

using Rational = mpq_class;
using RVec = std::vector<Rational>;

// Accepts "p/q", "p", and plain decimals such as "-0.125".
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);

// Exact binary value of a finite double.
Rational from_double(double x);
// floor(x * 2^bits) / 2^bits.
Rational dyadic_floor(double x, unsigned bits);

mpz_class floor_of(const Rational& r);
mpz_class ceil_of(const Rational& r);
Rational frac(const Rational& r);
bool is_integer(const Rational& r);
double to_double(const Rational& r);

Rational make_rational(long num, long den);

RVec scaled(const RVec& v, const Rational& c);
RVec axpy(const RVec& x, const Rational& a, const RVec& y);  // x + a*y

}  // namespace pgn
