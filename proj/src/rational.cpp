#include "pgn/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace pgn {

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos || s.find_first_of("eE") != std::string::npos)
      throw std::invalid_argument("unsupported rational literal: " + text);
    bool neg = s[0] == '-';
    std::string body = (s[0] == '-' || s[0] == '+') ? s.substr(1) : s;
    dot = body.find('.');
    std::string digits = body.substr(0, dot) + body.substr(dot + 1);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad decimal: " + text);
    mpz_class num(digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, body.size() - dot - 1);
    Rational r(num, den);
    r.canonicalize();
    return neg ? Rational(-r) : r;
  }
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + text);
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(10); }

Rational from_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("non-finite value cannot be made rational");
  Rational r(x);
  r.canonicalize();
  return r;
}

Rational dyadic_floor(double x, unsigned bits) {
  if (!std::isfinite(x)) throw std::domain_error("non-finite value cannot be made rational");
  double scaled = std::floor(std::ldexp(x, static_cast<int>(bits)));
  mpz_class num(scaled);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, bits);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

mpz_class floor_of(const Rational& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

mpz_class ceil_of(const Rational& r) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Rational frac(const Rational& r) { return r - Rational(floor_of(r)); }

bool is_integer(const Rational& r) { return r.get_den() == 1; }

double to_double(const Rational& r) { return r.get_d(); }

Rational make_rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

RVec scaled(const RVec& v, const Rational& c) {
  RVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * c;
  return out;
}

RVec axpy(const RVec& x, const Rational& a, const RVec& y) {
  RVec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * y[i];
  return out;
}

}  // namespace pgn
