#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pgn/template.hpp"

namespace pgn {

class UnbalancedTemplateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedPreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// max(m^2 n/d |f_1|, m n^2/d |f_d|)
Rational potential_phi(const Template& t, const Rational& time);
// max(m n/d |(m+1) f_1 + (d-1) f_2|, m n^2/d |f_d|); needs n >= 2.
Rational potential_psi(const Template& t, const Rational& time);

enum class PhiCase { case1, case2, case3a, case3b, strict, unclassified };
std::string to_string(PhiCase c);

// Sub-intervals are the linearity intervals split where the potential switches branch or
// where f vanishes. Sub-intervals on which f is identically zero are reported as skipped.
struct PhiIntervalReport {
  Rational a;
  std::optional<Rational> b;
  bool skipped = false;
  Rational lhs;  // phi'
  Rational rhs;  // delta_{m,n} - delta(f, I)
  Rational gap;  // rhs - lhs
  PhiCase equality_case = PhiCase::strict;
  bool ok = true;
};

struct PsiIntervalReport {
  Rational a;
  std::optional<Rational> b;
  bool skipped = false;
  Rational lhs;
  Rational rhs;
  bool case1 = false;  // f_1 < f_2 = ... = f_d
  bool case2 = false;  // f_1 < f_2 < f_3 = ... = f_d with f_2' = -1/n
  bool ok = true;
};

// Equivariant templates are checked over their stored period; the potentials scale with t.
std::vector<PhiIntervalReport> check_phi_inequality(const Template& t);
std::vector<PsiIntervalReport> check_psi_inequality(const Template& t);

}  // namespace pgn
