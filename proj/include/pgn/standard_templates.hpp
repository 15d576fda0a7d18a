#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pgn/template.hpp"

namespace pgn {

// Raised when a pair of points violates one of the standard-template feasibility inequalities.
// `inequality()` is one of "eps_slope_range", "unit_dimension_bound", "middle_clearance".
class InfeasibleSpecError : public std::invalid_argument {
 public:
  InfeasibleSpecError(std::string inequality, const std::string& what)
      : std::invalid_argument(what), inequality_(std::move(inequality)) {}
  const std::string& inequality() const { return inequality_; }

 private:
  std::string inequality_;
};

struct StandardPoint {
  Rational t;
  Rational eps;  // the pinned bottom value is -eps
};

// Throws InfeasibleSpecError naming the first violated inequality.
void check_standard_pair(const Dims& dims, const StandardPoint& p1, const StandardPoint& p2);

// Finite template on [t1, t2] with f_1 = f_2 = -eps at both ends.
Template build_standard_pair(const Dims& dims, const StandardPoint& p1, const StandardPoint& p2);
// Glue consecutive standard pairs into one finite template.
Template build_standard_chain(const Dims& dims, const std::vector<StandardPoint>& points);

// f[tau, lambda]: one period on [1, lambda], equivariant with factor lambda.
Template build_two_param(const Dims& dims, const Rational& tau, const Rational& lambda);

// 2x2 family: s[(1,-tau),(gamma,-lambda tau)], constant on [gamma, lambda], equivariant.
// Without gamma, uses gamma = 1 - 2 tau + 10 lambda tau.
Template build_2x2_three_param(const Rational& tau, const Rational& lambda,
                               std::optional<Rational> gamma = std::nullopt);

// k-singular template alternating long S_j^+ / S_j^- stretches with a short exchange in which
// f_k leaves its block and returns. `ratio` is long time over exchange time per period; the
// period factor is 1 + 1/(ratio + 1).
Template build_ksingular(const Dims& dims, int k, int j, const Rational& ratio = Rational(100));

struct N1Case2Result {
  Template tmpl;         // m x 1
  Rational tau_prime;    // (m-1) tau / (1 - m tau)
  Rational lambda;
  Rational t0;           // 1 + m/(m-1) tau'
  Rational top_at_t0;    // tau'/(m-1)
  Rational ratio;        // top_at_t0 / t0
  Rational tau_achieved; // min over the period of -f_1(t)/t for the m x 1 template
};

// Negated and reversed 1 x m template f[tau', lambda]. Without lambda the smallest integer
// satisfying the feasibility bound, plus one, is used.
N1Case2Result build_n1_case2(int m, const Rational& tau, std::optional<Rational> lambda = std::nullopt);

// m x 1 template: s[(gamma,-eps),(1,-tau)] followed by f_1' = f_2' = -(m-1)/(2m) on [1, gamma lambda].
Template build_n1_case1(int m, const Rational& tau, const Rational& gamma, const Rational& lambda);

struct StarkovSequence {
  Template tmpl;
  std::vector<StandardPoint> points;
};

// Standard template from the rule t_{k+1} = t_k + min(phi(t_k)/2, t_k),
// eps_k = min(phi(t_k)/2, sqrt(t_k - t_{k-1})), eps_0 = 0, with phi linearly interpolated from
// an increasing table. Values are rounded down to multiples of 2^-30.
StarkovSequence build_starkov(const Dims& dims, const std::vector<std::pair<double, double>>& phi_table,
                              double t0, int count);
double interpolate_table(const std::vector<std::pair<double, double>>& table, double t);

// s[(1,0),(1+p eps,0)] then zero up to 1+eps, equivariant with factor 1+eps.
Template build_sing_on_average(const Dims& dims, const Rational& p, const Rational& eps);

// Drop interior breakpoints at which no slope changes.
Template simplify(const Template& t);

}  // namespace pgn
