#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pgn/template.hpp"

namespace pgn {

class FormulaDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// mn(1 - 1/(m+n)).
Rational delta_mn(const Dims& dims);

// tau = (1/n)(omega - n/m)/(omega + 1). An empty omega stands for infinity (tau = 1/n).
double omega_to_tau(std::optional<double> omega, const Dims& dims);
std::optional<double> tau_to_omega(double tau, const Dims& dims);
Rational omega_to_tau(const std::optional<Rational>& omega, const Dims& dims);
std::optional<Rational> tau_to_omega(const Rational& tau, const Dims& dims);

// max(mn - m, delta - (mn/d)(d+m) tau, mn - (mn/d)(1+m tau)/(1 - mn tau/(m-1))). The last
// branch is dropped when m = 1 or when its denominator is not positive.
Rational packing_rate(const Dims& dims, const Rational& tau);
double packing_rate(const Dims& dims, double tau);
// The packing formula is an equality for n >= 2 and only a lower bound for n = 1.
bool packing_rate_is_exact(const Dims& dims);
// Transition points (m^2 - d)/(mn(d+m)) and m/(n(m+d)).
std::pair<Rational, Rational> packing_transitions(const Dims& dims);

// mn - k(d-k)mn/d^2 - {km/d}{kn/d}.
Rational fmn_k(const Dims& dims, int k);

double sing12_tau0();
double hd_sing12(double tau);
double pd_sing12(double tau);
// Lower rate of the 1 x 2 standard template with tau = x and lambda = 1 + 3y, valid for
// y >= x/(1/2 - x).
Rational sing12_family_rate(const Rational& x, const Rational& y);
double sing12_family_rate(double x, double y);
// Maximizer of sing12_family_rate over y below 1 - 4x - 14x^2 > 0.
double sing12_critical_y(double x);

Rational avg_singular_rate(const Dims& dims, const Rational& p);
Rational omega_approx_rate(const Dims& dims, const Rational& tau);
Rational hsmall_envelope(const Dims& dims, const Rational& tau);

struct GoldenResult {
  double x = 0;
  double value = 0;
  int evaluations = 0;
};
// Maximize a unimodal function on [lo, hi] by golden-section search.
GoldenResult golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12,
                                int max_iter = 400);

struct Sing12Row {
  double tau, hd, pd;
};
// Rows at 1/8, tau0 and 2/5, plus samples - 3 evenly spaced points of (0, 1/2), sorted by tau
// with exact duplicates dropped.
std::vector<Sing12Row> sing12_curve(int samples);

}  // namespace pgn
