#include "pgn/dimension_formulas.hpp"

#include <algorithm>
#include <cmath>

namespace pgn {

namespace {

void require_tau(const Dims& dims, double tau) {
  if (!(tau >= 0 && tau <= 1.0 / dims.n)) throw FormulaDomainError("tau must lie in [0, 1/n]");
}

void require_tau(const Dims& dims, const Rational& tau) {
  if (tau < 0 || tau > make_rational(1, dims.n)) throw FormulaDomainError("tau must lie in [0, 1/n]");
}

void require_open_half(double x) {
  if (!(x > 0 && x < 0.5)) throw FormulaDomainError("tau must lie in (0, 1/2)");
}

}  // namespace

Rational delta_mn(const Dims& dims) {
  require_valid_dims(dims);
  return dims.m * dims.n * (1 - make_rational(1, dims.d()));
}

double omega_to_tau(std::optional<double> omega, const Dims& dims) {
  require_valid_dims(dims);
  const double base = static_cast<double>(dims.n) / dims.m;
  if (!omega || std::isinf(*omega)) return 1.0 / dims.n;
  if (!(*omega >= base)) throw FormulaDomainError("omega must be at least n/m");
  return (*omega - base) / (dims.n * (*omega + 1));
}

std::optional<double> tau_to_omega(double tau, const Dims& dims) {
  require_valid_dims(dims);
  require_tau(dims, tau);
  if (tau == 1.0 / dims.n) return std::nullopt;
  const double base = static_cast<double>(dims.n) / dims.m;
  return (base + dims.n * tau) / (1 - dims.n * tau);
}

Rational omega_to_tau(const std::optional<Rational>& omega, const Dims& dims) {
  require_valid_dims(dims);
  const Rational base = make_rational(dims.n, dims.m);
  if (!omega) return make_rational(1, dims.n);
  if (*omega < base) throw FormulaDomainError("omega must be at least n/m");
  return (*omega - base) / (dims.n * (*omega + 1));
}

std::optional<Rational> tau_to_omega(const Rational& tau, const Dims& dims) {
  require_valid_dims(dims);
  require_tau(dims, tau);
  if (tau == make_rational(1, dims.n)) return std::nullopt;
  return Rational((make_rational(dims.n, dims.m) + dims.n * tau) / (1 - dims.n * tau));
}

Rational packing_rate(const Dims& dims, const Rational& tau) {
  require_valid_dims(dims);
  require_tau(dims, tau);
  const int m = dims.m, n = dims.n, d = dims.d();
  const Rational w = make_rational(m * n, d);
  Rational best = m * n - m;
  best = std::max<Rational>(best, delta_mn(dims) - w * (d + m) * tau);
  if (m > 1) {
    Rational denom = 1 - make_rational(m * n, m - 1) * tau;
    if (denom > 0) best = std::max<Rational>(best, m * n - w * (1 + m * tau) / denom);
  }
  return best;
}

double packing_rate(const Dims& dims, double tau) {
  require_valid_dims(dims);
  require_tau(dims, tau);
  const double m = dims.m, n = dims.n, d = dims.d();
  const double w = m * n / d;
  double best = std::max(m * n - m, to_double(delta_mn(dims)) - w * (d + m) * tau);
  if (dims.m > 1) {
    double denom = 1 - m * n / (m - 1) * tau;
    if (denom > 0) best = std::max(best, m * n - w * (1 + m * tau) / denom);
  }
  return best;
}

bool packing_rate_is_exact(const Dims& dims) { return dims.n >= 2; }

std::pair<Rational, Rational> packing_transitions(const Dims& dims) {
  require_valid_dims(dims);
  const int m = dims.m, n = dims.n, d = dims.d();
  return {make_rational(m * m - d, m * n * (d + m)), make_rational(m, n * (m + d))};
}

Rational fmn_k(const Dims& dims, int k) {
  require_valid_dims(dims);
  const int m = dims.m, n = dims.n, d = dims.d();
  if (k < 1 || k > d - 1) throw FormulaDomainError("k must lie in [1, d-1]");
  return m * n - make_rational(static_cast<long>(k) * (d - k) * m * n, static_cast<long>(d) * d) -
         frac(make_rational(k * m, d)) * frac(make_rational(k * n, d));
}

double sing12_tau0() { return (3 * std::sqrt(2.0) - 2) / 14; }

double hd_sing12(double tau) {
  require_open_half(tau);
  if (tau <= sing12_tau0())
    return 4.0 / 3 - 4.0 / 3 * std::sqrt(tau - 6 * tau * tau * tau + 4 * std::pow(tau, 4)) - 2 * tau +
           8.0 / 3 * tau * tau;
  return (1 - 2 * tau) / (1 + tau);
}

double pd_sing12(double tau) {
  require_open_half(tau);
  return tau <= 0.125 ? (4 - 8 * tau) / 3 : 1.0;
}

Rational sing12_family_rate(const Rational& x, const Rational& y) {
  if (!(x > 0 && x < make_rational(1, 2))) throw FormulaDomainError("x must lie in (0, 1/2)");
  if (y < x / (make_rational(1, 2) - x)) throw FormulaDomainError("y must be at least x/(1/2 - x)");
  return make_rational(2, 3) * (-x + (2 - 7 * x) * y + (3 - 6 * x) * y * y) / (y + (2 + 2 * x) * y * y);
}

double sing12_family_rate(double x, double y) {
  require_open_half(x);
  if (y < x / (0.5 - x)) throw FormulaDomainError("y must be at least x/(1/2 - x)");
  return 2.0 / 3 * (-x + (2 - 7 * x) * y + (3 - 6 * x) * y * y) / (y + (2 + 2 * x) * y * y);
}

double sing12_critical_y(double x) {
  require_open_half(x);
  double denom = 1 - 4 * x - 14 * x * x;
  if (!(denom > 0)) throw FormulaDomainError("no interior maximum for tau >= tau0");
  return (std::sqrt(x - 6 * x * x * x + 4 * std::pow(x, 4)) + 2 * x + 2 * x * x) / denom;
}

Rational avg_singular_rate(const Dims& dims, const Rational& p) {
  require_valid_dims(dims);
  if (p < 0 || p > 1) throw FormulaDomainError("p must lie in [0, 1]");
  return p * delta_mn(dims) + (1 - p) * dims.m * dims.n;
}

Rational omega_approx_rate(const Dims& dims, const Rational& tau) {
  require_valid_dims(dims);
  require_tau(dims, tau);
  return dims.m * dims.n * (1 - tau);
}

Rational hsmall_envelope(const Dims& dims, const Rational& tau) {
  require_valid_dims(dims);
  if (tau < 0) throw FormulaDomainError("tau must be nonnegative");
  return delta_mn(dims) - make_rational(dims.m * dims.m * dims.n, dims.d()) * tau;
}

GoldenResult golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol,
                                int max_iter) {
  if (!(lo <= hi)) throw std::invalid_argument("golden section needs lo <= hi");
  const double inv_phi = (std::sqrt(5.0) - 1) / 2;
  GoldenResult r;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  r.evaluations = 2;
  for (int i = 0; i < max_iter && b - a > tol; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++r.evaluations;
  }
  r.x = fc >= fd ? c : d;
  r.value = std::max(fc, fd);
  double fa = f(a), fb = f(b);
  r.evaluations += 2;
  if (fa > r.value) r = {a, fa, r.evaluations};
  if (fb > r.value) r = {b, fb, r.evaluations};
  return r;
}

std::vector<Sing12Row> sing12_curve(int samples) {
  if (samples < 3) throw std::invalid_argument("sing12 curve needs at least 3 samples");
  std::vector<double> taus{0.125, sing12_tau0(), 0.4};
  const int extra = samples - 3;
  for (int i = 1; i <= extra; ++i) taus.push_back(0.5 * i / (extra + 1));
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
  std::vector<Sing12Row> rows;
  for (double t : taus) rows.push_back({t, hd_sing12(t), pd_sing12(t)});
  return rows;
}

}  // namespace pgn
