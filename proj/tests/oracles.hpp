#pragma once

// Independent reference computations used by the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <vector>

#include "pgn/rational.hpp"
#include "pgn/template.hpp"

namespace pgn::oracle {

// delta(f, I) by direct pair counting. Blocks are read off the midpoint values; within a block
// the up indices come first, and the number of up indices solves M+/m - M-/n = block slope.
inline int pair_count_delta(const Dims& dims, const Piece& piece) {
  const int d = dims.d();
  RVec mid = piece.midpoint_value();
  std::vector<bool> up(static_cast<std::size_t>(d), false);
  int lo = 0;
  while (lo < d) {
    int hi = lo + 1;
    while (hi < d && mid[hi] == mid[lo]) ++hi;
    Rational s = 0;
    for (int i = lo; i < hi; ++i) s += piece.slope[i];
    Rational plus = (s + Rational(hi - lo) / dims.n) * dims.m * dims.n / d;
    if (!is_integer(plus) || plus < 0 || plus > hi - lo) return -1;
    const long count = plus.get_num().get_si();
    for (int i = lo; i < lo + count; ++i) up[i] = true;
    lo = hi;
  }
  int delta = 0;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      if (up[a] && !up[b]) ++delta;
  return delta;
}

// Midpoint-rule average of delta_at over [a, b].
inline double midpoint_average(const Template& t, const Rational& a, const Rational& b, long steps) {
  const Rational h = (b - a) / steps;
  double sum = 0;
  Rational x = a + h / 2;
  for (long i = 0; i < steps; ++i, x += h) sum += delta_at(t, x);
  return sum / static_cast<double>(steps);
}

// Lower rate of the exponentially periodic 1 x 2 family, x = tau and y = (lambda - 1)/3.
inline Rational sing12_fx(const Rational& x, const Rational& y) {
  return make_rational(2, 3) * (-x + (2 - 7 * x) * y + (3 - 6 * x) * y * y) / (y + (2 + 2 * x) * y * y);
}

inline double sing12_fx_sup(double x) {
  return 4.0 / 3 - (4.0 / 3) * std::sqrt(x - 6 * x * x * x + 4 * x * x * x * x) - 2 * x + (8.0 / 3) * x * x;
}

// Lower rate of the 2 x 2 three-parameter family.
inline Rational two_by_two_rate(const Rational& tau, const Rational& lambda) {
  return 3 - (6 * lambda * tau - 2 * tau) / ((1 - 1 / lambda) * (1 - 2 * tau + 6 * lambda * tau));
}

// Successive minima of diag(scale) Z^d by exhaustive search over the box [-R, R]^d, picking
// vectors in order of norm and keeping those that raise the (exact integer) rank.
inline std::vector<double> box_minima(const std::vector<double>& scale, int R) {
  const int d = static_cast<int>(scale.size());
  std::vector<std::pair<double, std::vector<long>>> all;
  std::vector<long> z(static_cast<std::size_t>(d), -R);
  while (true) {
    double s = 0;
    bool zero = true;
    for (int i = 0; i < d; ++i) {
      s += (scale[i] * z[i]) * (scale[i] * z[i]);
      zero = zero && z[i] == 0;
    }
    if (!zero) all.emplace_back(std::sqrt(s), z);
    int i = 0;
    while (i < d && z[i] == R) z[i++] = -R;
    if (i == d) break;
    ++z[i];
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::vector<Rational>> echelon;
  std::vector<double> minima;
  for (const auto& [norm, v] : all) {
    std::vector<Rational> r(v.begin(), v.end());
    for (const auto& row : echelon) {
      std::size_t p = 0;
      while (row[p] == 0) ++p;
      if (r[p] != 0) {
        Rational f = r[p] / row[p];
        for (std::size_t c = 0; c < r.size(); ++c) r[c] -= f * row[c];
      }
    }
    if (std::all_of(r.begin(), r.end(), [](const Rational& x) { return x == 0; })) continue;
    echelon.push_back(r);
    std::sort(echelon.begin(), echelon.end(), [](const auto& a, const auto& b) {
      auto lead = [](const std::vector<Rational>& x) {
        std::size_t p = 0;
        while (p < x.size() && x[p] == 0) ++p;
        return p;
      };
      return lead(a) < lead(b);
    });
    minima.push_back(norm);
    if (static_cast<int>(minima.size()) == d) break;
  }
  return minima;
}

}  // namespace pgn::oracle
