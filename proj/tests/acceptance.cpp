// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance [--known-failures 7,...]
//
// Exit status is 0 when every criterion passes, or when the failing set equals the
// --known-failures list exactly.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "oracles.hpp"
#include "pgn/dimension_formulas.hpp"
#include "pgn/game_sim.hpp"
#include "pgn/lattice_minima.hpp"
#include "pgn/potentials.hpp"
#include "pgn/standard_templates.hpp"
#include "pgn/template.hpp"

using namespace pgn;

namespace {

// Tolerances and budgets, one block per criterion.
constexpr double kC1Seconds = 1.0;
constexpr double kC2HausdorffTol = 1e-6;
constexpr double kC2PackingTol = 1e-3;
constexpr double kC2Lambda = 1e4;
constexpr double kC2MaxY = 1e9;
constexpr double kC2Seconds = 30.0;
constexpr double kC3FinalGap = 1e-2;
constexpr double kC3Seconds = 30.0;
constexpr int kRandomTemplates = 500;
constexpr std::uint64_t kTemplateSeed = 20240611;
constexpr double kC4GapSlack = 1e-12;
constexpr double kC4Seconds = 20.0;
constexpr double kC5Seconds = 10.0;
constexpr double kC6Seconds = 5.0;
constexpr long kC7Ratio = 1000;
constexpr double kC7Tol = 1e-2;
constexpr double kC7Seconds = 10.0;
constexpr int kC8Lattices = 200;
constexpr int kC8Box = 20;
constexpr double kC8Tol = 1e-9;
constexpr double kC8Seconds = 30.0;
constexpr double kC9Band = 2.5;
constexpr double kC9Seconds = 20.0;
constexpr double kC10Seconds = 1.0;
constexpr int kC11Turns = 40;
constexpr int kC11Seeds = 20;
constexpr double kC11Tol = 1e-8;
constexpr double kC11Seconds = 10.0;
constexpr double kC12MaxC = 20.0;
constexpr double kC12Seconds = 10.0;

struct Verdict {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Verdict figure_three_identity() {
  int checked = 0, bad = 0;
  for (int m = 1; m <= 5; ++m)
    for (int n = 1; n <= 5; ++n)
      for (int T : {1, 3, 7}) {
        Dims dims{m, n};
        Template t = build_standard_pair(dims, {0, 0}, {T, 0});
        ++checked;
        if (contraction_average(t, 0, T) != delta_mn(dims)) ++bad;
      }
  return {bad == 0, std::to_string(checked - bad) + "/" + std::to_string(checked) + " exact"};
}

double sing12_rate(const Rational& x, double y) {
  try {
    return to_double(*asymptotic_rates(build_two_param({1, 2}, x, 1 + 3 * from_double(y))).lower);
  } catch (const std::exception&) {
    return -std::numeric_limits<double>::infinity();
  }
}

std::vector<Rational> sing12_taus() {
  std::vector<Rational> out;
  for (int i = 1; i <= 20; ++i) out.push_back(make_rational(i, 42));
  return out;
}

Verdict sing12_reproduction() {
  double worst_hd = 0, worst_pd = 0;
  for (const Rational& x : sing12_taus()) {
    const double xd = to_double(x);
    const double y_min = xd / (0.5 - xd);
    auto f = [&](double u) { return sing12_rate(x, std::exp(u)); };
    auto best = golden_section_max(f, std::log(y_min), std::log(kC2MaxY), 1e-10);
    worst_hd = std::max(worst_hd, std::abs(best.value - hd_sing12(xd)));
    auto packing = asymptotic_rates(build_two_param({1, 2}, x, Rational(kC2Lambda)));
    worst_pd = std::max(worst_pd, std::abs(to_double(*packing.upper) - pd_sing12(xd)));
  }
  return {worst_hd <= kC2HausdorffTol && worst_pd <= kC2PackingTol,
          "max |sup_y rate - HD| = " + fmt(worst_hd) + ", max |packing - PD| = " + fmt(worst_pd)};
}

Verdict packing_limit() {
  std::ostringstream why;
  bool pass = true;
  double worst_final = 0;
  for (Dims dims : {Dims{1, 2}, Dims{2, 2}, Dims{3, 1}})
    for (Rational tau : {make_rational(1, 20), make_rational(3, 20)}) {
      const double target = to_double(packing_rate(dims, tau));
      double previous = std::numeric_limits<double>::infinity();
      for (int lambda : {10, 100, 1000}) {
        double gap = std::abs(to_double(*asymptotic_rates(build_two_param(dims, tau, lambda)).upper) - target);
        if (gap > previous) {
          pass = false;
          why << " non-monotone at (" << dims.m << "," << dims.n << ") tau=" << to_string(tau) << ";";
        }
        previous = gap;
      }
      worst_final = std::max(worst_final, previous);
      if (previous >= kC3FinalGap) {
        pass = false;
        why << " gap " << fmt(previous) << " at (" << dims.m << "," << dims.n << ") tau=" << to_string(tau) << ";";
      }
    }
  return {pass, "worst final gap " + fmt(worst_final) + why.str()};
}

std::vector<Template> random_templates() {
  std::mt19937_64 rng(kTemplateSeed);
  std::vector<Template> out;
  while (static_cast<int>(out.size()) < kRandomTemplates) {
    Dims dims = testgen::random_dims(rng);
    out.push_back(testgen::random_chain(rng, dims));
  }
  return out;
}

Verdict phi_regression(const std::vector<Template>& templates) {
  long intervals = 0, strict = 0, failures = 0;
  for (const auto& t : templates) {
    if (!validate_template(t).ok || !balance_check(t)) {
      ++failures;
      continue;
    }
    const double bound = 1.0 / std::max(t.dims.m, t.dims.n) - kC4GapSlack;
    for (const auto& r : check_phi_inequality(t)) {
      if (r.skipped) continue;
      ++intervals;
      if (!r.ok) ++failures;
      if (r.equality_case == PhiCase::strict) {
        ++strict;
        if (to_double(r.gap) < bound) ++failures;
      }
    }
  }
  return {failures == 0, std::to_string(intervals) + " intervals, " + std::to_string(strict) + " strict, " +
                             std::to_string(failures) + " failures"};
}

Verdict delta_oracle(const std::vector<Template>& templates) {
  long intervals = 0, mismatches = 0;
  for (const auto& t : templates) {
    auto pieces = linearity_intervals(t);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      ++intervals;
      if (analyze_interval(t, i).delta != oracle::pair_count_delta(t.dims, pieces[i])) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(intervals) + " intervals, " + std::to_string(mismatches) + " mismatches"};
}

Verdict two_by_two_formula() {
  const std::vector<std::pair<Rational, Rational>> params = {
      {make_rational(1, 100), 20},  {make_rational(1, 100), 10},  {make_rational(1, 200), 40},
      {make_rational(1, 200), 5},   {make_rational(1, 500), 100}, {make_rational(1, 1000), 3},
      {make_rational(1, 1000), 50}, {make_rational(1, 50), 2},    {make_rational(3, 1000), make_rational(7, 2)},
      {make_rational(1, 300), make_rational(25, 2)}};
  int exact = 0;
  std::string errors;
  for (const auto& [tau, lambda] : params) {
    try {
      auto rates = asymptotic_rates(build_2x2_three_param(tau, lambda));
      if (*rates.lower == oracle::two_by_two_rate(tau, lambda)) ++exact;
    } catch (const std::exception& e) {
      errors += " (" + to_string(tau) + ", " + to_string(lambda) + "): " + e.what() + ";";
    }
  }
  return {exact == static_cast<int>(params.size()),
          std::to_string(exact) + "/" + std::to_string(params.size()) + " exact" + errors};
}

Verdict ksingular_formula() {
  struct Case {
    int m, n, j;
  };
  bool pass = true;
  std::ostringstream out;
  for (Case c : {Case{2, 1, 1}, Case{1, 2, 1}, Case{2, 2, 2}, Case{3, 2, 2}}) {
    Dims dims{c.m, c.n};
    const double target = to_double(fmn_k(dims, c.j));
    // j is k - 1 or k; try the admissible k in increasing order.
    std::string outcome = "no admissible k";
    bool ok = false;
    for (int k : {c.j, c.j + 1}) {
      if (k < 2 || k > dims.d() - 1) continue;
      try {
        double rate = to_double(*asymptotic_rates(build_ksingular(dims, k, c.j, Rational(kC7Ratio))).lower);
        ok = std::abs(rate - target) < kC7Tol;
        outcome = "k=" + std::to_string(k) + " rate " + fmt(rate) + " vs " + fmt(target);
        break;
      } catch (const std::exception& e) {
        outcome = "k=" + std::to_string(k) + " " + e.what();
      }
    }
    pass = pass && ok;
    out << " (" << c.m << "," << c.n << ",j=" << c.j << ") " << (ok ? "ok" : "FAILED: " + outcome) << ";";
  }
  return {pass, out.str()};
}

Verdict lattice_oracle() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> logscale(-1.0, 1.0);
  int agree = 0;
  double worst = 0;
  for (int s = 0; s < kC8Lattices; ++s) {
    const int d = 2 + s % 2;
    std::vector<double> scale(static_cast<std::size_t>(d), 1.0);
    if (s % 4 >= 2) {
      double total = 0;
      for (int i = 0; i + 1 < d; ++i) total += (scale[i] = logscale(rng));
      scale[d - 1] = -total;
      for (auto& x : scale) x = std::exp(x);
    }
    auto U = testgen::random_unimodular(rng, d);
    std::vector<std::vector<double>> columns(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(d)));
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r) columns[c][r] = scale[r] * static_cast<double>(U[r][c]);
    auto got = successive_minima(LatticeState::from_columns(columns));
    auto want = oracle::box_minima(scale, kC8Box);
    double diff = 0;
    for (int j = 0; j < d; ++j) diff = std::max(diff, std::abs(got.minima[j] - want[j]));
    worst = std::max(worst, diff);
    if (diff <= kC8Tol) ++agree;
  }
  return {agree == kC8Lattices,
          std::to_string(agree) + "/" + std::to_string(kC8Lattices) + " agree, max norm difference " + fmt(worst)};
}

Verdict minkowski_band() {
  const auto grid = uniform_grid(0, 30, 0.125);
  double worst = 0;
  for (const char* spec : {"zero", "golden", "rational:1/3"}) {
    auto P = h_profile(named_flow_matrix({1, 1}, spec), grid);
    for (const auto& h : P.h) {
      double s = 0;
      for (double x : h) s += x;
      worst = std::max(worst, std::abs(s));
    }
  }
  return {worst <= kC9Band, "max |sum h| = " + fmt(worst)};
}

// Nine vertices of a regular simplex in R^8 with circumradius 2/3, so all edges are 1.
std::vector<Point> simplex_nine() {
  std::vector<Point> out;
  for (int v = 0; v < 9; ++v) {
    std::vector<double> e(9, -1.0 / 9);
    e[v] += 1;
    Point p(8, 0.0);
    // Orthonormal basis of the sum-zero hyperplane (Helmert rows).
    for (int r = 1; r <= 8; ++r) {
      double s = 0;
      for (int i = 0; i < r; ++i) s += e[i];
      s -= r * e[r];
      p[r - 1] = s / std::sqrt(static_cast<double>(r) * (r + 1)) / std::sqrt(2.0);
    }
    out.push_back(p);
  }
  return out;
}

Verdict score_exactness() {
  bool pass = true;
  std::ostringstream out;
  struct Case {
    std::size_t N;
    double beta;
  };
  for (Case c : {Case{4, 0.5}, Case{9, 1.0 / 3}, Case{1, 0.5}}) {
    const double expected = std::log(static_cast<double>(c.N)) / -std::log(c.beta);
    auto r = score_counts(std::vector<std::size_t>(25, c.N), c.beta, GameMode::hausdorff);
    bool ok = r.liminf_estimate == expected && r.limsup_estimate == expected && r.value == expected;
    for (double x : r.running) ok = ok && x == expected;
    out << " N=" << c.N << (ok ? " exact" : " INEXACT");
    pass = pass && ok;
  }
  // Count sequences that a legal transcript can realize are also scored through the validator.
  {
    GameConfig cfg{{2, 4}, 1.0 / 3, 1.0 / 3, 12, GameMode::packing};
    auto t = play(cfg, alice_scripted(std::vector<std::vector<Point>>(13, simplex_nine())), bob_random(), 1);
    bool ok = score(t).value == std::log(9.0) / -std::log(1.0 / 3);
    GameConfig one{{1, 1}, 0.5, 1.0, 12, GameMode::hausdorff};
    ok = ok && score(play(one, alice_singleton(), bob_first(), 1)).value == 0.0;
    out << "; legal transcripts N=9, N=1 " << (ok ? "exact" : "INEXACT");
    pass = pass && ok;
  }
  return {pass, out.str()};
}

Verdict lattice_recursion() {
  double worst = 0;
  int ok = 0;
  const std::vector<Dims> shapes = {{1, 1}, {2, 1}, {1, 2}, {2, 2}};
  for (int seed = 0; seed < kC11Seeds; ++seed) {
    GameConfig cfg{shapes[seed % shapes.size()], 0.25, 1.0, kC11Turns, GameMode::hausdorff};
    auto t = play(cfg, alice_max_packing(), bob_random(), static_cast<std::uint64_t>(seed));
    try {
      auto trace = lattice_trace(t, kC11Tol);
      worst = std::max(worst, trace.max_relative_discrepancy);
      ++ok;
    } catch (const NumericalInstabilityError& e) {
      worst = std::numeric_limits<double>::infinity();
    }
  }
  return {ok == kC11Seeds && worst <= kC11Tol,
          std::to_string(ok) + "/" + std::to_string(kC11Seeds) + " games, max relative difference " + fmt(worst)};
}

Verdict sqrt_trend() {
  double C = 0;
  for (Dims dims : {Dims{1, 2}, Dims{2, 1}, Dims{2, 2}})
    for (double tau : {1e-2, 1e-3, 1e-4}) {
      Rational t = from_double(tau);
      Rational lambda = 1 + dyadic_floor(std::sqrt(tau), 40);
      double lower = to_double(*asymptotic_rates(build_two_param(dims, t, lambda)).lower);
      C = std::max(C, (to_double(delta_mn(dims)) - lower) / std::sqrt(tau));
    }
  return {C < kC12MaxC, "fitted C = " + fmt(C)};
}

std::set<int> parse_list(const std::string& text) {
  std::set<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--known-failures" && i + 1 < argc) {
      known = parse_list(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--known-failures i,j,...]\n";
      return 2;
    }
  }

  std::vector<Template> templates;
  struct Criterion {
    int id;
    std::string name;
    double budget;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "standard pair average equals delta_mn", kC1Seconds, figure_three_identity},
      {2, "1x2 family reproduces HD and PD curves", kC2Seconds, sing12_reproduction},
      {3, "two-parameter packing rate approaches the formula", kC3Seconds, packing_limit},
      {4, "phi inequality on random chains", kC4Seconds,
       [&] {
         templates = random_templates();
         return phi_regression(templates);
       }},
      {5, "delta matches pair counting", kC5Seconds, [&] { return delta_oracle(templates); }},
      {6, "2x2 lower rate closed form", kC6Seconds, two_by_two_formula},
      {7, "k-singular lower rate near f_mn(j)", kC7Seconds, ksingular_formula},
      {8, "successive minima match box search", kC8Seconds, lattice_oracle},
      {9, "Minkowski band for 1x1 flows", kC9Seconds, minkowski_band},
      {10, "constant-count score is exact", kC10Seconds, score_exactness},
      {11, "lattice trace recursion", kC11Seconds, lattice_recursion},
      {12, "sqrt(tau) trend of the lower rate", kC12Seconds, sqrt_trend},
  };

  std::set<int> failed;
  for (const auto& c : criteria) {
    auto start = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (seconds >= c.budget) {
      v.pass = false;
      v.detail += "; over the " + fmt(c.budget) + " s budget";
    }
    if (!v.pass) failed.insert(c.id);
    std::printf("%s %2d %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), v.detail.c_str(),
                seconds);
  }
  std::printf("%zu/%zu criteria pass\n", criteria.size() - failed.size(), criteria.size());
  if (failed.empty()) return 0;
  if (failed == known) {
    std::printf("failures match the documented list\n");
    return 0;
  }
  return 1;
}
