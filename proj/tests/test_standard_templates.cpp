#include <doctest.h>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "oracles.hpp"
#include "pgn/dimension_formulas.hpp"
#include "pgn/potentials.hpp"
#include "pgn/standard_templates.hpp"

using namespace pgn;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }

void require_good(const Template& t) {
  auto rep = validate_template(t);
  INFO((rep.ok ? std::string() : rep.violations.front().message));
  CHECK(rep.ok);
  CHECK(balance_check(t));
}

std::string violated(const Dims& dims, const StandardPoint& a, const StandardPoint& b) {
  try {
    check_standard_pair(dims, a, b);
  } catch (const InfeasibleSpecError& e) {
    return e.inequality();
  }
  return "";
}

std::vector<std::pair<double, double>> sqrt_table(double from, int rows) {
  std::vector<std::pair<double, double>> table;
  double t = from;
  for (int i = 0; i < rows; ++i, t *= 1.5) table.emplace_back(t, std::sqrt(t));
  return table;
}

}  // namespace

TEST_CASE("flat standard pair splits the interval in the ratio n : m") {
  for (int m = 1; m <= 4; ++m)
    for (int n = 1; n <= 4; ++n) {
      Dims dims{m, n};
      for (Rational T : {q(1), q(5, 2)}) {
        Template t = build_standard_pair(dims, {0, 0}, {T, 0});
        require_good(t);
        auto pieces = linearity_intervals(t);
        REQUIRE(pieces.size() == 2);
        CHECK(*pieces[0].b - pieces[0].a == q(n, m + n) * T);
        CHECK(*pieces[1].b - pieces[1].a == q(m, m + n) * T);
      }
    }
}

TEST_CASE("standard pair pins f_1 and f_2 at both ends") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Dims dims = testgen::random_dims(rng, 4, 4);
    auto pts = testgen::random_chain_points(rng, dims, 1);
    if (pts.size() < 2) continue;
    Template t = build_standard_pair(dims, pts[0], pts[1]);
    require_good(t);
    for (const auto& p : {pts[0], pts[1]}) {
      RVec v = value_at(t, p.t);
      CHECK(v[0] == -p.eps);
      if (dims.d() > 2) CHECK(v[1] == -p.eps);
    }
  }
}

TEST_CASE("feasibility errors name the violated inequality") {
  CHECK(violated({1, 2}, {0, 0}, {1, 1}) == "eps_slope_range");
  CHECK(violated({2, 1}, {0, 1}, {1, 0}) == "eps_slope_range");
  CHECK(violated({1, 2}, {0, q(1, 2)}, {1, q(1, 5)}) == "unit_dimension_bound");
  CHECK(violated({2, 1}, {0, 0}, {1, q(1, 2)}) == "unit_dimension_bound");
  CHECK(violated({2, 2}, {0, 1}, {1, 1}) == "middle_clearance");
  CHECK(violated({2, 2}, {0, 0}, {1, q(1, 10)}) == "");
  CHECK_THROWS_AS(build_standard_pair({1, 2}, {0, 0}, {1, 1}), InfeasibleSpecError);
}

TEST_CASE("constructor outputs are valid and balanced") {
  require_good(build_standard_chain({2, 3}, {{0, 0}, {2, q(1, 10)}, {5, 0}}));
  require_good(build_two_param({2, 2}, q(1, 20), 5));
  require_good(build_2x2_three_param(q(1, 100), 20));
  require_good(build_ksingular({2, 2}, 3, 2, 100));
  require_good(build_n1_case2(3, q(1, 20)).tmpl);
  require_good(build_n1_case1(3, q(1, 50), q(1, 2), 4));
  require_good(build_n1_case1(2, q(1, 50), q(1, 2), 4));
  require_good(build_sing_on_average({2, 1}, q(1, 2), q(1, 10)));
}

TEST_CASE("two-parameter templates are exactly equivariant") {
  for (auto [dims, tau, lambda] : {std::tuple{Dims{1, 2}, q(1, 8), q(10)}, {Dims{2, 2}, q(1, 20), q(3)},
                                   {Dims{3, 1}, q(1, 10), q(9, 2)}}) {
    Template t = build_two_param(dims, tau, lambda);
    for (Rational s : {q(1), q(11, 10), q(3, 2), q(2), q(29, 7), q(10)})
      CHECK(value_at(t, lambda * s) == scaled(value_at(t, s), lambda));
  }
}

TEST_CASE("m x 1 case-2 construction matches its closed forms") {
  auto r = build_n1_case2(2, q(1, 5));
  CHECK(r.tau_prime == q(1, 3));
  CHECK(r.t0 == 1 + 2 * r.tau_prime);
  CHECK(r.top_at_t0 == r.tau_prime);
  CHECK(r.ratio == q(1, 5));
  CHECK(r.tau_achieved == q(1, 5));
  auto s = build_n1_case2(3, q(1, 20));
  CHECK(s.tau_prime == q(2, 1) * q(1, 20) / (1 - q(3, 20)));
  CHECK(s.t0 == 1 + q(3, 2) * s.tau_prime);
  CHECK(s.ratio == q(1, 20));
  CHECK_THROWS(build_n1_case2(2, q(1, 4)));
}

TEST_CASE("Starkov sequence meets its postconditions") {
  const auto table = sqrt_table(1e5, 200);
  auto s = build_starkov({2, 2}, table, 1e5, 40);
  require_good(s.tmpl);
  std::vector<double> ratios;
  for (std::size_t k = 1; k + 1 < s.points.size(); ++k)
    ratios.push_back(to_double(s.points[k].eps / (s.points[k + 1].t - s.points[k].t)));
  for (std::size_t k = 1; k < ratios.size(); ++k) CHECK(ratios[k] <= ratios[k - 1]);

  const Rational a = s.tmpl.times.front(), b = s.tmpl.times.back();
  for (int i = 0; i <= 1000; ++i) {
    Rational t = a + (b - a) * q(i, 1000);
    CHECK(to_double(value_at(s.tmpl, t)[0]) >= -interpolate_table(table, to_double(t)));
  }

  auto bad = table;
  std::swap(bad[3], bad[4]);
  CHECK_THROWS(build_starkov({2, 2}, bad, 1e5, 10));
}

TEST_CASE("Starkov interval averages approach delta_mn") {
  // eps_k / dt_k decays like t^(-1/4), so start far out.
  const auto table = sqrt_table(1e12, 200);
  auto s = build_starkov({2, 2}, table, 1e12, 20);
  require_good(s.tmpl);
  const double target = to_double(delta_mn({2, 2}));
  double previous = 1e9;
  for (std::size_t k = 1; k + 1 < s.points.size(); ++k) {
    double gap = std::abs(to_double(contraction_average(s.tmpl, s.points[k].t, s.points[k + 1].t)) - target);
    CHECK(gap <= previous + 1e-12);
    previous = gap;
  }
  CHECK(previous < 1e-2);
}

TEST_CASE("singular-on-average templates") {
  for (Rational eps : {q(1, 10), q(1, 100)}) {
    auto r = asymptotic_rates(build_sing_on_average({2, 2}, 1, eps));
    CHECK(*r.lower <= delta_mn({2, 2}));
    CHECK(*r.lower >= delta_mn({2, 2}) - eps);
  }
  auto zero = asymptotic_rates(build_sing_on_average({2, 1}, 0, q(1, 10)));
  CHECK(*zero.lower == 2);
  for (Rational eps : {q(1, 10), q(1, 100)}) {
    auto half = asymptotic_rates(build_sing_on_average({2, 1}, q(1, 2), eps));
    CHECK(std::abs(to_double(*half.lower) - 5.0 / 3) <= 2 * to_double(eps));
    CHECK(*half.lower >= avg_singular_rate({2, 1}, q(1, 2)) - 2 * eps);
  }
  CHECK_THROWS(build_sing_on_average({2, 1}, q(3, 2), q(1, 10)));
}

TEST_CASE("s[(0,0),(1,-tau)] has the two-case structure") {
  for (auto [m, n] : {std::pair{2, 2}, {3, 2}, {2, 1}, {3, 1}, {2, 3}, {1, 2}}) {
    const Dims dims{m, n};
    const int d = dims.d();
    const Rational threshold = q(m - 1, n * (d + m - 1));
    for (Rational tau : {q(1, 40), q(1, 30), q(1, 12), q(1, 5)}) {
      Template g;
      try {
        g = build_standard_pair(dims, {0, 0}, {1, tau});
      } catch (const InfeasibleSpecError&) {
        continue;
      }
      require_good(g);
      const int mn = m * n;
      CHECK(contraction_average(g, 0, 1) == delta_mn(dims) - q(mn, d) * (d + m) * tau);
      if (m == 1 || tau >= threshold) continue;
      const Rational t1 = q(n, d) * (1 + m * tau);
      const Rational t2 = 1 - q(mn, m - 1) * tau;
      CHECK(g.times == std::vector<Rational>{0, t1, t2, 1});
      CHECK(contraction_average(g, 0, t1) == mn - m);
    }
  }
}

TEST_CASE("2x2 and k-singular rates") {
  CHECK(*asymptotic_rates(build_2x2_three_param(q(1, 100), 20)).lower == q(5033, 2071));
  CHECK_THROWS(build_2x2_three_param(q(1, 10), 20));
  auto r = asymptotic_rates(build_ksingular({2, 1}, 2, 1, 1000));
  CHECK(std::abs(to_double(*r.lower) - 4.0 / 3) < 1e-2);
  auto s = asymptotic_rates(build_ksingular({3, 2}, 3, 2, 1000));
  CHECK(std::abs(to_double(*s.lower) - to_double(fmn_k({3, 2}, 2))) < 1e-2);
  CHECK_THROWS_AS(build_ksingular({1, 2}, 2, 1, 1000), std::invalid_argument);
  CHECK_THROWS(build_ksingular({2, 2}, 1, 1));
}
