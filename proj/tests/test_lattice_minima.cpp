#include <doctest.h>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "oracles.hpp"
#include "pgn/lattice_minima.hpp"

using namespace pgn;

namespace {

LatticeState lattice(const std::vector<std::vector<double>>& columns) { return LatticeState::from_columns(columns); }

std::vector<std::vector<double>> scaled_unimodular(const std::vector<double>& scale,
                                                    const std::vector<std::vector<long>>& U) {
  const std::size_t d = scale.size();
  std::vector<std::vector<double>> cols(d, std::vector<double>(d));
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t r = 0; r < d; ++r) cols[c][r] = scale[r] * static_cast<double>(U[r][c]);
  return cols;
}

Template zero_template(Dims dims, const Rational& end) {
  Template t;
  t.dims = dims;
  t.times = {0, end};
  t.values = {RVec(static_cast<std::size_t>(dims.d()), Rational(0)), RVec(static_cast<std::size_t>(dims.d()), Rational(0))};
  return t;
}

}  // namespace

TEST_CASE("successive minima of simple lattices") {
  auto z2 = successive_minima(lattice({{1, 0}, {0, 1}}));
  CHECK(z2.minima[0] == doctest::Approx(1.0));
  CHECK(z2.minima[1] == doctest::Approx(1.0));
  auto diag = successive_minima(lattice({{0.5, 0}, {0, 2}}));
  CHECK(diag.minima[0] == doctest::Approx(0.5));
  CHECK(diag.minima[1] == doctest::Approx(2.0));
  auto skew = successive_minima(lattice({{1, 0}, {7, 1}}));
  CHECK(skew.minima[0] == doctest::Approx(1.0));
  CHECK(skew.minima[1] == doctest::Approx(1.0));
  CHECK_THROWS(LatticeState::from_columns(std::vector<std::vector<double>>{{1, 2}, {2, 4}}));
}

TEST_CASE("minima agree with box search on random lattices") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> logscale(-0.8, 0.8);
  for (int s = 0; s < 60; ++s) {
    const int d = 2 + s % 2;
    std::vector<double> scale(static_cast<std::size_t>(d));
    for (auto& x : scale) x = std::exp(logscale(rng));
    auto cols = scaled_unimodular(scale, testgen::random_unimodular(rng, d));
    auto L = lattice(cols);
    auto got = successive_minima(L);
    auto want = oracle::box_minima(scale, 12);
    REQUIRE(got.minima.size() == want.size());
    for (int j = 0; j < d; ++j) CHECK(std::abs(got.minima[j] - want[j]) < 1e-9);
    for (int j = 1; j < d; ++j) CHECK(got.minima[j - 1] <= got.minima[j] + 1e-12);

    // Witnesses are lattice vectors with the reported norms, and they span.
    for (int j = 0; j < d; ++j) {
      double norm = 0;
      for (double x : got.witnesses[j]) norm += x * x;
      CHECK(std::abs(std::sqrt(norm) - got.minima[j]) < 1e-9);
      CHECK(std::abs(got.log_minima[j] - std::log(got.minima[j])) < 1e-12);
    }
    CHECK(std::isfinite(rational_subspace_covolume(L, got.coefficients)));
    CHECK(minkowski_check(got, L) <= d * std::log(2.0) + 1e-9);
  }
}

TEST_CASE("Minkowski residual vanishes on orthogonal lattices") {
  for (auto cols : {std::vector<std::vector<double>>{{1, 0}, {0, 1}},
                    std::vector<std::vector<double>>{{0.25, 0, 0}, {0, 3, 0}, {0, 0, 1.5}}}) {
    auto L = lattice(cols);
    CHECK(minkowski_check(successive_minima(L), L) < 1e-12);
  }
}

TEST_CASE("covolume of sublattices") {
  auto L = lattice({{2, 0}, {0, 3}});
  CHECK(rational_subspace_covolume(L, {IVec{1, 0}}) == doctest::Approx(std::log(2.0)));
  CHECK(rational_subspace_covolume(L, {IVec{1, 0}, IVec{0, 1}}) == doctest::Approx(std::log(6.0)));
  CHECK(rational_subspace_covolume(L, {IVec{1, 0}, IVec{1, 1}}) == doctest::Approx(std::log(6.0)));
  CHECK(log_covolume({{Real(3), Real(4)}}) == doctest::Approx(std::log(5.0)));
}

TEST_CASE("flow profiles") {
  const auto grid = uniform_grid(0, 12, 0.5);
  CHECK(grid.size() == 25);
  auto zero = h_profile(named_flow_matrix({1, 1}, "zero"), grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(zero.h[k][0] == doctest::Approx(-grid[k]));
    CHECK(zero.h[k][1] == doctest::Approx(grid[k]));
  }

  auto golden = h_profile(named_flow_matrix({1, 1}, "golden"), uniform_grid(0, 20, 0.25));
  for (const auto& h : golden.h) {
    CHECK(h[0] <= h[1]);
    CHECK(std::abs(h[0]) < 2);
  }

  // A rational matrix puts a lattice vector on the contracting axis, so h_1 eventually falls at unit speed.
  auto third = h_profile(named_flow_matrix({1, 1}, "rational:1/3"), uniform_grid(10, 14, 1));
  for (std::size_t k = 1; k < third.times.size(); ++k) CHECK(third.h[k][0] - third.h[k - 1][0] == doctest::Approx(-1.0));

  auto big = h_profile(named_flow_matrix({2, 1}, "golden"), uniform_grid(0, 6, 0.5));
  auto rep = approx_template_check(big);
  CHECK(rep.sorted);
  CHECK(rep.slopes_ok);
  CHECK(rep.max_slope_excess <= 1e-6);
}

TEST_CASE("named flow matrices") {
  auto g = named_flow_matrix({2, 2}, "golden");
  REQUIRE(g.A.size() == 4);
  const double phi = (1 + std::sqrt(5.0)) / 2;
  CHECK(static_cast<double>(g.A[0]) == doctest::Approx(phi - 1));
  auto rows = named_flow_matrix({2, 1}, "0.5;0.25");
  CHECK(static_cast<double>(rows.A[1]) == doctest::Approx(0.25));
  CHECK_THROWS(named_flow_matrix({2, 1}, "0.5"));
  CHECK_THROWS(named_flow_matrix({1, 1}, "nonsense"));
}

TEST_CASE("approx_template_check flags a slope outside the allowed range") {
  auto P = h_profile(named_flow_matrix({1, 1}, "zero"), uniform_grid(0, 10, 1));
  auto clean = approx_template_check(P);
  CHECK(clean.sorted);
  CHECK(clean.slopes_ok);
  REQUIRE_FALSE(clean.bands.empty());
  CHECK(clean.bands.front().envelope_slopes_in_range);
  P.h[5][1] += 3;
  P.h[5][0] -= 3;
  auto bad = approx_template_check(P);
  CHECK_FALSE(bad.slopes_ok);
  CHECK(bad.max_slope_excess >= 2);

  P.h[5][0] = P.h[5][1] + 1;
  CHECK_FALSE(approx_template_check(P).sorted);
}

TEST_CASE("template_distance") {
  auto zero_flow = h_profile(named_flow_matrix({1, 1}, "zero"), uniform_grid(0, 10, 1));
  auto zero_tmpl = zero_template({1, 1}, 10);
  // The zero lattice moves at full speed, so it sits 10 away from the zero template at t = 10.
  CHECK(template_distance(zero_flow, zero_tmpl) == doctest::Approx(10.0));
  auto golden = h_profile(named_flow_matrix({1, 1}, "golden"), uniform_grid(0, 10, 0.5));
  CHECK(template_distance(golden, zero_tmpl) < 2);
}

TEST_CASE("the enumeration budget is enforced") {
  EnumOptions tiny;
  tiny.node_budget = 1;
  auto L = lattice({{1, 0, 0}, {0.3, 1, 0}, {0.7, 0.2, 1}});
  CHECK_THROWS_AS(successive_minima(L, tiny), EnumerationBudgetError);
}
