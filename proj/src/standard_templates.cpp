#include "pgn/standard_templates.hpp"

#include <algorithm>
#include <cmath>

#include "particle_flow.hpp"

namespace pgn {

namespace {

std::string describe(const StandardPoint& p) { return "(" + to_string(p.t) + ", -" + to_string(p.eps) + ")"; }

// Piecewise-linear scalar on [t1, t2] with one kink.
struct Kinked {
  Rational t1, t2, kink, v1, v2, s_left, s_right;
  Rational operator()(const Rational& t) const {
    return t <= kink ? Rational(v1 + s_left * (t - t1)) : Rational(v2 - s_right * (t2 - t));
  }
};

RVec pair_value(const Dims& dims, const Kinked& g1, const Kinked& g2, const Rational& t) {
  const int d = dims.d();
  RVec f(d);
  Rational a = g1(t), b = g2(t);
  if (d == 2) {
    f[0] = a;
    f[1] = -a;
    return f;
  }
  Rational g3 = -(a + b) / (d - 2);
  f[0] = a;
  if (b <= g3) {
    f[1] = b;
    for (int i = 2; i < d; ++i) f[i] = g3;
  } else {
    Rational rest = -a / (d - 1);
    for (int i = 1; i < d; ++i) f[i] = rest;
  }
  return f;
}

std::vector<bool> type_vector(int d, const std::vector<std::pair<int, int>>& up_ranges) {
  std::vector<bool> up(static_cast<std::size_t>(d), false);
  for (auto [lo, hi] : up_ranges)
    for (int i = lo; i < hi; ++i) up.at(static_cast<std::size_t>(i)) = true;
  return up;
}

int ceil_div(long a, long b) { return static_cast<int>((a + b - 1) / b); }

void require_valid(const Template& t, const std::string& what) {
  auto rep = validate_template(t);
  if (!rep.ok) throw std::logic_error(what + " produced an invalid template: " + rep.violations.front().message);
}

}  // namespace

void check_standard_pair(const Dims& dims, const StandardPoint& p1, const StandardPoint& p2) {
  require_valid_dims(dims);
  const int m = dims.m, n = dims.n, d = dims.d();
  if (!(p1.t < p2.t)) throw std::invalid_argument("standard pair needs t1 < t2");
  if (p1.t < 0) throw std::invalid_argument("standard pair needs t1 >= 0");
  if (p1.eps < 0 || p2.eps < 0) throw std::invalid_argument("standard pair needs eps >= 0");
  Rational dt = p2.t - p1.t, de = p2.eps - p1.eps;
  std::string where = " for points " + describe(p1) + " and " + describe(p2);
  if (de < -dt / m || de > dt / n)
    throw InfeasibleSpecError("eps_slope_range", "eps_slope_range violated: need -dt/m <= d_eps <= dt/n" + where);
  if (m == 1 && de < -make_rational(n - 1, 2 * n) * dt)
    throw InfeasibleSpecError("unit_dimension_bound",
                              "unit_dimension_bound violated: need d_eps >= -((n-1)/2n) dt when m = 1" + where);
  if (n == 1 && de > make_rational(m - 1, 2 * m) * dt)
    throw InfeasibleSpecError("unit_dimension_bound",
                              "unit_dimension_bound violated: need d_eps <= ((m-1)/2m) dt when n = 1" + where);
  bool left = (n - 1) * (dt / n - de) >= d * p1.eps;
  bool right = (m - 1) * (dt / m + de) >= d * p2.eps;
  if (!left && !right)
    throw InfeasibleSpecError("middle_clearance",
                              "middle_clearance violated: need (n-1)(dt/n - d_eps) >= d eps_1 or "
                              "(m-1)(dt/m + d_eps) >= d eps_2" + where);
}

Template simplify(const Template& t) {
  Template out = t;
  if (t.times.size() <= 2) return out;
  out.times.clear();
  out.values.clear();
  const std::size_t keep_anchor = t.tail.kind == TailKind::equivariant ? t.tail.anchor : 0;
  std::size_t new_anchor = 0;
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    bool interior = i > 0 && i + 1 < t.times.size() && !(t.tail.kind == TailKind::equivariant && i == keep_anchor);
    if (interior) {
      Rational l = t.times[i] - out.times.back();
      Rational r = t.times[i + 1] - t.times[i];
      bool straight = true;
      for (std::size_t c = 0; c < t.values[i].size() && straight; ++c)
        straight = (t.values[i][c] - out.values.back()[c]) / l == (t.values[i + 1][c] - t.values[i][c]) / r;
      if (straight) continue;
    }
    if (t.tail.kind == TailKind::equivariant && i == keep_anchor) new_anchor = out.times.size();
    out.times.push_back(t.times[i]);
    out.values.push_back(t.values[i]);
  }
  out.tail.anchor = new_anchor;
  return out;
}

Template build_standard_pair(const Dims& dims, const StandardPoint& p1, const StandardPoint& p2) {
  check_standard_pair(dims, p1, p2);
  const int m = dims.m, n = dims.n, d = dims.d();
  Rational dt = p2.t - p1.t, de = p2.eps - p1.eps;
  Rational w = make_rational(m * n, d);
  Kinked g1{p1.t, p2.t, p1.t + (de + dt / m) * w, -p1.eps, -p2.eps, make_rational(-1, n), make_rational(1, m)};
  Kinked g2{p1.t, p2.t, p1.t + (dt / n - de) * w, -p1.eps, -p2.eps, make_rational(1, m), make_rational(-1, n)};

  std::vector<Rational> cand{p1.t, p2.t, g1.kink, g2.kink};
  std::sort(cand.begin(), cand.end());
  if (d > 2) {
    // Roots of (d-1) g2 + g1, where g2 meets g3.
    auto h = [&](const Rational& t) -> Rational { return (d - 1) * g2(t) + g1(t); };
    std::vector<Rational> roots;
    for (std::size_t i = 0; i + 1 < cand.size(); ++i) {
      const Rational &u = cand[i], &v = cand[i + 1];
      if (!(u < v)) continue;
      Rational hu = h(u), hv = h(v);
      if ((hu < 0 && hv > 0) || (hu > 0 && hv < 0)) roots.push_back(u + hu / (hu - hv) * (v - u));
    }
    cand.insert(cand.end(), roots.begin(), roots.end());
    std::sort(cand.begin(), cand.end());
  }
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  Template t;
  t.dims = dims;
  for (const auto& c : cand) {
    t.times.push_back(c);
    t.values.push_back(pair_value(dims, g1, g2, c));
  }
  return simplify(t);
}

Template build_standard_chain(const Dims& dims, const std::vector<StandardPoint>& points) {
  if (points.size() < 2) throw std::invalid_argument("a standard chain needs at least two points");
  Template out;
  out.dims = dims;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    Template piece = build_standard_pair(dims, points[i], points[i + 1]);
    std::size_t start = out.times.empty() ? 0 : 1;
    for (std::size_t k = start; k < piece.times.size(); ++k) {
      out.times.push_back(piece.times[k]);
      out.values.push_back(piece.values[k]);
    }
  }
  return simplify(out);
}

Template build_two_param(const Dims& dims, const Rational& tau, const Rational& lambda) {
  if (tau < 0) throw std::invalid_argument("tau must be nonnegative");
  if (!(lambda > 1)) throw std::invalid_argument("lambda must exceed 1");
  Template t = build_standard_pair(dims, {1, tau}, {lambda, lambda * tau});
  t.tail.kind = TailKind::equivariant;
  t.tail.lambda = lambda;
  t.tail.anchor = 0;
  require_well_formed(t);
  return t;
}

Template build_2x2_three_param(const Rational& tau, const Rational& lambda, std::optional<Rational> gamma) {
  const Dims dims{2, 2};
  if (!(tau > 0 && tau < make_rational(1, 2))) throw std::invalid_argument("2x2 family needs 0 < tau < 1/2");
  if (!(lambda > 1)) throw std::invalid_argument("lambda must exceed 1");
  Rational g = gamma ? *gamma : 1 - 2 * tau + 10 * lambda * tau;
  Rational lo = 1 + 6 * tau + 2 * lambda * tau;
  if (g < lo || g > lambda)
    throw std::invalid_argument("gamma = " + to_string(g) + " must lie in [1 + 6 tau + 2 lambda tau, lambda] = [" +
                                to_string(lo) + ", " + to_string(lambda) + "]");
  Template t = build_standard_pair(dims, {1, tau}, {g, lambda * tau});
  if (g < lambda) {
    t.times.push_back(lambda);
    t.values.push_back({-lambda * tau, -lambda * tau, lambda * tau, lambda * tau});
  }
  t.tail.kind = TailKind::equivariant;
  t.tail.lambda = lambda;
  t.tail.anchor = 0;
  t = simplify(t);
  require_well_formed(t);
  return t;
}

Template build_ksingular(const Dims& dims, int k, int j, const Rational& ratio) {
  require_valid_dims(dims);
  const int m = dims.m, n = dims.n, d = dims.d();
  if (k < 2 || k > d - 1) throw std::invalid_argument("k-singular construction needs 2 <= k <= d-1");
  if (j != k - 1 && j != k) throw std::invalid_argument("k-singular construction needs j in {k-1, k}");
  if (!(ratio > 0)) throw std::invalid_argument("long/short ratio must be positive");
  const bool descend = (j == k - 1);
  const int P = ceil_div(static_cast<long>(j) * m, d);
  if (descend && m - P < 1)
    throw std::invalid_argument("no k-singular template with j = k-1 here: the upper block has no up component "
                                "under S_j^+, so it stays merged and F_j can only turn down once f_{k+1} has "
                                "met f_{k-1} < 0");
  if (!descend && j - P < 1)
    throw std::invalid_argument("no k-singular template with j = k here: floor(jn/d) = 0 leaves the lower "
                                "block without a down component, so f_k cannot leave it");

  // Short periods keep the running average close to the per-period average.
  const Rational lambda = 1 + 1 / (ratio + 1);
  const Rational Fp = P * (make_rational(1, m) + make_rational(1, n)) - make_rational(j, n);
  const Rational Fm = (P - 1) * (make_rational(1, m) + make_rational(1, n)) - make_rational(j, n);

  auto high = type_vector(d, {{0, P}, {j, j + m - P}});
  auto low = type_vector(d, {{0, P - 1}, {j, j + m - P + 1}});
  auto exchange = descend ? type_vector(d, {{0, P}, {j + 1, j + 1 + m - P}})
                          : type_vector(d, {{0, P - 1}, {j - 1, j}, {j, j + m - P}});

  auto initial = [&](const Rational& A) {
    RVec pos(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) pos[i] = i < j ? Rational(-A) : Rational(j * A / (d - j));
    return pos;
  };

  auto run_exchange = [&](detail::ParticleFlow& flow) -> Rational {
    flow.set_types(exchange);
    return flow.advance_until_closed(static_cast<std::size_t>(j - 1));
  };

  // Exchange time for unit spread; the dynamics scale linearly.
  Rational c0;
  {
    detail::ParticleFlow probe(dims, 0, initial(1));
    c0 = run_exchange(probe);
  }
  const Rational A = (lambda - 1) / (c0 * (ratio + 1));
  const RVec start = initial(A);

  detail::ParticleFlow flow(dims, 1, start);
  Rational e1 = run_exchange(flow);
  Rational L = (lambda - 1) - e1;
  Rational lower_sum = 0;
  for (int i = 0; i < j; ++i) lower_sum += flow.positions()[i];
  // Split the remaining time so that the lower block sum returns to lambda times its start.
  Rational low_len = (-lambda * j * A - lower_sum - Fp * L) / (Fm - Fp);
  Rational high_len = L - low_len;
  if (low_len < 0 || high_len < 0)
    throw std::invalid_argument("long/short ratio too small to close the period");
  flow.set_types(low);
  flow.advance(low_len);
  flow.set_types(high);
  flow.advance(high_len);

  if (flow.time() != lambda || flow.positions() != scaled(start, lambda))
    throw std::logic_error("k-singular period does not close under scaling");

  Template t;
  t.dims = dims;
  t.times = flow.times();
  t.values = flow.values();
  t.tail.kind = TailKind::equivariant;
  t.tail.lambda = lambda;
  t.tail.anchor = 0;
  t = simplify(t);
  require_well_formed(t);
  for (const auto& v : t.values)
    if (!(v[k - 2] < 0 && v[k] > 0))
      throw std::logic_error("k-singular period fails f_{k-1} < 0 < f_{k+1}");
  require_valid(t, "k-singular construction");
  return t;
}

N1Case2Result build_n1_case2(int m, const Rational& tau, std::optional<Rational> lambda) {
  if (m < 2) throw std::invalid_argument("this construction needs m >= 2");
  if (!(tau > 0)) throw std::invalid_argument("tau must be positive");
  if (tau >= make_rational(1, m * m)) throw std::invalid_argument("this construction needs tau < 1/m^2");
  N1Case2Result r;
  r.tau_prime = (m - 1) * tau / (1 - m * tau);
  Rational bound = 1 + (m + 1) * r.tau_prime / ((m - 1) * (make_rational(1, m) - r.tau_prime));
  r.lambda = lambda ? *lambda : Rational(ceil_of(bound) + 1);
  const Dims narrow{1, m};
  Template f = build_two_param(narrow, r.tau_prime, r.lambda);

  Template g;
  g.dims = Dims{m, 1};
  g.times = f.times;
  for (const auto& v : f.values) {
    RVec w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = -v[v.size() - 1 - i];
    g.values.push_back(std::move(w));
  }
  g.tail = f.tail;
  require_valid(g, "negated standard template");
  r.tmpl = g;

  r.t0 = 1 + make_rational(m, m - 1) * r.tau_prime;
  r.top_at_t0 = r.tau_prime / (m - 1);
  r.ratio = r.top_at_t0 / r.t0;
  Rational best = -g.values.front().front() / g.times.front();
  for (std::size_t i = 0; i < g.times.size(); ++i) best = std::min<Rational>(best, -g.values[i].front() / g.times[i]);
  r.tau_achieved = best;
  return r;
}

Template build_n1_case1(int m, const Rational& tau, const Rational& gamma, const Rational& lambda) {
  if (m < 2) throw std::invalid_argument("this construction needs m >= 2");
  if (!(tau > 0 && tau < make_rational(m - 1, 2 * m))) throw std::invalid_argument("this construction needs 0 < tau < (m-1)/(2m)");
  if (!(gamma > 0 && gamma < 1)) throw std::invalid_argument("gamma must lie in (0, 1)");
  if (!(gamma * lambda > 1)) throw std::invalid_argument("need gamma * lambda > 1");
  const Dims dims{m, 1};
  const Rational drop = make_rational(m - 1, 2 * m);
  Rational eps = (tau + (gamma * lambda - 1) * drop) / lambda;
  Template t = build_standard_pair(dims, {gamma, eps}, {1, tau});
  RVec end = scaled(t.values.front(), lambda);
  Rational run = gamma * lambda - 1;
  RVec extended = t.values.back();
  extended[0] -= drop * run;
  extended[1] -= drop * run;
  for (int i = 2; i <= m; ++i) extended[i] += make_rational(1, m) * run;
  if (extended != end) throw std::logic_error("case-1 extension does not match the scaled start");
  t.times.push_back(gamma * lambda);
  t.values.push_back(end);
  t.tail.kind = TailKind::equivariant;
  t.tail.lambda = lambda;
  t.tail.anchor = 0;
  t = simplify(t);
  require_valid(t, "case-1 construction");
  return t;
}

double interpolate_table(const std::vector<std::pair<double, double>>& table, double t) {
  if (table.size() < 2) throw std::invalid_argument("phi table needs at least two rows");
  if (t < table.front().first || t > table.back().first) throw std::out_of_range("time outside the phi table");
  auto it = std::upper_bound(table.begin(), table.end(), t,
                             [](double x, const std::pair<double, double>& row) { return x < row.first; });
  if (it == table.end()) return table.back().second;
  auto prev = it - 1;
  double w = (t - prev->first) / (it->first - prev->first);
  return prev->second + w * (it->second - prev->second);
}

StarkovSequence build_starkov(const Dims& dims, const std::vector<std::pair<double, double>>& phi_table, double t0,
                              int count) {
  for (std::size_t i = 0; i + 1 < phi_table.size(); ++i)
    if (!(phi_table[i].first < phi_table[i + 1].first) || phi_table[i].second > phi_table[i + 1].second)
      throw std::invalid_argument("phi table not monotone at row " + std::to_string(i + 1));
  if (count < 2) throw std::invalid_argument("need at least two steps");
  constexpr unsigned bits = 30;
  std::vector<StandardPoint> pts;
  std::vector<Rational> dts;
  Rational t = dyadic_floor(t0, bits);
  pts.push_back({t, 0});
  for (int k = 0; k < count; ++k) {
    double tk = to_double(t);
    double half = 0.5 * interpolate_table(phi_table, tk);
    Rational dt = dyadic_floor(std::min(half, tk), bits);
    if (!(dt > 0)) throw std::invalid_argument("phi too small to advance");
    t += dt;
    dts.push_back(dt);
    double half_next = 0.5 * interpolate_table(phi_table, to_double(t));
    Rational eps = dyadic_floor(std::min(half_next, std::sqrt(to_double(dt))), bits);
    pts.push_back({t, eps});
  }
  // Postconditions: step and pinned depth stay below phi/2, eps never decreases, eps over step never increases.
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    double half = 0.5 * interpolate_table(phi_table, to_double(pts[k].t));
    if (to_double(dts[k]) > half || to_double(pts[k].eps) > half)
      throw std::logic_error("step rule exceeded phi/2 at step " + std::to_string(k));
  }
  for (std::size_t k = 1; k + 1 < pts.size(); ++k)
    if (pts[k + 1].eps < pts[k].eps) throw std::logic_error("eps sequence decreased at step " + std::to_string(k));
  for (std::size_t k = 2; k < dts.size(); ++k) {
    if (pts[k].eps / dts[k] > pts[k - 1].eps / dts[k - 1])
      throw std::logic_error("eps_k/dt_k increased at step " + std::to_string(k));
    if (pts[k + 1].eps / dts[k] > pts[k].eps / dts[k - 1])
      throw std::logic_error("eps_{k+1}/dt_k increased at step " + std::to_string(k));
  }
  StarkovSequence out;
  out.tmpl = build_standard_chain(dims, pts);
  out.points = std::move(pts);
  require_valid(out.tmpl, "Starkov construction");
  return out;
}

Template build_sing_on_average(const Dims& dims, const Rational& p, const Rational& eps) {
  require_valid_dims(dims);
  if (p < 0 || p > 1) throw std::invalid_argument("p must lie in [0, 1]");
  if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
  const RVec zero(static_cast<std::size_t>(dims.d()), Rational(0));
  Template t;
  t.dims = dims;
  if (p > 0) {
    t = build_standard_pair(dims, {1, 0}, {1 + p * eps, 0});
  } else {
    t.times.push_back(1);
    t.values.push_back(zero);
  }
  if (p < 1) {
    t.times.push_back(1 + eps);
    t.values.push_back(zero);
  }
  t.tail.kind = TailKind::equivariant;
  t.tail.lambda = 1 + eps;
  t.tail.anchor = 0;
  require_well_formed(t);
  return t;
}

}  // namespace pgn
