#include "pgn/game_sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace pgn {

namespace {

double norm(const Point& p) {
  double s = 0;
  for (double v : p) s += v * v;
  return std::sqrt(s);
}

double distance(const Point& a, const Point& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double rho_minus_one(const GameConfig& c) { return c.rho0 / c.beta; }
double alpha(const Dims& dims) { return static_cast<double>(dims.m * dims.n) / dims.d(); }

// Integer vectors k with |k| * spacing <= radius.
std::vector<Point> grid_ball(int dim, double spacing, double radius) {
  const long K = static_cast<long>(std::floor(radius / spacing * (1 + kLegalitySlack)));
  const double side = 2.0 * static_cast<double>(K) + 1;
  if (std::pow(side, dim) > 1e6) throw std::invalid_argument("max-packing grid would exceed 10^6 points");
  std::vector<Point> out;
  std::vector<long> k(static_cast<std::size_t>(dim), -K);
  while (true) {
    Point p(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) p[i] = static_cast<double>(k[i]) * spacing;
    if (norm(p) <= radius * (1 + kLegalitySlack)) out.push_back(p);
    int i = 0;
    while (i < dim && k[i] == K) k[i++] = -K;
    if (i == dim) break;
    ++k[i];
  }
  return out;
}

Point combine(const Point& base, double c, const Point& x) {
  Point out = base;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * x[i];
  return out;
}

std::vector<Real> to_reals(const Point& p) { return std::vector<Real>(p.begin(), p.end()); }

}  // namespace

std::string to_string(GameMode mode) { return mode == GameMode::hausdorff ? "hausdorff" : "packing"; }

GameMode parse_game_mode(const std::string& text) {
  if (text == "hausdorff") return GameMode::hausdorff;
  if (text == "packing") return GameMode::packing;
  throw std::invalid_argument("unknown game mode '" + text + "'");
}

void validate_config(const GameConfig& c) {
  require_valid_dims(c.dims);
  if (!(c.beta > 0 && c.beta < 1)) throw IllegalMoveError("config", -1, "beta must lie in (0, 1)");
  if (!(c.rho0 > 0)) throw IllegalMoveError("config", -1, "rho0 must be positive");
  if (c.horizon < 1) throw IllegalMoveError("config", -1, "horizon must be at least 1");
}

void validate_turn(const GameConfig& c, int k, const Turn& turn) {
  const std::size_t D = static_cast<std::size_t>(c.dims.m * c.dims.n);
  const std::string at = " on turn " + std::to_string(k);
  if (turn.alice.empty()) throw IllegalMoveError("empty_set", k, "Alice offered an empty set" + at);
  for (const auto& p : turn.alice)
    if (p.size() != D) throw IllegalMoveError("dimension", k, "a point has the wrong dimension" + at);
  const double sep = k == 0 ? 3 * c.rho0 : 3 * c.beta;
  for (std::size_t a = 0; a < turn.alice.size(); ++a)
    for (std::size_t b = a + 1; b < turn.alice.size(); ++b)
      if (distance(turn.alice[a], turn.alice[b]) < sep * (1 - kLegalitySlack))
        throw IllegalMoveError("separation", k,
                               "points " + std::to_string(a) + " and " + std::to_string(b) + " are closer than " +
                                   std::to_string(sep) + at);
  if (k > 0)
    for (std::size_t a = 0; a < turn.alice.size(); ++a)
      if (norm(turn.alice[a]) > (1 - c.beta) * (1 + kLegalitySlack))
        throw IllegalMoveError("containment", k, "point " + std::to_string(a) + " lies outside B(0, 1 - beta)" + at);
  if (turn.pick >= turn.alice.size()) throw IllegalMoveError("pick_range", k, "Bob picked a point not offered" + at);
}

void validate_transcript(const GameTranscript& t) {
  validate_config(t.config);
  if (t.turns.size() != static_cast<std::size_t>(t.config.horizon) + 1)
    throw IllegalMoveError("config", -1, "transcript must contain turns 0..horizon");
  for (std::size_t k = 0; k < t.turns.size(); ++k) validate_turn(t.config, static_cast<int>(k), t.turns[k]);
}

AliceStrategy alice_singleton() {
  return [](const GameView& v) {
    return std::vector<Point>{Point(static_cast<std::size_t>(v.config.dims.m * v.config.dims.n), 0.0)};
  };
}

AliceStrategy alice_max_packing() {
  return [](const GameView& v) {
    const int D = v.config.dims.m * v.config.dims.n;
    auto pts = grid_ball(D, 3 * v.config.beta, 1 - v.config.beta);
    if (v.turn == 0)
      for (auto& p : pts)
        for (auto& x : p) x *= rho_minus_one(v.config);
    return pts;
  };
}

AliceStrategy alice_scripted(std::vector<std::vector<Point>> sets) {
  return [sets = std::move(sets)](const GameView& v) {
    if (sets.empty()) throw std::invalid_argument("scripted Alice has no moves");
    return sets[std::min(static_cast<std::size_t>(v.turn), sets.size() - 1)];
  };
}

BobStrategy bob_random() {
  return [](const GameView&, const std::vector<Point>& options, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    return pick(rng);
  };
}

BobStrategy bob_first() {
  return [](const GameView&, const std::vector<Point>&, std::mt19937_64&) { return std::size_t{0}; };
}

BobStrategy bob_scripted(std::vector<std::size_t> picks) {
  return [picks = std::move(picks)](const GameView& v, const std::vector<Point>&, std::mt19937_64&) {
    if (picks.empty()) throw std::invalid_argument("scripted Bob has no moves");
    return picks[std::min(static_cast<std::size_t>(v.turn), picks.size() - 1)];
  };
}

AliceStrategy alice_by_name(const std::string& name) {
  if (name == "singleton") return alice_singleton();
  if (name == "max-packing") return alice_max_packing();
  throw std::invalid_argument("unknown Alice strategy '" + name + "' (expected singleton or max-packing)");
}

BobStrategy bob_by_name(const std::string& name) {
  if (name == "random") return bob_random();
  if (name == "first") return bob_first();
  throw std::invalid_argument("unknown Bob strategy '" + name + "' (expected random or first)");
}

GameTranscript play(const GameConfig& config, const AliceStrategy& alice, const BobStrategy& bob, std::uint64_t seed) {
  validate_config(config);
  GameTranscript t{config, {}};
  std::mt19937_64 rng(seed);
  for (int k = 0; k <= config.horizon; ++k) {
    GameView view{t.config, t.turns, k};
    Turn turn;
    turn.alice = alice(view);
    turn.pick = 0;
    validate_turn(config, k, turn);
    turn.pick = bob(view, turn.alice, rng);
    validate_turn(config, k, turn);
    t.turns.push_back(std::move(turn));
  }
  validate_transcript(t);
  return t;
}

ScoreReport score_counts(const std::vector<std::size_t>& counts, double beta, GameMode mode) {
  if (counts.empty()) throw std::invalid_argument("no turns to score");
  if (!(beta > 0 && beta < 1)) throw std::invalid_argument("beta must lie in (0, 1)");
  const double unit = -std::log(beta);
  ScoreReport r;
  std::map<std::size_t, long> histogram;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) throw std::invalid_argument("a turn with no points cannot be scored");
    ++histogram[counts[k]];
    // Weights are exact ratios of counts, so a constant sequence scores exactly log N / (-log beta).
    double avg = 0;
    for (const auto& [count, times] : histogram) {
      Rational w = make_rational(times, static_cast<long>(k + 1));
      avg += to_double(w) * (std::log(static_cast<double>(count)) / unit);
    }
    r.running.push_back(avg);
  }
  const std::size_t from = r.running.size() / 2;
  r.liminf_estimate = *std::min_element(r.running.begin() + static_cast<long>(from), r.running.end());
  r.limsup_estimate = *std::max_element(r.running.begin() + static_cast<long>(from), r.running.end());
  r.value = mode == GameMode::hausdorff ? r.liminf_estimate : r.limsup_estimate;
  return r;
}

ScoreReport score(const GameTranscript& t, GameMode mode) {
  validate_transcript(t);
  std::vector<std::size_t> counts;
  for (const auto& turn : t.turns) counts.push_back(turn.alice.size());
  return score_counts(counts, t.config.beta, mode);
}

ScoreReport score(const GameTranscript& t) { return score(t, t.config.mode); }

Outcome outcome(const GameTranscript& t) {
  validate_transcript(t);
  const auto& c = t.config;
  Outcome o;
  o.x = t.move(0);
  double w = rho_minus_one(c);
  for (std::size_t k = 1; k < t.turns.size(); ++k) {
    w *= c.beta;
    o.x = combine(o.x, w, t.move(k));
  }
  o.tail_bound = std::pow(c.beta, c.horizon + 1) * rho_minus_one(c) / (1 - c.beta);
  return o;
}

std::vector<std::pair<Point, double>> original_balls(const GameTranscript& t) {
  validate_transcript(t);
  const auto& c = t.config;
  std::vector<std::pair<Point, double>> out;
  Point center = t.move(0);
  double w = rho_minus_one(c), rho = c.rho0;
  out.emplace_back(center, rho);
  for (std::size_t k = 1; k < t.turns.size(); ++k) {
    w *= c.beta;
    rho *= c.beta;
    center = combine(center, w, t.move(k));
    out.emplace_back(center, rho);
  }
  return out;
}

SquareMatrix flow_matrix(const Dims& dims, long double t) {
  const int d = dims.d();
  SquareMatrix g(static_cast<std::size_t>(d), std::vector<long double>(static_cast<std::size_t>(d), 0.0L));
  for (int i = 0; i < d; ++i) g[i][i] = i < dims.m ? std::exp(t / dims.m) : std::exp(-t / dims.n);
  return g;
}

SquareMatrix unipotent_matrix(const Dims& dims, const Point& X) {
  const int d = dims.d();
  if (X.size() != static_cast<std::size_t>(dims.m * dims.n)) throw std::invalid_argument("matrix size does not match dims");
  SquareMatrix u(static_cast<std::size_t>(d), std::vector<long double>(static_cast<std::size_t>(d), 0.0L));
  for (int i = 0; i < d; ++i) u[i][i] = 1;
  for (int i = 0; i < dims.m; ++i)
    for (int j = 0; j < dims.n; ++j) u[i][dims.m + j] = X[static_cast<std::size_t>(i * dims.n + j)];
  return u;
}

SquareMatrix multiply(const SquareMatrix& a, const SquareMatrix& b) {
  const std::size_t d = a.size();
  SquareMatrix c(d, std::vector<long double>(d, 0.0L));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t j = 0; j < d; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

double relative_difference(const SquareMatrix& a, const SquareMatrix& b) {
  long double diff = 0, scale = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) {
      diff = std::max(diff, std::fabs(a[i][j] - b[i][j]));
      scale = std::max(scale, std::fabs(a[i][j]));
    }
  return scale == 0 ? static_cast<double>(diff) : static_cast<double>(diff / scale);
}

double semiconjugacy_residual(const Dims& dims, const Point& X, long double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
  const long double s = -static_cast<long double>(alpha(dims)) * std::log(lambda);
  Point scaledX = X;
  for (auto& x : scaledX) x = static_cast<double>(lambda * x);
  SquareMatrix lhs = multiply(unipotent_matrix(dims, X), flow_matrix(dims, s));
  SquareMatrix rhs = multiply(flow_matrix(dims, s), unipotent_matrix(dims, scaledX));
  return relative_difference(lhs, rhs);
}

LatticeTrace lattice_trace(const GameTranscript& t, double tolerance) {
  validate_transcript(t);
  const auto& c = t.config;
  const Dims& dims = c.dims;
  LatticeTrace tr;
  tr.gamma = -alpha(dims) * std::log(c.beta);
  Point Y = t.move(0);
  tr.partial.push_back(Y);
  double w = rho_minus_one(c);
  for (std::size_t k = 1; k < t.turns.size(); ++k) {
    w *= c.beta;
    Y = combine(Y, w, t.move(k));
    tr.partial.push_back(Y);
  }
  const long double lr = std::log(static_cast<long double>(rho_minus_one(c)));
  const long double lb = std::log(static_cast<long double>(c.beta));
  const long double a = alpha(dims);
  for (std::size_t k = 1; k <= t.turns.size(); ++k) {
    long double s = -a * (static_cast<long double>(k) * lb + lr);
    tr.times.push_back(static_cast<double>(s));
    tr.direct.push_back(multiply(flow_matrix(dims, s), unipotent_matrix(dims, tr.partial[k - 1])));
  }
  const SquareMatrix g = flow_matrix(dims, -a * lb);
  tr.recursive.push_back(tr.direct.front());
  for (std::size_t k = 1; k < t.turns.size(); ++k)
    tr.recursive.push_back(multiply(g, multiply(unipotent_matrix(dims, t.move(k)), tr.recursive.back())));
  for (std::size_t k = 0; k < tr.direct.size(); ++k)
    tr.max_relative_discrepancy = std::max(tr.max_relative_discrepancy, relative_difference(tr.direct[k], tr.recursive[k]));
  if (tr.max_relative_discrepancy > tolerance)
    throw NumericalInstabilityError("lattice recursion disagrees with the direct formula: relative difference " +
                                    std::to_string(tr.max_relative_discrepancy));
  return tr;
}

MsReport ms_consistency(const LatticeTrace& trace, const GameTranscript& t, const EnumOptions& opts) {
  const Dims& dims = t.config.dims;
  const FlowMatrix limit{dims, to_reals(trace.partial.back())};
  MsReport rep;
  std::vector<IVec> hint_k, hint_inf;
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    const FlowMatrix partial{dims, to_reals(trace.partial[k])};
    auto hk = successive_minima(flow_lattice(partial, trace.times[k]), hint_k, opts).log_minima;
    auto hx = successive_minima(flow_lattice(limit, trace.times[k]), hint_inf, opts).log_minima;
    double dist = 0;
    for (std::size_t i = 0; i < hk.size(); ++i) dist = std::max(dist, std::abs(hk[i] - hx[i]));
    rep.discrepancy.push_back(dist);
  }
  rep.sup = *std::max_element(rep.discrepancy.begin(), rep.discrepancy.end());
  const double N = static_cast<double>(rep.discrepancy.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < rep.discrepancy.size(); ++k) {
    double x = static_cast<double>(k + 1), y = rep.discrepancy[k];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double den = N * sxx - sx * sx;
  rep.slope = den == 0 ? 0 : (N * sxy - sx * sy) / den;
  return rep;
}

nlohmann::json transcript_to_json(const GameTranscript& t) {
  nlohmann::json turns = nlohmann::json::array();
  for (const auto& turn : t.turns) turns.push_back({{"alice", turn.alice}, {"pick", turn.pick}});
  return {{"m", t.config.dims.m},        {"n", t.config.dims.n},       {"beta", t.config.beta},
          {"rho0", t.config.rho0},       {"horizon", t.config.horizon}, {"mode", to_string(t.config.mode)},
          {"turns", turns}};
}

GameTranscript transcript_from_json(const nlohmann::json& j) {
  try {
    GameTranscript t;
    t.config.dims = {j.at("m").get<int>(), j.at("n").get<int>()};
    t.config.beta = j.at("beta").get<double>();
    t.config.rho0 = j.at("rho0").get<double>();
    t.config.horizon = j.at("horizon").get<int>();
    t.config.mode = parse_game_mode(j.value("mode", std::string("hausdorff")));
    for (const auto& turn : j.at("turns"))
      t.turns.push_back({turn.at("alice").get<std::vector<Point>>(), turn.at("pick").get<std::size_t>()});
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed transcript: ") + e.what());
  }
}

}  // namespace pgn
