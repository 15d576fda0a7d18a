#pragma once

#include <json.hpp>

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "pgn/lattice_minima.hpp"
#include "pgn/template.hpp"

namespace pgn {

enum class GameMode { hausdorff, packing };
std::string to_string(GameMode mode);
GameMode parse_game_mode(const std::string& text);

struct GameConfig {
  Dims dims;
  double beta = 0.25;
  double rho0 = 1.0;
  int horizon = 10;  // turns 0..horizon
  GameMode mode = GameMode::hausdorff;
};

// An m x n matrix flattened row-major.
using Point = std::vector<double>;

struct Turn {
  std::vector<Point> alice;
  std::size_t pick = 0;
};

struct GameTranscript {
  GameConfig config;
  std::vector<Turn> turns;
  const Point& move(std::size_t k) const { return turns.at(k).alice.at(turns.at(k).pick); }
};

// rule() is one of "empty_set", "dimension", "separation", "containment", "pick_range", "config".
class IllegalMoveError : public std::invalid_argument {
 public:
  IllegalMoveError(std::string rule, int turn, const std::string& what)
      : std::invalid_argument(what), rule_(std::move(rule)), turn_(turn) {}
  const std::string& rule() const { return rule_; }
  int turn() const { return turn_; }

 private:
  std::string rule_;
  int turn_;
};

class NumericalInstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Relative slack allowed in the separation and containment checks.
inline constexpr double kLegalitySlack = 1e-12;

void validate_config(const GameConfig& config);
// Turn 0: 3 rho0-separated. Later turns: 3 beta-separated inside B(0, 1 - beta).
void validate_turn(const GameConfig& config, int k, const Turn& turn);
void validate_transcript(const GameTranscript& t);

struct GameView {
  const GameConfig& config;
  const std::vector<Turn>& history;
  int turn;
};

using AliceStrategy = std::function<std::vector<Point>(const GameView&)>;
using BobStrategy = std::function<std::size_t(const GameView&, const std::vector<Point>&, std::mt19937_64&)>;

AliceStrategy alice_singleton();
// Cubic grid of spacing 3 beta inside B(0, 1 - beta); turn 0 uses the same set scaled by rho0/beta.
AliceStrategy alice_max_packing();
AliceStrategy alice_scripted(std::vector<std::vector<Point>> sets);
BobStrategy bob_random();
BobStrategy bob_first();
BobStrategy bob_scripted(std::vector<std::size_t> picks);
// "singleton", "max-packing"; "random", "first".
AliceStrategy alice_by_name(const std::string& name);
BobStrategy bob_by_name(const std::string& name);

GameTranscript play(const GameConfig& config, const AliceStrategy& alice, const BobStrategy& bob, std::uint64_t seed);

struct ScoreReport {
  std::vector<double> running;  // running[k] = mean over turns 0..k of log #A_i / (-log beta)
  double liminf_estimate = 0;   // min of running over the tail half
  double limsup_estimate = 0;   // max of running over the tail half
  double value = 0;             // liminf for Hausdorff, limsup for packing
};
// Scoring of a bare count sequence #A_0, #A_1, ...; score() validates the transcript first.
ScoreReport score_counts(const std::vector<std::size_t>& counts, double beta, GameMode mode);
ScoreReport score(const GameTranscript& t, GameMode mode);
ScoreReport score(const GameTranscript& t);

struct Outcome {
  Point x;
  double tail_bound = 0;  // beta^{K+1} rho_{-1} / (1 - beta)
};
Outcome outcome(const GameTranscript& t);

// Balls B_k = B(c_k, rho_k) of the unmodified game, c_k = x_0 + sum_{i<=k} beta^i rho_{-1} x_i.
std::vector<std::pair<Point, double>> original_balls(const GameTranscript& t);

using SquareMatrix = std::vector<std::vector<long double>>;  // row-major

SquareMatrix flow_matrix(const Dims& dims, long double t);
SquareMatrix unipotent_matrix(const Dims& dims, const Point& X);
SquareMatrix multiply(const SquareMatrix& a, const SquareMatrix& b);
double relative_difference(const SquareMatrix& a, const SquareMatrix& b);
// Relative size of u_X g_s - g_s u_{lambda X} with s = -(mn/d) log lambda.
double semiconjugacy_residual(const Dims& dims, const Point& X, long double lambda);

struct LatticeTrace {
  double gamma = 0;
  std::vector<Point> partial;            // Y_0 .. Y_K
  std::vector<double> times;             // s_k = -(mn/d) log(beta^k rho_{-1}), k = 1..K+1
  std::vector<SquareMatrix> direct;      // Lambda_1 .. Lambda_{K+1} from Y_{k-1}
  std::vector<SquareMatrix> recursive;   // Lambda_1, then g_gamma u_{X_k} Lambda_k
  double max_relative_discrepancy = 0;
};
// Throws NumericalInstabilityError if the two computations disagree beyond `tolerance`.
LatticeTrace lattice_trace(const GameTranscript& t, double tolerance = 1e-8);

struct MsReport {
  std::vector<double> discrepancy;  // sup-norm of h(Lambda_k) - h_{X_inf}(s_k)
  double sup = 0;
  double slope = 0;                 // least-squares slope of discrepancy against k
};
MsReport ms_consistency(const LatticeTrace& trace, const GameTranscript& t, const EnumOptions& opts = {});

nlohmann::json transcript_to_json(const GameTranscript& t);
GameTranscript transcript_from_json(const nlohmann::json& j);

}  // namespace pgn
