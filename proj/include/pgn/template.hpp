#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgn/rational.hpp"

namespace pgn {

struct Dims {
  int m = 1;
  int n = 1;
  int d() const { return m + n; }
  bool operator==(const Dims&) const = default;
};

void require_valid_dims(const Dims& dims);

enum class TailKind { finite, constant_slope, equivariant };

struct Tail {
  TailKind kind = TailKind::finite;
  RVec slope;              // constant_slope only
  Rational lambda;         // equivariant only, > 1
  std::size_t anchor = 0;  // equivariant only: f(lambda t) = lambda f(t) for t >= times[anchor]
};

// Equivariant tails store exactly one period: times.back() == lambda * times[anchor]
// and values.back() == lambda * values[anchor].
struct Template {
  Dims dims;
  std::vector<Rational> times;
  std::vector<RVec> values;
  Tail tail;
};

class TemplateStructureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void require_well_formed(const Template& t);

enum class ViolationKind { ordering, slope_range, slope_quantization, convexity };

struct Violation {
  ViolationKind kind;
  Rational time;      // left end of the offending piece, or the breakpoint
  int component = 0;  // 1-based component or partial-sum index
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
};

std::string to_string(ViolationKind kind);

// An affine piece on [a, b]; b empty means the piece runs to infinity.
struct Piece {
  Rational a;
  std::optional<Rational> b;
  RVec fa;
  RVec slope;
  RVec value_at(const Rational& t) const;
  RVec midpoint_value() const;
};

// Z(j) as a sorted list.
RVec slope_set(const Dims& dims, int j);
// (L+, L-) with L+ + L- = j and L+/m - L-/n = s, if any.
std::optional<std::pair<int, int>> decompose_slope(const Dims& dims, int j, const Rational& s);

struct IntervalAnalysis {
  Rational a;
  std::optional<Rational> b;
  RVec slope;
  std::vector<std::pair<int, int>> blocks;  // equality blocks (p, q]
  std::vector<int> boundaries;              // q with f_q < f_{q+1}, plus q = d
  std::vector<int> L_plus, L_minus;         // aligned with boundaries
  std::vector<int> M_plus, M_minus;         // aligned with blocks
  std::vector<int> S_plus, S_minus;         // 1-based, sorted
  int delta = 0;
};

ValidationReport validate_template(const Template& t);
bool balance_check(const Template& t);

std::vector<Piece> stored_pieces(const Template& t);
std::vector<Piece> linearity_intervals(const Template& t);
// Pieces covering [from, to], unrolling an equivariant tail as needed.
std::vector<Piece> pieces_between(const Template& t, const Rational& from, const Rational& to);

RVec value_at(const Template& t, const Rational& time);
Rational domain_start(const Template& t);
std::optional<Rational> domain_end(const Template& t);

IntervalAnalysis analyze_piece(const Dims& dims, const Piece& piece);
IntervalAnalysis analyze_interval(const Template& t, std::size_t index);
int delta_at(const Template& t, const Rational& time);
Rational contraction_average(const Template& t, const Rational& from, const Rational& to);

// Delta(f, T): average of delta over [0, T]. A template whose domain starts at t0 > 0 with an
// equivariant tail anchored at index 0 is extended backwards by equivariance; any other
// template starting at t0 > 0 is averaged over [t0, T].
Rational running_average(const Template& t, const Rational& T);

enum class RateMethod { constant_tail, equivariant_period, finite_horizon };
std::string to_string(RateMethod method);

struct AsymptoticRates {
  std::optional<Rational> lower;
  std::optional<Rational> upper;
  RateMethod method = RateMethod::finite_horizon;
};

AsymptoticRates asymptotic_rates(const Template& t);

// Unroll an equivariant template over [t0, lambda^periods * t_anchor] as a finite template.
Template unroll(const Template& t, int periods);

}  // namespace pgn
