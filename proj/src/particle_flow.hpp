#pragma once

#include <vector>

#include "pgn/template.hpp"

namespace pgn::detail {

// Sorted components of a template moving as particles. A free particle moves at 1/m if it is
// an up particle and at -1/n otherwise; particles at a common position move in blocks whose
// velocities are the non-decreasing isotonic fit of the individual velocities.
class ParticleFlow {
 public:
  ParticleFlow(const Dims& dims, Rational start, RVec positions);

  void set_types(std::vector<bool> up);
  // Advance by `duration`, recording a breakpoint at every collision and at the end.
  void advance(const Rational& duration);
  // Advance until the gap above `index` (0-based) closes; returns the elapsed time.
  Rational advance_until_closed(std::size_t index);

  const Rational& time() const { return time_; }
  const RVec& positions() const { return pos_; }
  RVec velocities() const;

  const std::vector<Rational>& times() const { return times_; }
  const std::vector<RVec>& values() const { return values_; }

 private:
  std::optional<Rational> next_collision(const RVec& vel) const;
  void step(const RVec& vel, const Rational& dt);
  void record();

  Dims dims_;
  Rational time_;
  RVec pos_;
  std::vector<bool> up_;
  std::vector<Rational> times_;
  std::vector<RVec> values_;
};

}  // namespace pgn::detail
