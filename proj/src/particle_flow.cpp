#include "particle_flow.hpp"

#include <stdexcept>

namespace pgn::detail {

ParticleFlow::ParticleFlow(const Dims& dims, Rational start, RVec positions)
    : dims_(dims), time_(std::move(start)), pos_(std::move(positions)) {
  if (pos_.size() != static_cast<std::size_t>(dims_.d())) throw std::invalid_argument("wrong particle count");
  for (std::size_t i = 0; i + 1 < pos_.size(); ++i)
    if (pos_[i] > pos_[i + 1]) throw std::invalid_argument("particles must start sorted");
  record();
}

void ParticleFlow::set_types(std::vector<bool> up) {
  if (up.size() != pos_.size()) throw std::invalid_argument("wrong type count");
  int ups = 0;
  for (bool u : up) ups += u ? 1 : 0;
  if (ups != dims_.m) throw std::invalid_argument("type vector must contain exactly m up particles");
  up_ = std::move(up);
}

RVec ParticleFlow::velocities() const {
  const Rational vu(1, dims_.m), vd(-1, dims_.n);
  const std::size_t d = pos_.size();
  RVec vel(d);
  std::size_t s = 0;
  while (s < d) {
    std::size_t e = s + 1;
    while (e < d && pos_[e] == pos_[s]) ++e;
    struct Block {
      std::size_t lo, hi;
      Rational sum;
    };
    std::vector<Block> stack;
    for (std::size_t i = s; i < e; ++i) {
      stack.push_back({i, i + 1, up_[i] ? vu : vd});
      while (stack.size() >= 2) {
        Block& lower = stack[stack.size() - 2];
        Block& upper = stack.back();
        Rational avg_lower = lower.sum / static_cast<long>(lower.hi - lower.lo);
        Rational avg_upper = upper.sum / static_cast<long>(upper.hi - upper.lo);
        if (!(avg_lower > avg_upper)) break;
        lower.hi = upper.hi;
        lower.sum += upper.sum;
        stack.pop_back();
      }
    }
    for (const auto& b : stack) {
      Rational v = b.sum / static_cast<long>(b.hi - b.lo);
      for (std::size_t i = b.lo; i < b.hi; ++i) vel[i] = v;
    }
    s = e;
  }
  return vel;
}

std::optional<Rational> ParticleFlow::next_collision(const RVec& vel) const {
  std::optional<Rational> best;
  for (std::size_t i = 0; i + 1 < pos_.size(); ++i) {
    if (pos_[i] == pos_[i + 1] || !(vel[i] > vel[i + 1])) continue;
    Rational dt = (pos_[i + 1] - pos_[i]) / (vel[i] - vel[i + 1]);
    if (!best || dt < *best) best = dt;
  }
  return best;
}

void ParticleFlow::step(const RVec& vel, const Rational& dt) {
  for (std::size_t i = 0; i < pos_.size(); ++i) pos_[i] += vel[i] * dt;
  time_ += dt;
  record();
}

void ParticleFlow::record() {
  if (!times_.empty() && times_.back() == time_) {
    values_.back() = pos_;
    return;
  }
  times_.push_back(time_);
  values_.push_back(pos_);
}

void ParticleFlow::advance(const Rational& duration) {
  if (duration < 0) throw std::invalid_argument("negative flow duration");
  if (up_.empty()) throw std::logic_error("particle types not set");
  Rational left = duration;
  while (left > 0) {
    RVec vel = velocities();
    auto hit = next_collision(vel);
    if (hit && *hit < left) {
      step(vel, *hit);
      left -= *hit;
    } else {
      step(vel, left);
      left = 0;
    }
  }
}

Rational ParticleFlow::advance_until_closed(std::size_t index) {
  if (index + 1 >= pos_.size()) throw std::out_of_range("gap index out of range");
  Rational start = time_;
  for (int guard = 0; guard < 4 * dims_.d() * dims_.d() + 8; ++guard) {
    if (pos_[index] == pos_[index + 1]) return time_ - start;
    RVec vel = velocities();
    auto hit = next_collision(vel);
    if (!hit) throw std::logic_error("gap never closes under the current particle types");
    step(vel, *hit);
  }
  throw std::logic_error("too many collisions while waiting for a gap to close");
}

}  // namespace pgn::detail
