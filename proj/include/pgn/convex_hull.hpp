#pragma once

#include <utility>
#include <vector>

#include "pgn/rational.hpp"

namespace pgn {

// Lower convex hull of a planar point set, as a piecewise-linear function on [min x, max x].
struct HullFunction {
  std::vector<Rational> xs;
  std::vector<Rational> ys;
  Rational operator()(const Rational& x) const;
};

HullFunction convex_hull_function(std::vector<std::pair<Rational, Rational>> points);

}  // namespace pgn
