#include "pgn/convex_hull.hpp"

#include <algorithm>
#include <stdexcept>

namespace pgn {

Rational HullFunction::operator()(const Rational& x) const {
  if (xs.empty()) throw std::logic_error("empty hull");
  if (x < xs.front() || x > xs.back()) throw std::out_of_range("x outside the hull domain");
  auto it = std::lower_bound(xs.begin(), xs.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs.begin());
  if (xs[i] == x) return ys[i];
  Rational w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

HullFunction convex_hull_function(std::vector<std::pair<Rational, Rational>> points) {
  if (points.empty()) throw std::invalid_argument("convex hull of an empty point set");
  std::sort(points.begin(), points.end());
  std::vector<std::pair<Rational, Rational>> pts;
  for (const auto& p : points)
    if (pts.empty() || pts.back().first != p.first) pts.push_back(p);

  std::vector<std::pair<Rational, Rational>> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      Rational cross = (b.first - a.first) * (p.second - a.second) - (b.second - a.second) * (p.first - a.first);
      if (cross > 0) break;
      hull.pop_back();
    }
    hull.push_back(p);
  }
  HullFunction h;
  for (auto& [x, y] : hull) {
    h.xs.push_back(x);
    h.ys.push_back(y);
  }
  return h;
}

}  // namespace pgn
