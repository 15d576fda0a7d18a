#include <algorithm>
#include <sstream>

#include "pgn/template.hpp"

namespace pgn {

void require_valid_dims(const Dims& dims) {
  if (dims.m < 1 || dims.n < 1) throw std::invalid_argument("dims must satisfy m >= 1, n >= 1");
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::ordering: return "ordering";
    case ViolationKind::slope_range: return "slope-range";
    case ViolationKind::slope_quantization: return "slope-quantization";
    case ViolationKind::convexity: return "convexity";
  }
  return "unknown";
}

std::string to_string(RateMethod method) {
  switch (method) {
    case RateMethod::constant_tail: return "constant-tail";
    case RateMethod::equivariant_period: return "equivariant-period";
    case RateMethod::finite_horizon: return "finite-horizon";
  }
  return "unknown";
}

RVec Piece::value_at(const Rational& t) const { return axpy(fa, t - a, slope); }

RVec Piece::midpoint_value() const {
  if (b) return value_at((a + *b) / 2);
  return value_at(a + 1);
}

void require_well_formed(const Template& t) {
  require_valid_dims(t.dims);
  const std::size_t d = static_cast<std::size_t>(t.dims.d());
  if (t.times.empty()) throw TemplateStructureError("template has no breakpoints");
  if (t.times.size() != t.values.size())
    throw TemplateStructureError("breakpoint and value counts differ");
  if (t.times.front() < 0) throw TemplateStructureError("first breakpoint is negative");
  for (std::size_t i = 0; i + 1 < t.times.size(); ++i)
    if (!(t.times[i] < t.times[i + 1]))
      throw TemplateStructureError("breakpoints not strictly increasing at index " + std::to_string(i + 1));
  for (std::size_t i = 0; i < t.values.size(); ++i)
    if (t.values[i].size() != d)
      throw TemplateStructureError("value vector " + std::to_string(i) + " has wrong length");
  switch (t.tail.kind) {
    case TailKind::finite:
      if (t.times.size() < 2) throw TemplateStructureError("finite template needs two breakpoints");
      break;
    case TailKind::constant_slope:
      if (t.tail.slope.size() != d) throw TemplateStructureError("tail slope has wrong length");
      break;
    case TailKind::equivariant: {
      if (!(t.tail.lambda > 1)) throw TemplateStructureError("equivariance factor must exceed 1");
      const std::size_t a = t.tail.anchor;
      if (a + 1 >= t.times.size()) throw TemplateStructureError("anchor must precede the last breakpoint");
      if (!(t.times[a] > 0)) throw TemplateStructureError("anchor time must be positive");
      if (t.times.back() != t.tail.lambda * t.times[a])
        throw TemplateStructureError("last breakpoint must equal lambda times the anchor time");
      if (t.values.back() != scaled(t.values[a], t.tail.lambda))
        throw TemplateStructureError("last value must equal lambda times the anchor value");
      break;
    }
  }
}

RVec slope_set(const Dims& dims, int j) {
  RVec out;
  for (int lp = 0; lp <= dims.m; ++lp) {
    int lm = j - lp;
    if (lm < 0 || lm > dims.n) continue;
    out.push_back(make_rational(lp, dims.m) - make_rational(lm, dims.n));
  }
  for (auto& r : out) r.canonicalize();
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<std::pair<int, int>> decompose_slope(const Dims& dims, int j, const Rational& s) {
  // s = L+/m - (j - L+)/n  =>  L+ = (s + j/n) * m n / d
  Rational lp = (s + make_rational(j, dims.n)) * make_rational(dims.m * dims.n, dims.d());
  if (!is_integer(lp)) return std::nullopt;
  if (!lp.get_num().fits_sint_p()) return std::nullopt;
  int plus = static_cast<int>(lp.get_num().get_si());
  int minus = j - plus;
  if (plus < 0 || plus > dims.m || minus < 0 || minus > dims.n) return std::nullopt;
  return std::make_pair(plus, minus);
}

std::vector<Piece> stored_pieces(const Template& t) {
  std::vector<Piece> out;
  for (std::size_t i = 0; i + 1 < t.times.size(); ++i) {
    Piece p;
    p.a = t.times[i];
    p.b = t.times[i + 1];
    p.fa = t.values[i];
    Rational len = t.times[i + 1] - t.times[i];
    p.slope.resize(p.fa.size());
    for (std::size_t c = 0; c < p.fa.size(); ++c) p.slope[c] = (t.values[i + 1][c] - t.values[i][c]) / len;
    out.push_back(std::move(p));
  }
  if (t.tail.kind == TailKind::constant_slope) {
    Piece p;
    p.a = t.times.back();
    p.fa = t.values.back();
    p.slope = t.tail.slope;
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

std::vector<int> block_signature(const RVec& mid) {
  std::vector<int> sig;
  for (std::size_t c = 0; c + 1 < mid.size(); ++c)
    if (mid[c] < mid[c + 1]) sig.push_back(static_cast<int>(c + 1));
  return sig;
}

Piece clip(const Piece& p, const Rational& lo, const std::optional<Rational>& hi) {
  Piece q = p;
  if (lo > p.a) {
    q.fa = p.value_at(lo);
    q.a = lo;
  }
  if (hi && (!p.b || *hi < *p.b)) q.b = *hi;
  return q;
}

Piece scale_piece(const Piece& p, const Rational& factor) {
  Piece q;
  q.a = p.a * factor;
  if (p.b) q.b = *p.b * factor;
  q.fa = scaled(p.fa, factor);
  q.slope = p.slope;
  return q;
}

void add_violation(ValidationReport& rep, ViolationKind kind, const Rational& time, int comp,
                   const std::string& msg) {
  rep.ok = false;
  rep.violations.push_back({kind, time, comp, msg});
}

ValidationReport validate_pieces(const Dims& dims, const std::vector<Piece>& pieces,
                                 const std::vector<Rational>& bp_times, const std::vector<RVec>& bp_values) {
  ValidationReport rep;
  const int d = dims.d();
  const Rational lo = make_rational(-1, dims.n);
  const Rational hi = make_rational(1, dims.m);

  for (std::size_t i = 0; i < bp_times.size(); ++i)
    for (int c = 0; c + 1 < d; ++c)
      if (bp_values[i][c] > bp_values[i][c + 1])
        add_violation(rep, ViolationKind::ordering, bp_times[i], c + 1,
                      "f_" + std::to_string(c + 1) + " > f_" + std::to_string(c + 2) + " at t = " +
                          to_string(bp_times[i]));

  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Piece& p = pieces[i];
    for (int c = 0; c < d; ++c)
      if (p.slope[c] < lo || p.slope[c] > hi)
        add_violation(rep, ViolationKind::slope_range, p.a, c + 1,
                      "slope of f_" + std::to_string(c + 1) + " is " + to_string(p.slope[c]) +
                          " outside [-1/n, 1/m] on piece starting at " + to_string(p.a));
    if (!p.b) {
      for (int c = 0; c + 1 < d; ++c)
        if (p.slope[c] > p.slope[c + 1])
          add_violation(rep, ViolationKind::ordering, p.a, c + 1,
                        "tail slopes eventually reverse the order of f_" + std::to_string(c + 1) +
                            " and f_" + std::to_string(c + 2));
    }
    RVec mid = p.midpoint_value();
    Rational F = 0;
    for (int j = 1; j <= d; ++j) {
      F += p.slope[j - 1];
      bool separated = (j == d) || mid[j - 1] < mid[j];
      if (separated && !decompose_slope(dims, j, F))
        add_violation(rep, ViolationKind::slope_quantization, p.a, j,
                      "slope " + to_string(F) + " of F_" + std::to_string(j) + " is not in Z(" +
                          std::to_string(j) + ") on piece starting at " + to_string(p.a));
    }
  }

  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const Piece& left = pieces[i];
    const Piece& right = pieces[i + 1];
    RVec v = right.fa;
    Rational FL = 0, FR = 0;
    for (int j = 1; j < d; ++j) {
      FL += left.slope[j - 1];
      FR += right.slope[j - 1];
      if (v[j - 1] < v[j] && FR < FL)
        add_violation(rep, ViolationKind::convexity, right.a, j,
                      "slope of F_" + std::to_string(j) + " drops from " + to_string(FL) + " to " +
                          to_string(FR) + " at t = " + to_string(right.a));
    }
  }
  return rep;
}

std::vector<Piece> period_pieces(const Template& t) {
  auto all = stored_pieces(t);
  return std::vector<Piece>(all.begin() + static_cast<long>(t.tail.anchor), all.end());
}

}  // namespace

Template unroll(const Template& t, int periods) {
  require_well_formed(t);
  if (t.tail.kind != TailKind::equivariant) throw std::invalid_argument("unroll needs an equivariant tail");
  if (periods < 1) throw std::invalid_argument("unroll needs at least one period");
  Template out = t;
  out.tail = Tail{};
  const std::size_t a = t.tail.anchor;
  Rational factor = 1;
  for (int k = 1; k < periods; ++k) {
    factor *= t.tail.lambda;
    for (std::size_t i = a + 1; i < t.times.size(); ++i) {
      out.times.push_back(t.times[i] * factor);
      out.values.push_back(scaled(t.values[i], factor));
    }
  }
  return out;
}

ValidationReport validate_template(const Template& t) {
  require_well_formed(t);
  if (t.tail.kind == TailKind::equivariant) {
    Template u = unroll(t, 2);
    return validate_pieces(u.dims, stored_pieces(u), u.times, u.values);
  }
  return validate_pieces(t.dims, stored_pieces(t), t.times, t.values);
}

bool balance_check(const Template& t) {
  require_well_formed(t);
  Rational s = 0;
  for (const auto& x : t.values.front()) s += x;
  return s == 0;
}

std::vector<Piece> linearity_intervals(const Template& t) {
  require_well_formed(t);
  std::vector<Piece> out;
  std::vector<int> last_sig;
  for (auto& p : stored_pieces(t)) {
    auto sig = block_signature(p.midpoint_value());
    if (!out.empty() && out.back().slope == p.slope && sig == last_sig) {
      out.back().b = p.b;
      continue;
    }
    last_sig = sig;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Piece> pieces_between(const Template& t, const Rational& from, const Rational& to) {
  require_well_formed(t);
  if (!(from < to)) throw std::invalid_argument("empty or reversed interval");
  if (from < t.times.front()) throw std::invalid_argument("interval starts before the template domain");
  if (t.tail.kind == TailKind::finite && to > t.times.back())
    throw std::invalid_argument("interval extends past the finite horizon");
  std::vector<Piece> out;
  auto take = [&](const Piece& p) {
    if (p.b && *p.b <= from) return;
    if (p.a >= to) return;
    out.push_back(clip(p, from, to));
  };
  for (const auto& p : stored_pieces(t)) take(p);
  if (t.tail.kind == TailKind::equivariant) {
    auto period = period_pieces(t);
    Rational factor = 1;
    Rational end = t.times.back();
    while (end < to) {
      factor *= t.tail.lambda;
      for (const auto& p : period) take(scale_piece(p, factor));
      end = t.times.back() * factor;
    }
  }
  return out;
}

Rational domain_start(const Template& t) { return t.times.front(); }

std::optional<Rational> domain_end(const Template& t) {
  if (t.tail.kind == TailKind::finite) return t.times.back();
  return std::nullopt;
}

RVec value_at(const Template& t, const Rational& time) {
  require_well_formed(t);
  if (time < t.times.front()) throw std::invalid_argument("time before the template domain");
  if (t.tail.kind == TailKind::equivariant && time > t.times.back()) {
    Rational s = time;
    Rational factor = 1;
    while (s > t.times.back()) {
      s /= t.tail.lambda;
      factor *= t.tail.lambda;
    }
    return scaled(value_at(t, s), factor);
  }
  if (time >= t.times.back()) {
    if (time == t.times.back()) return t.values.back();
    if (t.tail.kind == TailKind::finite) throw std::invalid_argument("time past the finite horizon");
    return axpy(t.values.back(), time - t.times.back(), t.tail.slope);
  }
  auto it = std::upper_bound(t.times.begin(), t.times.end(), time);
  std::size_t i = static_cast<std::size_t>(it - t.times.begin()) - 1;
  if (t.times[i] == time) return t.values[i];
  Rational w = (time - t.times[i]) / (t.times[i + 1] - t.times[i]);
  RVec out(t.values[i].size());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = t.values[i][c] + w * (t.values[i + 1][c] - t.values[i][c]);
  return out;
}

IntervalAnalysis analyze_piece(const Dims& dims, const Piece& piece) {
  const int d = dims.d();
  IntervalAnalysis r;
  r.a = piece.a;
  r.b = piece.b;
  r.slope = piece.slope;
  RVec mid = piece.midpoint_value();
  Rational F = 0;
  int prev_q = 0, prev_lp = 0, prev_lm = 0;
  for (int q = 1; q <= d; ++q) {
    F += piece.slope[q - 1];
    if (q < d && !(mid[q - 1] < mid[q])) continue;
    auto L = decompose_slope(dims, q, F);
    if (!L)
      throw std::logic_error("slope of F_" + std::to_string(q) + " not in Z(" + std::to_string(q) +
                             "); template is not valid");
    r.boundaries.push_back(q);
    r.L_plus.push_back(L->first);
    r.L_minus.push_back(L->second);
    int mp = L->first - prev_lp;
    int mm = L->second - prev_lm;
    if (mp < 0 || mm < 0) throw std::logic_error("negative block count; template is not valid");
    r.blocks.emplace_back(prev_q, q);
    r.M_plus.push_back(mp);
    r.M_minus.push_back(mm);
    for (int i = prev_q + 1; i <= q; ++i) (i <= prev_q + mp ? r.S_plus : r.S_minus).push_back(i);
    prev_q = q;
    prev_lp = L->first;
    prev_lm = L->second;
  }
  int ups = 0;
  std::size_t sp = 0;
  for (int i = 1; i <= d; ++i) {
    if (sp < r.S_plus.size() && r.S_plus[sp] == i) {
      ++ups;
      ++sp;
    } else {
      r.delta += ups;
    }
  }
  return r;
}

IntervalAnalysis analyze_interval(const Template& t, std::size_t index) {
  auto ivs = linearity_intervals(t);
  if (index >= ivs.size()) throw std::out_of_range("interval index out of range");
  return analyze_piece(t.dims, ivs[index]);
}

int delta_at(const Template& t, const Rational& time) {
  require_well_formed(t);
  if (time < t.times.front()) throw std::invalid_argument("time before the template domain");
  Rational s = time;
  if (t.tail.kind == TailKind::equivariant)
    while (s >= t.times.back()) s /= t.tail.lambda;
  if (t.tail.kind == TailKind::finite && s > t.times.back())
    throw std::invalid_argument("time past the finite horizon");
  auto pieces = stored_pieces(t);
  for (const auto& p : pieces)
    if (p.a <= s && (!p.b || s < *p.b)) return analyze_piece(t.dims, p).delta;
  // s is the right end of a finite template: use the last piece.
  return analyze_piece(t.dims, pieces.back()).delta;
}

namespace {

Rational integral_of_delta(const Template& t, const Rational& from, const Rational& to) {
  Rational sum = 0;
  for (const auto& p : pieces_between(t, from, to)) sum += Rational(analyze_piece(t.dims, p).delta) * (*p.b - p.a);
  return sum;
}

Rational virtual_prefix(const Template& t) {
  Rational t0 = t.times.front();
  Rational period = integral_of_delta(t, t0, t.times.back());
  return period / (t.tail.lambda - 1);
}

}  // namespace

Rational contraction_average(const Template& t, const Rational& from, const Rational& to) {
  if (!(from < to)) throw std::invalid_argument("empty or reversed interval");
  return integral_of_delta(t, from, to) / (to - from);
}

Rational running_average(const Template& t, const Rational& T) {
  require_well_formed(t);
  Rational t0 = t.times.front();
  if (!(T > t0)) throw std::invalid_argument("running average needs T past the domain start");
  if (t0 == 0) return contraction_average(t, 0, T);
  if (t.tail.kind == TailKind::equivariant && t.tail.anchor == 0)
    return (virtual_prefix(t) + integral_of_delta(t, t0, T)) / T;
  return contraction_average(t, t0, T);
}

AsymptoticRates asymptotic_rates(const Template& t) {
  require_well_formed(t);
  AsymptoticRates out;
  if (t.tail.kind == TailKind::finite) return out;
  if (t.tail.kind == TailKind::constant_slope) {
    int dl = analyze_piece(t.dims, stored_pieces(t).back()).delta;
    out.lower = out.upper = Rational(dl);
    out.method = RateMethod::constant_tail;
    return out;
  }
  out.method = RateMethod::equivariant_period;
  auto period = period_pieces(t);
  std::vector<int> deltas;
  Rational P = 0;
  for (const auto& p : period) {
    deltas.push_back(analyze_piece(t.dims, p).delta);
    P += Rational(deltas.back()) * (*p.b - p.a);
  }
  // Integral of delta over [0, T] along the pure equivariant orbit, evaluated at period breakpoints.
  Rational acc = P / (t.tail.lambda - 1);
  Rational ta = t.times[t.tail.anchor];
  Rational lo = acc / ta, hi = lo;
  for (std::size_t i = 0; i < period.size(); ++i) {
    acc += Rational(deltas[i]) * (*period[i].b - period[i].a);
    Rational v = acc / *period[i].b;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  out.lower = lo;
  out.upper = hi;
  return out;
}

}  // namespace pgn
