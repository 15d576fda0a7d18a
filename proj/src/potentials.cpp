#include "pgn/potentials.hpp"

#include <algorithm>

namespace pgn {

namespace {

struct Linear {
  Rational value;  // at the left end of the piece
  Rational slope;
};

void require_balanced(const Template& t) {
  if (!balance_check(t)) throw UnbalancedTemplateError("potential needs a balanced template");
}

Rational delta_mn_of(const Dims& dims) {
  Rational mn = dims.m * dims.n;
  return mn - mn / dims.d();
}

// Split [a, b) at interior roots of the given linear functions.
std::vector<std::pair<Rational, std::optional<Rational>>> split_piece(const Piece& p, const std::vector<Linear>& fns) {
  std::vector<Rational> cuts;
  for (const auto& f : fns) {
    if (f.slope == 0) continue;
    Rational root = p.a - f.value / f.slope;
    if (root > p.a && (!p.b || root < *p.b)) cuts.push_back(root);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<std::pair<Rational, std::optional<Rational>>> out;
  Rational lo = p.a;
  for (const auto& c : cuts) {
    out.emplace_back(lo, c);
    lo = c;
  }
  out.emplace_back(lo, p.b);
  return out;
}

Rational sample_point(const Rational& a, const std::optional<Rational>& b) { return b ? Rational((a + *b) / 2) : Rational(a + 1); }

bool is_zero_vector(const RVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

std::vector<Piece> pieces_for_check(const Template& t) {
  require_well_formed(t);
  require_balanced(t);
  return linearity_intervals(t);
}

std::vector<int> range_set(int lo, int hi) {
  std::vector<int> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

}  // namespace

std::string to_string(PhiCase c) {
  switch (c) {
    case PhiCase::case1: return "1";
    case PhiCase::case2: return "2";
    case PhiCase::case3a: return "3a";
    case PhiCase::case3b: return "3b";
    case PhiCase::strict: return "strict";
    case PhiCase::unclassified: return "unclassified";
  }
  return "unknown";
}

Rational potential_phi(const Template& t, const Rational& time) {
  require_balanced(t);
  const Dims& dm = t.dims;
  RVec f = value_at(t, time);
  Rational c1 = make_rational(dm.m * dm.m * dm.n, dm.d());
  Rational c2 = make_rational(dm.m * dm.n * dm.n, dm.d());
  return std::max<Rational>(c1 * abs(f.front()), c2 * abs(f.back()));
}

Rational potential_psi(const Template& t, const Rational& time) {
  const Dims& dm = t.dims;
  if (dm.n < 2) throw UnsupportedPreconditionError("psi needs n >= 2");
  require_balanced(t);
  RVec f = value_at(t, time);
  Rational c1 = make_rational(dm.m * dm.n, dm.d());
  Rational c2 = make_rational(dm.m * dm.n * dm.n, dm.d());
  Rational e = (dm.m + 1) * f[0] + (dm.d() - 1) * f[1];
  return std::max<Rational>(c1 * abs(e), c2 * abs(f.back()));
}

std::vector<PhiIntervalReport> check_phi_inequality(const Template& t) {
  const Dims& dm = t.dims;
  const int m = dm.m, n = dm.n, d = dm.d();
  const Rational c1 = make_rational(m * m * n, d), c2 = make_rational(m * n * n, d);
  const Rational dmn = delta_mn_of(dm);
  const Rational min_gap = Rational(1, std::max(m, n));
  std::vector<PhiIntervalReport> out;
  for (const auto& p : pieces_for_check(t)) {
    // f_1 <= 0 <= f_d on balanced templates, so |f_1| = -f_1 and |f_d| = f_d.
    Linear branch{-c1 * p.fa.front() - c2 * p.fa.back(), -c1 * p.slope.front() - c2 * p.slope.back()};
    Linear bottom{p.fa.front(), p.slope.front()};
    IntervalAnalysis an = analyze_piece(dm, p);
    for (auto [a, b] : split_piece(p, {branch, bottom})) {
      PhiIntervalReport r;
      r.a = a;
      r.b = b;
      Rational s = sample_point(a, b);
      RVec f = p.value_at(s);
      if (is_zero_vector(f)) {
        r.skipped = true;
        out.push_back(r);
        continue;
      }
      Rational bottom_term = c1 * -f.front();
      Rational top_term = c2 * f.back();
      r.lhs = bottom_term >= top_term ? Rational(c1 * -p.slope.front()) : Rational(c2 * p.slope.back());
      r.rhs = dmn - an.delta;
      r.gap = r.rhs - r.lhs;
      if (r.gap < 0) {
        r.ok = false;
        r.equality_case = PhiCase::strict;
      } else if (r.gap > 0) {
        r.equality_case = PhiCase::strict;
        r.ok = r.gap >= min_gap;
      } else {
        const auto& sp = an.S_plus;
        auto low = range_set(1, m - 1);
        auto with_next = low;
        with_next.push_back(m + 1);
        auto with_top = low;
        with_top.push_back(m + n);
        bool bottom_dominant = m * -f.front() >= n * f.back();
        bool top_dominant = n * f.back() >= m * -f.front();
        if (sp == range_set(1, m)) {
          r.equality_case = PhiCase::case1;
        } else if (sp == range_set(2, m + 1) && bottom_dominant) {
          r.equality_case = PhiCase::case3a;
        } else if (sp == with_top && top_dominant) {
          r.equality_case = PhiCase::case3b;
        } else if (sp == with_next && f[0] == f[m - 1] && f[m] == f[d - 1]) {
          r.equality_case = PhiCase::case2;
        } else {
          r.equality_case = PhiCase::unclassified;
          r.ok = false;
        }
      }
      out.push_back(r);
    }
  }
  return out;
}

std::vector<PsiIntervalReport> check_psi_inequality(const Template& t) {
  const Dims& dm = t.dims;
  const int m = dm.m, n = dm.n, d = dm.d();
  if (n < 2) throw UnsupportedPreconditionError("psi needs n >= 2");
  const Rational c1 = make_rational(m * n, d), c2 = make_rational(m * n * n, d);
  const Rational dmn = delta_mn_of(dm);
  std::vector<PsiIntervalReport> out;
  for (const auto& p : pieces_for_check(t)) {
    // (m+1) f_1 + (d-1) f_2 <= m f_1 <= 0 on balanced templates.
    Rational e0 = (m + 1) * p.fa[0] + (d - 1) * p.fa[1];
    Rational es = (m + 1) * p.slope[0] + (d - 1) * p.slope[1];
    Linear branch{-c1 * e0 - c2 * p.fa.back(), -c1 * es - c2 * p.slope.back()};
    Linear bottom{p.fa.front(), p.slope.front()};
    IntervalAnalysis an = analyze_piece(dm, p);
    for (auto [a, b] : split_piece(p, {branch, bottom})) {
      PsiIntervalReport r;
      r.a = a;
      r.b = b;
      Rational s = sample_point(a, b);
      RVec f = p.value_at(s);
      if (is_zero_vector(f)) {
        r.skipped = true;
        out.push_back(r);
        continue;
      }
      Rational e = (m + 1) * f[0] + (d - 1) * f[1];
      r.lhs = c1 * -e >= c2 * f.back() ? Rational(-c1 * es) : Rational(c2 * p.slope.back());
      r.rhs = dmn - an.delta;
      r.ok = r.lhs <= r.rhs;
      bool top_flat = true;
      for (int i = 2; i < d; ++i) top_flat = top_flat && f[i] == f[1];
      r.case1 = f[0] < f[1] && top_flat;
      bool upper_flat = true;
      for (int i = 3; i < d; ++i) upper_flat = upper_flat && f[i] == f[2];
      r.case2 = d >= 3 && f[0] < f[1] && f[1] < f[2] && upper_flat && p.slope[1] == make_rational(-1, n);
      out.push_back(r);
    }
  }
  return out;
}

}  // namespace pgn
