#include "pgn/lattice_minima.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pgn/convex_hull.hpp"

namespace pgn {

namespace {

using Matrix = std::vector<std::vector<Real>>;  // list of columns
using IMatrix = std::vector<IVec>;              // list of integer columns

Real to_real(const mpz_class& z) {
  if (z.fits_slong_p()) return Real(z.get_si());
  return Real(z.get_str());
}

Real to_real(const Rational& q) { return to_real(mpz_class(q.get_num())) / to_real(mpz_class(q.get_den())); }

mpz_class round_to_mpz(const Real& x) {
  Real r = boost::multiprecision::round(x);
  if (boost::multiprecision::abs(r) < Real(4e18)) return mpz_class(static_cast<long>(r));
  return mpz_class(r.str(0, std::ios_base::fixed).substr(0, r.str(0, std::ios_base::fixed).find('.')));
}

Real dot(const std::vector<Real>& a, const std::vector<Real>& b) {
  Real s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

IMatrix identity(int d) {
  IMatrix u(static_cast<std::size_t>(d), IVec(static_cast<std::size_t>(d), 0));
  for (int i = 0; i < d; ++i) u[i][i] = 1;
  return u;
}

std::vector<Real> combine(const Matrix& B, const IVec& c) {
  std::vector<Real> v(B.front().size(), Real(0));
  for (std::size_t j = 0; j < B.size(); ++j) {
    if (c[j] == 0) continue;
    Real cj = to_real(c[j]);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += cj * B[j][i];
  }
  return v;
}

struct Gso {
  Matrix mu;            // mu[k][j], j < k
  std::vector<Real> bsq;
};

Gso gram_schmidt(const Matrix& cols) {
  const std::size_t d = cols.size();
  Gso g;
  g.mu.assign(d, std::vector<Real>(d, Real(0)));
  g.bsq.assign(d, Real(0));
  Matrix star = cols;
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      g.mu[k][j] = dot(cols[k], star[j]) / g.bsq[j];
      for (std::size_t i = 0; i < star[k].size(); ++i) star[k][i] -= g.mu[k][j] * star[j][i];
    }
    g.bsq[k] = dot(star[k], star[k]);
    if (!(g.bsq[k] > 0)) throw std::invalid_argument("lattice basis is not of full rank");
  }
  return g;
}

// Working basis: cols = B * U, kept in sync.
struct Basis {
  const Matrix* B;
  IMatrix U;
  Matrix cols;

  void refresh() {
    cols.resize(U.size());
    for (std::size_t j = 0; j < U.size(); ++j) cols[j] = combine(*B, U[j]);
  }
  void sub(std::size_t k, std::size_t j, const mpz_class& q) {
    for (std::size_t i = 0; i < U[k].size(); ++i) U[k][i] -= q * U[j][i];
    Real qr = to_real(q);
    for (std::size_t i = 0; i < cols[k].size(); ++i) cols[k][i] -= qr * cols[j][i];
  }
  void swap(std::size_t a, std::size_t b) {
    std::swap(U[a], U[b]);
    std::swap(cols[a], cols[b]);
  }
};

// LLL on columns [lo, hi); columns are size-reduced against every earlier column, swaps stay
// inside the range.
void lll(Basis& basis, std::size_t lo, std::size_t hi, const Real& delta = Real("0.99")) {
  if (hi <= lo) return;
  std::size_t k = lo == 0 ? 1 : lo;
  if (lo == 0 && hi <= 1) return;
  Gso g = gram_schmidt(basis.cols);
  while (k < hi) {
    for (int pass = 0; pass < 64; ++pass) {
      bool changed = false;
      for (std::size_t jj = k; jj-- > 0;) {
        if (boost::multiprecision::abs(g.mu[k][jj]) <= Real("0.5")) continue;
        basis.sub(k, jj, round_to_mpz(g.mu[k][jj]));
        g = gram_schmidt(basis.cols);
        changed = true;
      }
      if (!changed) break;
    }
    if (k > lo && g.bsq[k] < (delta - g.mu[k][k - 1] * g.mu[k][k - 1]) * g.bsq[k - 1]) {
      basis.swap(k, k - 1);
      g = gram_schmidt(basis.cols);
      k = std::max(k - 1, lo == 0 ? std::size_t{1} : lo);
    } else {
      ++k;
    }
  }
}

struct Enumerator {
  const Gso& g;
  std::size_t frozen;
  long budget;
  long nodes = 0;
  std::vector<long> x, best_x;
  Real best;
  bool found = false;

  void search(std::size_t level, const Real& partial) {
    const std::size_t d = g.bsq.size();
    Real center = 0;
    for (std::size_t l = level + 1; l < d; ++l) center -= Real(x[l]) * g.mu[l][level];
    long c0 = static_cast<long>(boost::multiprecision::round(center));
    bool tail_zero = true;
    for (std::size_t l = level + 1; l < d; ++l)
      if (l >= frozen && x[l] != 0) tail_zero = false;
    // Candidates in order of distance from the center; each side stops once pruned.
    bool up_open = true, down_open = true;
    for (long step = 0; up_open || down_open; ++step) {
      for (int side = 0; side < 2; ++side) {
        bool& open = side == 0 ? up_open : down_open;
        if (!open || (side == 1 && step == 0)) continue;
        long xi = side == 0 ? c0 + step : c0 - step;
        Real diff = Real(xi) - center;
        Real rho = partial + diff * diff * g.bsq[level];
        if (rho >= best) {
          open = false;
          if (step == 0) down_open = false;
          continue;
        }
        if (++nodes > budget)
          throw EnumerationBudgetError("enumeration budget of " + std::to_string(budget) + " nodes exceeded");
        x[level] = xi;
        if (level == 0) {
          bool outside = false;
          for (std::size_t l = frozen; l < d; ++l) outside = outside || x[l] != 0;
          if (outside) {
            best = rho;
            best_x = x;
            found = true;
          }
        } else if (!(level == frozen && frozen > 0 && tail_zero && xi == 0)) {
          // Otherwise every leaf below lies in the span of the earlier witnesses.
          search(level - 1, rho);
        }
      }
    }
    x[level] = 0;
  }
};

// Unimodular W whose first columns span the saturation of the given integer vectors.
IMatrix saturating_completion(const IMatrix& vectors, int d) {
  IMatrix C = vectors;  // columns
  IMatrix W = identity(d);
  const std::size_t j = vectors.size();
  auto row_sub = [&](std::size_t a, std::size_t b, const mpz_class& q) {  // row a -= q row b
    for (std::size_t c = 0; c < j; ++c) C[c][a] -= q * C[c][b];
    for (std::size_t r = 0; r < static_cast<std::size_t>(d); ++r) W[b][r] += q * W[a][r];
  };
  auto row_swap = [&](std::size_t a, std::size_t b) {
    for (std::size_t c = 0; c < j; ++c) std::swap(C[c][a], C[c][b]);
    std::swap(W[a], W[b]);
  };
  for (std::size_t c = 0; c < j; ++c) {
    while (true) {
      std::size_t piv = static_cast<std::size_t>(d);
      for (std::size_t r = c; r < static_cast<std::size_t>(d); ++r)
        if (C[c][r] != 0 && (piv == static_cast<std::size_t>(d) || abs(C[c][r]) < abs(C[c][piv]))) piv = r;
      if (piv == static_cast<std::size_t>(d)) throw std::logic_error("witness vectors are linearly dependent");
      if (piv != c) row_swap(piv, c);
      bool done = true;
      for (std::size_t r = c + 1; r < static_cast<std::size_t>(d); ++r) {
        if (C[c][r] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), C[c][r].get_mpz_t(), C[c][c].get_mpz_t());
        row_sub(r, c, q);
        if (C[c][r] != 0) done = false;
      }
      if (done) break;
    }
  }
  return W;
}

MinimaResult minima_impl(const LatticeState& L, IMatrix& U, const EnumOptions& opts) {
  const int d = L.dim();
  Basis basis{&L.basis, U, {}};
  basis.refresh();
  lll(basis, 0, static_cast<std::size_t>(d));
  U = basis.U;

  MinimaResult out;
  IMatrix found;
  for (int j = 0; j < d; ++j) {
    const std::size_t f = static_cast<std::size_t>(j);
    if (j > 0) {
      basis.U = saturating_completion(found, d);
      basis.refresh();
      lll(basis, 0, f);
      lll(basis, f, static_cast<std::size_t>(d));
    }
    Gso g = gram_schmidt(basis.cols);
    Enumerator e{g, f, opts.node_budget - out.nodes, 0, std::vector<long>(static_cast<std::size_t>(d), 0), {}, Real(0)};
    std::size_t start = f;
    Real start_norm = dot(basis.cols[f], basis.cols[f]);
    for (std::size_t i = f + 1; i < static_cast<std::size_t>(d); ++i) {
      Real nrm = dot(basis.cols[i], basis.cols[i]);
      if (nrm < start_norm) {
        start_norm = nrm;
        start = i;
      }
    }
    e.best = start_norm;
    e.best_x.assign(static_cast<std::size_t>(d), 0);
    e.best_x[start] = 1;
    e.search(static_cast<std::size_t>(d - 1), Real(0));
    out.nodes += e.nodes;

    IVec coeff(static_cast<std::size_t>(d), 0);
    for (std::size_t c = 0; c < static_cast<std::size_t>(d); ++c) {
      if (e.best_x[c] == 0) continue;
      for (std::size_t i = 0; i < coeff.size(); ++i) coeff[i] += mpz_class(e.best_x[c]) * basis.U[c][i];
    }
    found.push_back(coeff);
    std::vector<Real> v = combine(L.basis, coeff);
    Real nrm = sqrt(dot(v, v));
    out.minima.push_back(static_cast<double>(nrm));
    out.log_minima.push_back(static_cast<double>(log(nrm)));
    out.coefficients.push_back(coeff);
    std::vector<double> vd;
    for (const auto& x : v) vd.push_back(static_cast<double>(x));
    out.witnesses.push_back(vd);
  }
  return out;
}

}  // namespace

FlowMatrix named_flow_matrix(const Dims& dims, const std::string& spec) {
  require_valid_dims(dims);
  const std::size_t size = static_cast<std::size_t>(dims.m * dims.n);
  FlowMatrix F{dims, std::vector<Real>(size, Real(0))};
  if (spec == "zero") return F;
  if (spec == "golden") {
    const Real phi = (1 + sqrt(Real(5))) / 2;
    for (std::size_t k = 0; k < size; ++k) {
      Real v = Real(static_cast<long>(k + 1)) * phi;
      F.A[k] = v - floor(v);
    }
    return F;
  }
  if (spec.rfind("rational:", 0) == 0) {
    std::fill(F.A.begin(), F.A.end(), to_real(parse_rational(spec.substr(9))));
    return F;
  }
  std::vector<Real> vals;
  std::size_t rows = 0;
  std::stringstream all(spec);
  std::string row;
  while (std::getline(all, row, ';')) {
    ++rows;
    std::stringstream rs(row);
    std::string cell;
    std::size_t cols = 0;
    while (std::getline(rs, cell, ',')) {
      vals.push_back(to_real(parse_rational(cell)));
      ++cols;
    }
    if (cols != static_cast<std::size_t>(dims.n))
      throw std::invalid_argument("matrix row " + std::to_string(rows) + " needs " + std::to_string(dims.n) + " entries");
  }
  if (rows != static_cast<std::size_t>(dims.m))
    throw std::invalid_argument("matrix needs " + std::to_string(dims.m) + " rows");
  F.A = vals;
  return F;
}

LatticeState LatticeState::from_columns(std::vector<std::vector<Real>> columns) {
  const std::size_t d = columns.size();
  if (d == 0) throw std::invalid_argument("empty lattice basis");
  for (const auto& c : columns)
    if (c.size() != d) throw std::invalid_argument("lattice basis must be square");
  LatticeState L;
  Gso g = gram_schmidt(columns);
  Real s = 0;
  for (const auto& b : g.bsq) s += log(b);
  L.det_log = static_cast<double>(s / 2);
  L.basis = std::move(columns);
  return L;
}

LatticeState LatticeState::from_columns(const std::vector<std::vector<double>>& columns) {
  Matrix m;
  for (const auto& c : columns) m.emplace_back(c.begin(), c.end());
  return from_columns(std::move(m));
}

LatticeState flow_lattice(const FlowMatrix& F, double t) {
  const int m = F.dims.m, n = F.dims.n, d = F.dims.d();
  if (F.A.size() != static_cast<std::size_t>(m * n)) throw std::invalid_argument("matrix size does not match dims");
  const Real up = exp(Real(t) / m), down = exp(-Real(t) / n);
  Matrix cols(static_cast<std::size_t>(d), std::vector<Real>(static_cast<std::size_t>(d), Real(0)));
  for (int j = 0; j < d; ++j) {
    if (j < m) {
      cols[j][j] = up;
    } else {
      for (int i = 0; i < m; ++i) cols[j][i] = up * F.A[static_cast<std::size_t>(i * n + (j - m))];
      cols[j][j] = down;
    }
  }
  LatticeState L;
  L.basis = std::move(cols);
  L.det_log = 0;
  return L;
}

MinimaResult successive_minima(const LatticeState& L, const EnumOptions& opts) {
  IMatrix U = identity(L.dim());
  return minima_impl(L, U, opts);
}

MinimaResult successive_minima(const LatticeState& L, std::vector<IVec>& hint, const EnumOptions& opts) {
  if (hint.size() != static_cast<std::size_t>(L.dim())) hint = identity(L.dim());
  return minima_impl(L, hint, opts);
}

std::vector<double> uniform_grid(double t_min, double t_max, double step) {
  if (!(step > 0) || t_max < t_min) throw std::invalid_argument("grid needs step > 0 and t_max >= t_min");
  std::vector<double> out;
  const long count = static_cast<long>(std::floor((t_max - t_min) / step + 1e-9));
  for (long i = 0; i <= count; ++i) out.push_back(t_min + static_cast<double>(i) * step);
  return out;
}

MinimaProfile h_profile(const FlowMatrix& F, const std::vector<double>& t_grid, const EnumOptions& opts) {
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
    if (!(t_grid[i] < t_grid[i + 1])) throw std::invalid_argument("time grid must be increasing");
  MinimaProfile P;
  P.dims = F.dims;
  IMatrix hint = identity(F.dims.d());
  for (double t : t_grid) {
    MinimaResult r;
    try {
      r = successive_minima(flow_lattice(F, t), hint, opts);
    } catch (const EnumerationBudgetError& e) {
      throw EnumerationBudgetError(std::string(e.what()) + " at t = " + std::to_string(t));
    }
    P.times.push_back(t);
    P.h.push_back(r.log_minima);
    P.witnesses.push_back(r.coefficients);
  }
  return P;
}

double minkowski_check(const MinimaResult& minima, const LatticeState& L) {
  double s = 0;
  for (double h : minima.log_minima) s += h;
  return std::abs(s - L.det_log);
}

double log_covolume(const std::vector<std::vector<Real>>& vectors) {
  if (vectors.empty()) return 0;
  Gso g;
  try {
    g = gram_schmidt(vectors);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("vectors are linearly dependent");
  }
  Real s = 0;
  for (const auto& b : g.bsq) s += log(b);
  return static_cast<double>(s / 2);
}

double rational_subspace_covolume(const LatticeState& L, const std::vector<IVec>& coefficients) {
  std::vector<std::vector<Real>> vs;
  for (const auto& c : coefficients) {
    if (c.size() != static_cast<std::size_t>(L.dim())) throw std::invalid_argument("coefficient vector has wrong length");
    vs.push_back(combine(L.basis, c));
  }
  return log_covolume(vs);
}

ApproxTemplateReport approx_template_check(const MinimaProfile& P, double separation, double tol) {
  ApproxTemplateReport rep;
  const int d = P.dims.d();
  const double lo = -1.0 / P.dims.n, hi = 1.0 / P.dims.m;
  for (const auto& h : P.h)
    for (int i = 0; i + 1 < d; ++i)
      if (h[i] > h[i + 1] + 1e-12) rep.sorted = false;
  for (std::size_t k = 0; k + 1 < P.times.size(); ++k) {
    double dt = P.times[k + 1] - P.times[k];
    for (int i = 0; i < d; ++i) {
      double q = (P.h[k + 1][i] - P.h[k][i]) / dt;
      double excess = std::max(q - hi, lo - q);
      rep.max_slope_excess = std::max(rep.max_slope_excess, excess);
      if (excess > tol) rep.slopes_ok = false;
    }
  }
  for (int j = 1; j < d; ++j) {
    const RVec zs = slope_set(P.dims, j);
    std::size_t k = 0;
    while (k < P.times.size()) {
      if (P.h[k][j] - P.h[k][j - 1] <= separation) {
        ++k;
        continue;
      }
      std::size_t end = k;
      while (end + 1 < P.times.size() && P.h[end + 1][j] - P.h[end + 1][j - 1] > separation) ++end;
      if (end > k) {
        std::vector<std::pair<Rational, Rational>> pts;
        std::vector<double> F;
        for (std::size_t s = k; s <= end; ++s) {
          double sum = 0;
          for (int i = 0; i < j; ++i) sum += P.h[s][i];
          F.push_back(sum);
          pts.emplace_back(from_double(P.times[s]), from_double(sum));
        }
        HullFunction hull = convex_hull_function(pts);
        GapBand band{j, P.times[k], P.times[end], 0, true};
        for (std::size_t s = k; s <= end; ++s)
          band.band_width = std::max(band.band_width, F[s - k] - to_double(hull(from_double(P.times[s]))));
        const double slack = 1e-6;
        for (std::size_t q = 0; q + 1 < hull.xs.size(); ++q) {
          double slope = to_double((hull.ys[q + 1] - hull.ys[q]) / (hull.xs[q + 1] - hull.xs[q]));
          if (slope < to_double(zs.front()) - slack || slope > to_double(zs.back()) + slack)
            band.envelope_slopes_in_range = false;
        }
        rep.bands.push_back(band);
      }
      k = end + 1;
    }
  }
  return rep;
}

double template_distance(const MinimaProfile& P, const Template& T) {
  const Rational start = domain_start(T);
  const auto end = domain_end(T);
  bool any = false;
  double dist = 0;
  for (std::size_t k = 0; k < P.times.size(); ++k) {
    Rational t = from_double(P.times[k]);
    if (t < start || (end && t > *end)) continue;
    any = true;
    RVec f = value_at(T, t);
    for (std::size_t i = 0; i < f.size(); ++i) dist = std::max(dist, std::abs(P.h[k][i] - to_double(f[i])));
  }
  if (!any) throw std::invalid_argument("profile and template domains do not overlap");
  return dist;
}

}  // namespace pgn
