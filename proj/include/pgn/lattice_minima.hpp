#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "pgn/template.hpp"

namespace pgn {

using Real = boost::multiprecision::cpp_bin_float_50;
using IVec = std::vector<mpz_class>;

class EnumerationBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A is m x n, stored row-major.
struct FlowMatrix {
  Dims dims;
  std::vector<Real> A;
};

// "zero", "golden" (k-th entry frac(k phi), k = 1, 2, ...), "rational:p/q" (all entries p/q),
// or rows separated by ';' with entries separated by ','.
FlowMatrix named_flow_matrix(const Dims& dims, const std::string& spec);

// Columns generate the lattice.
struct LatticeState {
  std::vector<std::vector<Real>> basis;
  double det_log = 0;
  int dim() const { return static_cast<int>(basis.size()); }
  static LatticeState from_columns(std::vector<std::vector<Real>> columns);
  static LatticeState from_columns(const std::vector<std::vector<double>>& columns);
};

// g_t u_A Z^d with g_t = diag(e^{t/m} I_m, e^{-t/n} I_n).
LatticeState flow_lattice(const FlowMatrix& F, double t);

struct EnumOptions {
  long node_budget = 10'000'000;
};

struct MinimaResult {
  std::vector<double> minima;
  std::vector<double> log_minima;
  std::vector<IVec> coefficients;               // witness j = basis * coefficients[j]
  std::vector<std::vector<double>> witnesses;   // the witness vectors themselves
  long nodes = 0;
};

MinimaResult successive_minima(const LatticeState& L, const EnumOptions& opts = {});
// Same, starting from a reduced unimodular change of basis; `hint` is replaced by the
// LLL-reduced one found here.
MinimaResult successive_minima(const LatticeState& L, std::vector<IVec>& hint, const EnumOptions& opts = {});

struct MinimaProfile {
  Dims dims;
  std::vector<double> times;
  std::vector<std::vector<double>> h;
  std::vector<std::vector<IVec>> witnesses;
};

std::vector<double> uniform_grid(double t_min, double t_max, double step);
MinimaProfile h_profile(const FlowMatrix& F, const std::vector<double>& t_grid, const EnumOptions& opts = {});

// |sum_j log lambda_j - log covolume|.
double minkowski_check(const MinimaResult& minima, const LatticeState& L);

// log of the covolume of the span of the given lattice vectors (coefficients in L's basis).
double rational_subspace_covolume(const LatticeState& L, const std::vector<IVec>& coefficients);
double log_covolume(const std::vector<std::vector<Real>>& vectors);

struct GapBand {
  int j = 0;  // 1-based: h_{j+1} - h_j exceeds the separation threshold
  double t_from = 0, t_to = 0;
  double band_width = 0;        // sup of F_j minus its lower convex envelope
  bool envelope_slopes_in_range = true;
};

struct ApproxTemplateReport {
  bool sorted = true;
  bool slopes_ok = true;
  double max_slope_excess = 0;
  std::vector<GapBand> bands;
};

ApproxTemplateReport approx_template_check(const MinimaProfile& P, double separation = 1.0, double tol = 1e-6);

// Max over grid points inside the template's domain of the sup-norm of h(t) - f(t).
double template_distance(const MinimaProfile& P, const Template& T);

}  // namespace pgn
