#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "pgn/dimension_formulas.hpp"
#include "pgn/game_sim.hpp"
#include "pgn/lattice_minima.hpp"
#include "pgn/potentials.hpp"
#include "pgn/standard_templates.hpp"
#include "pgn/template_io.hpp"

namespace pgn::cli {

namespace {

using nlohmann::json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Settings {
  std::string format;  // empty: the command's default
  long enumeration_budget = 10'000'000;
  double grid_t_max = 30;
  double grid_step = 0.125;
  double separation = 1.0;
  double slope_tolerance = 1e-6;
  double trace_tolerance = 1e-8;
};

Rational rational_arg(const std::string& name, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::exception&) {
    throw UsageError("--" + name + " expects a rational such as 3/7 or 0.25, got '" + text + "'");
  }
}

double double_arg(const std::string& name, const std::string& text) { return to_double(rational_arg(name, text)); }

json exact(const Rational& r) { return {{"exact", to_string(r)}, {"decimal", to_double(r)}}; }

json envelope(const std::string& command, json payload) {
  return {{"command", command}, {"version", kVersion}, {"payload", std::move(payload)}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// Accepts a bare template or the envelope written by `template build`.
Template read_template(const std::string& path) {
  json j = read_json_file(path);
  if (j.contains("payload") && j["payload"].contains("template")) j = j["payload"]["template"];
  try {
    return template_from_json(j);
  } catch (const json::exception& e) {
    throw UsageError("'" + path + "' is not a template: " + e.what());
  }
}

std::string fixed(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

// ---- formula ----------------------------------------------------------------

struct FormulaArgs {
  std::string name;
  int m = 1, n = 1, k = 1;
  std::string tau, omega, p, x, y;
};

json run_formula(const FormulaArgs& a) {
  const Dims dims{a.m, a.n};
  require_valid_dims(dims);
  auto need = [&](const std::string& value, const std::string& flag) {
    if (value.empty()) throw UsageError("formula " + a.name + " needs --" + flag);
    return value;
  };
  json p;
  if (a.name == "delta") {
    p = {{"formula", "delta_mn = mn(1 - 1/(m+n))"}, {"value", exact(delta_mn(dims))}};
  } else if (a.name == "dani") {
    p["formula"] = "tau = (1/n)(omega - n/m)/(omega + 1)";
    if (!a.omega.empty()) {
      std::optional<Rational> w;
      if (a.omega != "inf") w = rational_arg("omega", a.omega);
      p["omega"] = a.omega == "inf" ? json("inf") : json(to_string(*w));
      p["tau"] = exact(omega_to_tau(w, dims));
    } else {
      Rational t = rational_arg("tau", need(a.tau, "tau or --omega"));
      auto w = tau_to_omega(t, dims);
      p["tau"] = to_string(t);
      p["omega"] = w ? exact(*w) : json("inf");
    }
  } else if (a.name == "packing") {
    Rational t = rational_arg("tau", need(a.tau, "tau"));
    p = {{"formula",
          "max(mn - m, delta_mn - (mn/(m+n))(d+m) tau, mn - (mn/(m+n))(1 + m tau)/(1 - mn tau/(m-1)))"},
         {"value", exact(packing_rate(dims, t))},
         {"equality", packing_rate_is_exact(dims)}};
  } else if (a.name == "fk") {
    p = {{"formula", "f_mn(k) = mn - k(d-k)mn/d^2 - {km/d}{kn/d}"}, {"k", a.k}, {"value", exact(fmn_k(dims, a.k))}};
  } else if (a.name == "hd12" || a.name == "pd12") {
    double t = double_arg("tau", need(a.tau, "tau"));
    if (a.name == "hd12")
      p = {{"formula",
            "4/3 - (4/3)sqrt(tau - 6tau^3 + 4tau^4) - 2tau + (8/3)tau^2 if tau <= (3sqrt2-2)/14, else "
            "(1-2tau)/(1+tau)"},
           {"value", hd_sing12(t)}};
    else
      p = {{"formula", "(4 - 8tau)/3 if tau <= 1/8, else 1"}, {"value", pd_sing12(t)}};
  } else if (a.name == "fx") {
    p = {{"formula", "(2/3)(-x + (2-7x)y + (3-6x)y^2)/(y + (2+2x)y^2)"},
         {"value", exact(sing12_family_rate(rational_arg("x", need(a.x, "x")), rational_arg("y", need(a.y, "y"))))}};
  } else if (a.name == "avg") {
    p = {{"formula", "p delta_mn + (1-p) mn"},
         {"value", exact(avg_singular_rate(dims, rational_arg("p", need(a.p, "p"))))}};
  } else if (a.name == "omega-approx") {
    p = {{"formula", "mn(1 - tau)"}, {"value", exact(omega_approx_rate(dims, rational_arg("tau", need(a.tau, "tau"))))}};
  } else if (a.name == "hsmall") {
    p = {{"formula", "delta_mn - (m^2 n/(m+n)) tau"},
         {"value", exact(hsmall_envelope(dims, rational_arg("tau", need(a.tau, "tau"))))}};
  } else {
    throw UsageError("unknown formula '" + a.name +
                     "' (expected delta, dani, packing, fk, hd12, pd12, fx, avg, omega-approx, hsmall)");
  }
  p["m"] = a.m;
  p["n"] = a.n;
  return p;
}

// ---- template ---------------------------------------------------------------

struct TemplateArgs {
  std::string action, file, kind;
  int m = 1, n = 1, k = 2, j = 1, count = 20;
  std::string tau, lambda, gamma, ratio, p, eps, points, from, to, T, t0 = "100000", phi_table;
};

json rates_json(const AsymptoticRates& r) {
  json j{{"method", to_string(r.method)}};
  j["lower"] = r.lower ? exact(*r.lower) : json(nullptr);
  j["upper"] = r.upper ? exact(*r.upper) : json(nullptr);
  return j;
}

std::vector<StandardPoint> parse_points(const std::string& text) {
  std::vector<StandardPoint> pts;
  std::stringstream all(text);
  std::string item;
  while (std::getline(all, item, ';')) {
    auto comma = item.find(',');
    if (comma == std::string::npos) throw UsageError("--points expects 't,eps;t,eps;...'");
    pts.push_back({rational_arg("points", item.substr(0, comma)), rational_arg("points", item.substr(comma + 1))});
  }
  return pts;
}

std::vector<std::pair<double, double>> phi_table_arg(const std::string& path, double t0, int count) {
  std::vector<std::pair<double, double>> table;
  if (path.empty()) {
    // Default phi(t) = sqrt(t), tabulated far enough to cover every step.
    double t = t0;
    for (int i = 0; i < 4 * count + 8; ++i, t *= 1.5) table.emplace_back(t, std::sqrt(t));
    return table;
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw UsageError("phi table rows must read 't,phi'");
    table.emplace_back(double_arg("phi-table", line.substr(0, comma)), double_arg("phi-table", line.substr(comma + 1)));
  }
  return table;
}

json build_template(const TemplateArgs& a) {
  const Dims dims{a.m, a.n};
  auto need = [&](const std::string& value, const std::string& flag) {
    if (value.empty()) throw UsageError("template build " + a.kind + " needs --" + flag);
    return rational_arg(flag, value);
  };
  auto opt = [&](const std::string& value, const std::string& flag) -> std::optional<Rational> {
    if (value.empty()) return std::nullopt;
    return rational_arg(flag, value);
  };
  json p;
  if (a.kind == "pair" || a.kind == "chain") {
    if (a.points.empty()) throw UsageError("template build " + a.kind + " needs --points");
    auto pts = parse_points(a.points);
    p["template"] = template_to_json(a.kind == "pair" && pts.size() == 2 ? build_standard_pair(dims, pts[0], pts[1])
                                                                         : build_standard_chain(dims, pts));
  } else if (a.kind == "two-param") {
    p["template"] = template_to_json(build_two_param(dims, need(a.tau, "tau"), need(a.lambda, "lambda")));
  } else if (a.kind == "2x2") {
    p["template"] = template_to_json(build_2x2_three_param(need(a.tau, "tau"), need(a.lambda, "lambda"), opt(a.gamma, "gamma")));
  } else if (a.kind == "ksingular") {
    auto ratio = opt(a.ratio, "ratio");
    p["template"] = template_to_json(build_ksingular(dims, a.k, a.j, ratio ? *ratio : Rational(100)));
  } else if (a.kind == "n1-case2") {
    auto r = build_n1_case2(a.m, need(a.tau, "tau"), opt(a.lambda, "lambda"));
    p = {{"template", template_to_json(r.tmpl)}, {"tau_prime", exact(r.tau_prime)}, {"lambda", exact(r.lambda)},
         {"t0", exact(r.t0)}, {"top_at_t0", exact(r.top_at_t0)}, {"ratio", exact(r.ratio)},
         {"tau_achieved", exact(r.tau_achieved)}};
  } else if (a.kind == "n1-case1") {
    p["template"] = template_to_json(build_n1_case1(a.m, need(a.tau, "tau"), need(a.gamma, "gamma"), need(a.lambda, "lambda")));
  } else if (a.kind == "starkov") {
    double t0 = double_arg("t0", a.t0);
    auto s = build_starkov(dims, phi_table_arg(a.phi_table, t0, a.count), t0, a.count);
    json pts = json::array();
    for (const auto& q : s.points) pts.push_back({to_string(q.t), to_string(q.eps)});
    p = {{"template", template_to_json(s.tmpl)}, {"points", pts}};
  } else if (a.kind == "sing-avg") {
    p["template"] = template_to_json(build_sing_on_average(dims, need(a.p, "p"), need(a.eps, "eps")));
  } else {
    throw UsageError("unknown template kind '" + a.kind +
                     "' (expected pair, chain, two-param, 2x2, ksingular, n1-case2, n1-case1, starkov, sing-avg)");
  }
  return p;
}

json run_template(const TemplateArgs& a, bool& failed) {
  if (a.action == "build") return build_template(a);
  if (a.file.empty()) throw UsageError("template " + a.action + " needs a template file");
  Template t = read_template(a.file);
  if (a.action == "validate") {
    auto rep = validate_template(t);
    failed = !rep.ok;
    return report_to_json(rep);
  }
  if (a.action == "analyze") {
    json intervals = json::array();
    for (const auto& piece : linearity_intervals(t)) intervals.push_back(analysis_to_json(analyze_piece(t.dims, piece)));
    return {{"validation", report_to_json(validate_template(t))}, {"intervals", intervals}};
  }
  if (a.action == "rates") return rates_json(asymptotic_rates(t));
  if (a.action == "average") {
    if (a.from.empty() || a.to.empty()) throw UsageError("template average needs --from and --to");
    return {{"average", exact(contraction_average(t, rational_arg("from", a.from), rational_arg("to", a.to)))}};
  }
  if (a.action == "running") {
    if (a.T.empty()) throw UsageError("template running needs --T");
    return {{"running_average", exact(running_average(t, rational_arg("T", a.T)))}};
  }
  if (a.action == "phi" || a.action == "psi") {
    json rows = json::array();
    bool ok = true;
    if (a.action == "phi") {
      for (const auto& r : check_phi_inequality(t)) {
        ok = ok && r.ok;
        rows.push_back({{"a", to_string(r.a)}, {"b", r.b ? json(to_string(*r.b)) : json(nullptr)},
                        {"skipped", r.skipped}, {"lhs", to_string(r.lhs)}, {"rhs", to_string(r.rhs)},
                        {"gap", to_string(r.gap)}, {"case", to_string(r.equality_case)}, {"ok", r.ok}});
      }
    } else {
      for (const auto& r : check_psi_inequality(t)) {
        ok = ok && r.ok;
        rows.push_back({{"a", to_string(r.a)}, {"b", r.b ? json(to_string(*r.b)) : json(nullptr)},
                        {"skipped", r.skipped}, {"lhs", to_string(r.lhs)}, {"rhs", to_string(r.rhs)},
                        {"case1", r.case1}, {"case2", r.case2}, {"ok", r.ok}});
      }
    }
    failed = !ok;
    return {{"ok", ok}, {"intervals", rows}};
  }
  throw UsageError("unknown template action '" + a.action + "' (expected validate, analyze, rates, average, running, "
                   "phi, psi, build)");
}

// ---- lattice ----------------------------------------------------------------

struct LatticeArgs {
  std::string action, matrix = "zero", columns;
  int m = 1, n = 1;
  std::string t_min = "0", t_max, step;
};

void run_lattice(const LatticeArgs& a, const Settings& s, std::ostream& out, const std::string& command) {
  EnumOptions opts{s.enumeration_budget};
  if (a.action == "minima") {
    if (a.columns.empty()) throw UsageError("lattice minima needs --columns 'a,b;c,d' (one group per basis column)");
    std::vector<std::vector<Real>> cols;
    std::stringstream all(a.columns);
    std::string group;
    while (std::getline(all, group, ';')) {
      std::vector<Real> col;
      std::stringstream gs(group);
      std::string cell;
      while (std::getline(gs, cell, ',')) {
        Rational q = rational_arg("columns", cell);
        col.push_back(Real(q.get_num().get_str()) / Real(q.get_den().get_str()));
      }
      cols.push_back(col);
    }
    LatticeState L;
    try {
      L = LatticeState::from_columns(cols);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    auto r = successive_minima(L, opts);
    json coeffs = json::array();
    for (const auto& c : r.coefficients) {
      json row = json::array();
      for (const auto& z : c) row.push_back(z.get_str());
      coeffs.push_back(row);
    }
    out << envelope(command, {{"minima", r.minima}, {"log_minima", r.log_minima}, {"coefficients", coeffs},
                              {"witnesses", r.witnesses}, {"minkowski_residual", minkowski_check(r, L)},
                              {"nodes", r.nodes}})
               .dump(2)
        << "\n";
    return;
  }
  if (a.action != "profile" && a.action != "check")
    throw UsageError("unknown lattice action '" + a.action + "' (expected profile, check, minima)");
  const Dims dims{a.m, a.n};
  FlowMatrix F;
  try {
    F = named_flow_matrix(dims, a.matrix);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const double t_max = a.t_max.empty() ? s.grid_t_max : double_arg("t-max", a.t_max);
  const double step = a.step.empty() ? s.grid_step : double_arg("step", a.step);
  auto P = h_profile(F, uniform_grid(double_arg("t-min", a.t_min), t_max, step), opts);
  if (a.action == "check") {
    auto rep = approx_template_check(P, s.separation, s.slope_tolerance);
    json bands = json::array();
    for (const auto& b : rep.bands)
      bands.push_back({{"j", b.j}, {"t_from", b.t_from}, {"t_to", b.t_to}, {"band_width", b.band_width},
                       {"envelope_slopes_in_range", b.envelope_slopes_in_range}});
    out << envelope(command, {{"sorted", rep.sorted}, {"slopes_ok", rep.slopes_ok},
                              {"max_slope_excess", rep.max_slope_excess}, {"bands", bands}})
               .dump(2)
        << "\n";
    return;
  }
  if (s.format != "json") {
    out << "t";
    for (int i = 1; i <= dims.d(); ++i) out << ",h" << i;
    out << "\n";
    for (std::size_t k = 0; k < P.times.size(); ++k) {
      out << fixed(P.times[k]);
      for (double h : P.h[k]) out << "," << fixed(h);
      out << "\n";
    }
    return;
  }
  out << envelope(command, {{"times", P.times}, {"h", P.h}}).dump(2) << "\n";
}

// ---- game -------------------------------------------------------------------

struct GameArgs {
  std::string action, file, alice = "max-packing", bob = "random", mode = "hausdorff";
  int m = 1, n = 1, turns = 10;
  std::string beta = "1/4", rho0 = "1";
  std::uint64_t seed = 0;
};

json score_json(const ScoreReport& r) {
  return {{"running", r.running}, {"liminf_estimate", r.liminf_estimate}, {"limsup_estimate", r.limsup_estimate},
          {"value", r.value}};
}

json run_game(const GameArgs& a, const Settings& s) {
  GameTranscript t;
  if (a.action == "run") {
    GameConfig c{{a.m, a.n}, double_arg("beta", a.beta), double_arg("rho0", a.rho0), a.turns, GameMode::hausdorff};
    try {
      c.mode = parse_game_mode(a.mode);
      require_valid_dims(c.dims);
      validate_config(c);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    AliceStrategy alice;
    BobStrategy bob;
    try {
      alice = alice_by_name(a.alice);
      bob = bob_by_name(a.bob);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    t = play(c, alice, bob, a.seed);
  } else if (a.action == "check") {
    if (a.file.empty()) throw UsageError("game check needs a transcript file");
    t = transcript_from_json(read_json_file(a.file));
    validate_transcript(t);
  } else {
    throw UsageError("unknown game action '" + a.action + "' (expected run, check)");
  }
  auto o = outcome(t);
  auto trace = lattice_trace(t, s.trace_tolerance);
  return {{"transcript", transcript_to_json(t)},
          {"score", score_json(score(t))},
          {"score_formula", "running mean of log #A_i / (-log beta); liminf/limsup over the tail half"},
          {"outcome", {{"x", o.x}, {"tail_bound", o.tail_bound}}},
          {"lattice_trace", {{"gamma", trace.gamma}, {"max_relative_discrepancy", trace.max_relative_discrepancy}}}};
}

// ---- curves -----------------------------------------------------------------

void run_curves(const std::string& name, int samples, const Settings& s, std::ostream& out, const std::string& command) {
  if (name != "sing12") throw UsageError("unknown curve '" + name + "' (expected sing12)");
  if (samples < 3) throw UsageError("--samples must be at least 3");
  auto rows = sing12_curve(samples);
  if (s.format == "json") {
    json r = json::array();
    for (const auto& row : rows) r.push_back({{"tau", row.tau}, {"hd", row.hd}, {"pd", row.pd}});
    out << envelope(command, {{"rows", r},
                              {"hd_formula", "4/3 - (4/3)sqrt(tau - 6tau^3 + 4tau^4) - 2tau + (8/3)tau^2 if tau <= "
                                             "(3sqrt2-2)/14, else (1-2tau)/(1+tau)"},
                              {"pd_formula", "(4 - 8tau)/3 if tau <= 1/8, else 1"}})
               .dump(2)
        << "\n";
    return;
  }
  out << "tau,hd,pd\n";
  for (const auto& row : rows) out << fixed(row.tau) << "," << fixed(row.hd) << "," << fixed(row.pd) << "\n";
}

std::string join(const std::vector<std::string>& args) {
  std::string s = "pgn";
  for (const auto& a : args) s += " " + a;
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Templates, dimension formulas, lattice minima and games for singular-matrix dimension estimates", "pgn"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "key = value file setting the options below");
  app.require_subcommand(1);
  app.fallthrough();

  Settings s;
  app.add_option("--format", s.format, "json or csv (default csv for lattice profile and curves, json otherwise)")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--enumeration-budget", s.enumeration_budget, "node budget per successive-minima call");
  app.add_option("--grid-t-max", s.grid_t_max, "default t_max for lattice profiles");
  app.add_option("--grid-step", s.grid_step, "default grid step for lattice profiles");
  app.add_option("--separation", s.separation, "gap threshold for approximate-template bands");
  app.add_option("--slope-tolerance", s.slope_tolerance, "tolerance for lattice slope bounds");
  app.add_option("--trace-tolerance", s.trace_tolerance, "relative tolerance for the game lattice recursion");

  FormulaArgs fa;
  auto* formula = app.add_subcommand("formula", "closed-form dimension formulas");
  formula->add_option("name", fa.name, "delta, dani, packing, fk, hd12, pd12, fx, avg, omega-approx, hsmall")->required();
  formula->add_option("--m", fa.m);
  formula->add_option("--n", fa.n);
  formula->add_option("--k", fa.k);
  formula->add_option("--tau", fa.tau);
  formula->add_option("--omega", fa.omega, "a rational or inf");
  formula->add_option("--p", fa.p);
  formula->add_option("--x", fa.x);
  formula->add_option("--y", fa.y);

  TemplateArgs ta;
  auto* tmpl = app.add_subcommand("template", "validate, analyze and build templates");
  tmpl->add_option("action", ta.action, "validate, analyze, rates, average, running, phi, psi, build")->required();
  tmpl->add_option("target", ta.file, "template JSON file, or the kind for build");
  tmpl->add_option("--m", ta.m);
  tmpl->add_option("--n", ta.n);
  tmpl->add_option("--k", ta.k);
  tmpl->add_option("--j", ta.j);
  tmpl->add_option("--tau", ta.tau);
  tmpl->add_option("--lambda", ta.lambda);
  tmpl->add_option("--gamma", ta.gamma);
  tmpl->add_option("--ratio", ta.ratio);
  tmpl->add_option("--p", ta.p);
  tmpl->add_option("--eps", ta.eps);
  tmpl->add_option("--points", ta.points, "t,eps;t,eps;...");
  tmpl->add_option("--from", ta.from);
  tmpl->add_option("--to", ta.to);
  tmpl->add_option("--T", ta.T);
  tmpl->add_option("--t0", ta.t0);
  tmpl->add_option("--count", ta.count);
  tmpl->add_option("--phi-table", ta.phi_table, "CSV file of t,phi rows");

  LatticeArgs la;
  auto* lat = app.add_subcommand("lattice", "successive minima of g_t u_A Z^d");
  lat->add_option("action", la.action, "profile, check, minima")->required();
  lat->add_option("--m", la.m);
  lat->add_option("--n", la.n);
  lat->add_option("--matrix", la.matrix, "zero, golden, rational:p/q, or rows 'a,b;c,d'");
  lat->add_option("--columns", la.columns, "basis columns 'a,b;c,d' for minima");
  lat->add_option("--t-min", la.t_min);
  lat->add_option("--t-max", la.t_max);
  lat->add_option("--step", la.step);

  GameArgs ga;
  auto* game = app.add_subcommand("game", "play or check a Hausdorff/packing game");
  game->add_option("action", ga.action, "run or check")->required();
  game->add_option("file", ga.file, "transcript JSON for check");
  game->add_option("--m", ga.m);
  game->add_option("--n", ga.n);
  game->add_option("--beta", ga.beta);
  game->add_option("--rho0", ga.rho0);
  game->add_option("--turns", ga.turns);
  game->add_option("--alice", ga.alice, "singleton or max-packing");
  game->add_option("--bob", ga.bob, "random or first");
  game->add_option("--mode", ga.mode, "hausdorff or packing");
  game->add_option("--seed", ga.seed);

  std::string curve;
  int samples = 3;
  auto* curves = app.add_subcommand("curves", "tabulate dimension curves");
  curves->add_option("name", curve, "sing12")->required();
  curves->add_option("--samples", samples);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  const std::string command = join(args);
  try {
    if (s.format == "csv" && !curves->parsed() && !(lat->parsed() && la.action == "profile"))
      throw UsageError("csv output is only available for lattice profile and curves");
    if (formula->parsed()) {
      out << envelope(command, run_formula(fa)).dump(2) << "\n";
    } else if (tmpl->parsed()) {
      if (ta.action == "build") ta.kind = ta.file;
      bool failed = false;
      out << envelope(command, run_template(ta, failed)).dump(2) << "\n";
      if (failed) return 1;
    } else if (lat->parsed()) {
      run_lattice(la, s, out, command);
    } else if (game->parsed()) {
      out << envelope(command, run_game(ga, s)).dump(2) << "\n";
    } else if (curves->parsed()) {
      run_curves(curve, samples, s, out, command);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const IllegalMoveError& e) {
    err << "illegal move (" << e.rule() << "): " << e.what() << "\n";
    return 1;
  } catch (const InfeasibleSpecError& e) {
    err << "infeasible (" << e.inequality() << "): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace pgn::cli
