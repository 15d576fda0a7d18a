#include "pgn/template_io.hpp"

namespace pgn {

using nlohmann::json;

namespace {

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw TemplateStructureError("rationals must be encoded as \"p/q\" strings or integers");
}

}  // namespace

json rvec_to_json(const RVec& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

RVec rvec_from_json(const json& j) {
  if (!j.is_array()) throw TemplateStructureError("expected an array of rationals");
  RVec out;
  for (const auto& x : j) out.push_back(rational_from_json(x));
  return out;
}

json template_to_json(const Template& t) {
  json j;
  j["m"] = t.dims.m;
  j["n"] = t.dims.n;
  j["breakpoints"] = rvec_to_json(t.times);
  json vals = json::array();
  for (const auto& v : t.values) vals.push_back(rvec_to_json(v));
  j["values"] = vals;
  json tail;
  switch (t.tail.kind) {
    case TailKind::finite:
      tail["kind"] = "finite";
      break;
    case TailKind::constant_slope:
      tail["kind"] = "constant";
      tail["slope"] = rvec_to_json(t.tail.slope);
      break;
    case TailKind::equivariant:
      tail["kind"] = "equivariant";
      tail["lambda"] = to_string(t.tail.lambda);
      tail["anchor"] = t.tail.anchor;
      break;
  }
  j["tail"] = tail;
  return j;
}

Template template_from_json(const json& j) {
  try {
    Template t;
    t.dims.m = j.at("m").get<int>();
    t.dims.n = j.at("n").get<int>();
    t.times = rvec_from_json(j.at("breakpoints"));
    for (const auto& v : j.at("values")) t.values.push_back(rvec_from_json(v));
    if (j.contains("tail")) {
      const auto& tail = j.at("tail");
      std::string kind = tail.at("kind").get<std::string>();
      if (kind == "finite") {
        t.tail.kind = TailKind::finite;
      } else if (kind == "constant") {
        t.tail.kind = TailKind::constant_slope;
        t.tail.slope = rvec_from_json(tail.at("slope"));
      } else if (kind == "equivariant") {
        t.tail.kind = TailKind::equivariant;
        t.tail.lambda = rational_from_json(tail.at("lambda"));
        t.tail.anchor = tail.value("anchor", std::size_t{0});
      } else {
        throw TemplateStructureError("unknown tail kind '" + kind + "'");
      }
    }
    require_well_formed(t);
    return t;
  } catch (const json::exception& e) {
    throw TemplateStructureError(std::string("malformed template JSON: ") + e.what());
  }
}

json report_to_json(const ValidationReport& rep) {
  json j;
  j["ok"] = rep.ok;
  json vs = json::array();
  for (const auto& v : rep.violations)
    vs.push_back({{"kind", to_string(v.kind)},
                  {"time", to_string(v.time)},
                  {"component", v.component},
                  {"message", v.message}});
  j["violations"] = vs;
  return j;
}

json analysis_to_json(const IntervalAnalysis& a) {
  json j;
  j["a"] = to_string(a.a);
  j["b"] = a.b ? json(to_string(*a.b)) : json(nullptr);
  j["slope"] = rvec_to_json(a.slope);
  json blocks = json::array();
  for (auto [p, q] : a.blocks) blocks.push_back({p, q});
  j["blocks"] = blocks;
  j["S_plus"] = a.S_plus;
  j["S_minus"] = a.S_minus;
  j["M_plus"] = a.M_plus;
  j["M_minus"] = a.M_minus;
  j["delta"] = a.delta;
  return j;
}

}  // namespace pgn
