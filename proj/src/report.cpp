#include <cmath>
#include <iomanip>
#include <ostream>

#include "cdual/app.hpp"

namespace cdual {

namespace {

// JSON has no infinity; keep the value readable.
json num(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
}

}  // namespace

json to_json(const PropertyVerdict& v) {
  json j{{"holds", v.holds}, {"verified_depth", v.verified_depth}, {"tolerance", v.tolerance}};
  if (v.witness) j["witness"] = {{"vertex", v.witness->vertex}, {"residual", num(v.witness->residual)}};
  if (v.min_vertex_norm) j["min_vertex_norm"] = num(*v.min_vertex_norm);
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

json to_json(const DiscreteMeasure& m) {
  json atoms = json::array();
  for (const auto& a : m.atoms()) atoms.push_back({{"t", a.location}, {"mass", a.mass}});
  return {{"atoms", atoms}, {"total_mass", m.total_mass()}};
}

json to_json(const MomentVerdict& v) {
  json j{{"holds", v.holds},
         {"min_value", num(v.min_value)},
         {"checked_order", v.checked_order},
         {"threshold", v.threshold}};
  if (v.failing_order) j["failing_order"] = *v.failing_order;
  if (v.certificate) j["certificate"] = to_json(*v.certificate);
  return j;
}

json to_json(const MomentSequence& s) { return {{"values", s.values}, {"source", s.source}}; }

json to_json(const SubnormalityReport& r) {
  json ev = json::array();
  for (const auto& e : r.evidence) {
    json x{{"vertex", e.vertex}, {"sequence", e.sequence.values}, {"stieltjes", to_json(e.stieltjes)}};
    if (e.shifted_measure) x["shifted_measure"] = to_json(*e.shifted_measure);
    if (e.extension) {
      json b{{"admissible", e.extension->admissible}, {"integral", num(e.extension->integral)}};
      if (e.extension->nu) b["nu"] = to_json(*e.extension->nu);
      x["backward_extension"] = b;
      x["hankel_singular"] = e.hankel_singular;
    }
    ev.push_back(x);
  }
  json j{{"outcome", std::string(to_string(r.outcome))},
         {"decision_path", r.path},
         {"citation", r.citation},
         {"summary", r.summary},
         {"nmax", r.nmax},
         {"evidence", ev},
         {"notes", r.notes}};
  if (r.perturbation_k) j["perturbation_k"] = *r.perturbation_k;
  if (r.closed_form_deviation) j["closed_form_deviation"] = *r.closed_form_deviation;
  return j;
}

json to_json(const TreeReport& r) {
  json gens = json::array();
  for (const auto& m : r.degree_multiset_per_generation) {
    json g = json::object();
    for (const auto& [d, c] : m) g[std::to_string(d)] = c;
    gens.push_back(g);
  }
  json qb{{"holds", r.quasi_brownian.holds},
          {"valency", r.quasi_brownian.valency},
          {"verified_depth", r.quasi_brownian.verified_depth}};
  if (r.quasi_brownian.witness) qb["witness"] = *r.quasi_brownian.witness;
  if (!r.quasi_brownian.reason.empty()) qb["reason"] = r.quasi_brownian.reason;
  return {{"leafless_to_depth", r.leafless_to_depth},
          {"locally_finite", r.locally_finite},
          {"materialized_depth", r.materialized_depth},
          {"degree_multiset_per_generation", gens},
          {"quasi_brownian", qb},
          {"scope", r.scope}};
}

json to_json(const AdjacencyReport& r) {
  return {{"two_isometry", to_json(r.two_isometry)},
          {"kernel_condition", to_json(r.kernel_condition)},
          {"quasi_brownian_isometry", to_json(r.quasi_brownian_isometry)},
          {"brownian_isometry", to_json(r.brownian_isometry)},
          {"isometry", to_json(r.isometry)}};
}

json to_json(const ShiftInvariants& inv) {
  return {{"root_norm", inv.root_norm},
          {"branching", inv.branching},
          {"depth", inv.depth},
          {"truncated", inv.truncated}};
}

json to_json(const Table1Report& r) {
  return {{"row", std::string(to_string(r.row))},
          {"nmax", r.nmax},
          {"max_deviation", r.max_deviation},
          {"deviation_per_n", r.deviation_per_n},
          {"class_checks", r.class_checks}};
}

json Report::to_json(bool with_clock) const {
  json cmds = json::array();
  for (const auto& c : commands) {
    json j{{"name", c.name}, {"status", c.status}, {"result", c.result}};
    if (with_clock) j["wall_clock_ms"] = c.wall_clock_ms;
    cmds.push_back(j);
  }
  return {{"tool", "cdual"},
          {"version", kToolVersion},
          {"input_digest", input_digest},
          {"commands", cmds},
          {"exit_code", exit_code}};
}

void write_csv(std::ostream& os, const MomentSequence& seq) {
  os << "n,value\n" << std::setprecision(17);
  for (std::size_t n = 0; n < seq.values.size(); ++n) os << n << ',' << seq.values[n] << '\n';
}

}  // namespace cdual
