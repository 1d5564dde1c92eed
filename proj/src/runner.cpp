#include <chrono>

#include "cdual/app.hpp"
#include "cdual/errors.hpp"

namespace cdual {

namespace {

std::string category(const std::exception& e) {
  if (dynamic_cast<const StructuralError*>(&e)) return "structural";
  if (dynamic_cast<const RangeError*>(&e)) return "range";
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  if (dynamic_cast<const ConfigurationError*>(&e)) return "configuration";
  if (dynamic_cast<const ClassificationError*>(&e)) return "classification";
  if (dynamic_cast<const NotLeftInvertibleError*>(&e)) return "not-left-invertible";
  if (dynamic_cast<const ComparisonError*>(&e)) return "comparison";
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  return "internal";
}

VertexIndex resolve_vertex(const DirectedTree& t, const json& v) {
  if (v.is_string()) return t.at(v.get<std::string>());
  std::vector<int> path;
  for (const auto& x : v) path.push_back(x.get<int>());
  return t.by_path(path);
}

Table1Row parse_row(const std::string& s) {
  if (s == "isometry") return Table1Row::Isometry;
  if (s == "kernel") return Table1Row::Kernel;
  if (s == "quasi_brownian") return Table1Row::QuasiBrownian;
  return Table1Row::AdjacencyPattern;
}

class Suite {
 public:
  explicit Suite(const RunSpec& spec) : spec_(spec) {}

  void run(const Command& c, CommandResult& out, Report& rep) {
    const auto& p = c.params;
    const double tol = spec_.tol;
    const std::string& n = c.name;
    if (n == "demo") {
      DemoOptions o;
      o.tol = tol;
      if (p.contains("nmax")) o.nmax = p["nmax"].get<int>();
      else o.nmax = spec_.nmax;
      if (p.contains("depth")) o.depth = p["depth"].get<int>();
      out.result = demo_result(p["demo"].get<std::string>(), o);
      out.status = out.result["matches"].get<bool>() ? "ok" : "failed";
      if (out.status == "failed") rep.exit_code = 1;
      return;
    }
    const auto& S = shift();
    const auto& t = S.tree();
    if (n == "materialize") {
      json sizes = json::array();
      for (int g = 0; g <= t.materialized_depth(); ++g) sizes.push_back(t.generation(g).size());
      out.result = {{"vertices", t.size()},
                    {"materialized_depth", t.materialized_depth()},
                    {"root", t.id(t.root())},
                    {"generation_sizes", sizes}};
    } else if (n == "classify-tree") {
      out.result = to_json(classify_tree(t));
    } else if (n == "check-2iso") {
      auto v = is_two_isometry(S, tol);
      two_iso_failed_ = !v.holds;
      out.result = to_json(v);
      out.status = v.holds ? "ok" : "failed";
    } else if (n == "check-kernel") {
      int k = p.value("k", 0);
      auto v = satisfies_kernel_condition(S, k, tol);
      out.result = to_json(v);
      out.result["k"] = k;
      out.status = v.holds ? "ok" : "failed";
    } else if (n == "cauchy-dual") {
      auto D = cauchy_dual(S);
      json w = json::object();
      for (VertexIndex v = 1; v < t.size(); ++v) w[t.id(v)] = D.weight(v);
      out.result = {{"name", D.name()}, {"weights", w}};
    } else if (n == "moments") {
      VertexIndex u = p.contains("vertex") ? resolve_vertex(t, p["vertex"]) : t.root();
      bool dual = p.value("dual", true);
      int nmax = p.contains("nmax")
                     ? p["nmax"].get<int>()
                     : std::min(spec_.nmax.value_or(12),
                                t.materialized_depth() - t.vertex(u).depth - (dual ? 1 : 0));
      auto seq = d_sequence(S, u, nmax, dual);
      out.result = to_json(seq);
      out.result["vertex"] = t.id(u);
      out.result["dual"] = dual;
      if (seq.values.size() >= 3) out.result["stieltjes"] = to_json(stieltjes_test(seq, tol));
      if (seq.values.size() >= 2) out.result["hausdorff"] = to_json(hausdorff_test(seq, tol));
      rep.csv_sequence = seq;
    } else if (n == "classify-adjacency") {
      out.result = to_json(classify_adjacency(S.tree_ptr(), tol));
    } else if (n == "invariants") {
      out.result = to_json(shift_invariants(S, tol));
    } else if (n == "equivalent") {
      const auto& o = p["other"];
      auto other = build_shift(parse_weights(o["weights"], "/other/weights"),
                               parse_tree(o["tree"], "/other/tree"));
      auto a = shift_invariants(S, tol), b = shift_invariants(other, tol);
      bool eq = are_unitarily_equivalent(a, b, tol);
      out.result = {{"equivalent", eq}, {"a", to_json(a)}, {"b", to_json(b)}};
    } else if (n == "dual-subnormality") {
      SubnormalityOptions o;
      o.tol = tol;
      o.nmax = p.contains("nmax") ? p["nmax"].get<int>() : spec_.nmax.value_or(12);
      o.require_two_isometry = p.value("require_two_isometry", true);
      if (p.contains("witnesses"))
        for (const auto& w : p["witnesses"]) o.witnesses.push_back(t.id(resolve_vertex(t, w)));
      if (o.require_two_isometry) {
        auto two = two_iso_failed_ ? std::optional<PropertyVerdict>{} : is_two_isometry(S, tol);
        if (two_iso_failed_ || !two->holds) {
          out.status = "skipped";
          out.result = {{"reason", "precondition failed: not a 2-isometry"}};
          return;
        }
      }
      out.result = to_json(dual_subnormality(S, o));
    } else if (n == "verify-table1") {
      auto row = parse_row(p["row"].get<std::string>());
      int nmax = p.value("nmax", 10);
      Table1Report r;
      if (p.contains("sigma")) {
        int N = p.value("depth", 64);
        r = verify_table1(build_brownian_shift(p["sigma"].get<double>(), N), row, nmax, tol);
      } else if (p.contains("depth")) {
        auto ts = *spec_.tree;
        ts.depth = p["depth"].get<int>();
        r = verify_table1(build_shift(*spec_.weights, ts), row, nmax, tol);
      } else {
        r = verify_table1(S, row, nmax, tol);
      }
      out.result = to_json(r);
      out.status = r.within(tol) ? "ok" : "failed";
    }
  }

 private:
  const WeightedShift& shift() {
    if (!shift_) {
      if (!spec_.tree || !spec_.weights) throw ConfigurationError("command needs tree and weights");
      shift_.emplace(build_shift(*spec_.weights, *spec_.tree));
    }
    return *shift_;
  }

  const RunSpec& spec_;
  std::optional<WeightedShift> shift_;
  bool two_iso_failed_ = false;
};

}  // namespace

Report run_suite(const RunSpec& spec) {
  Report rep;
  rep.input_digest = spec.digest;
  Suite suite(spec);
  for (const auto& c : spec.commands) {
    CommandResult cr;
    cr.name = c.name;
    cr.status = "ok";
    auto t0 = std::chrono::steady_clock::now();
    try {
      suite.run(c, cr, rep);
    } catch (const std::exception& e) {
      cr.status = "error";
      cr.result = {{"error", e.what()}, {"category", category(e)}};
    }
    cr.wall_clock_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rep.commands.push_back(std::move(cr));
  }
  return rep;
}

}  // namespace cdual
