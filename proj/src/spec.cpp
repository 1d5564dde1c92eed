#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <set>

#include "cdual/app.hpp"
#include "cdual/errors.hpp"

namespace cdual {

namespace {

std::string child(const std::string& path, const std::string& key) {
  std::string esc;
  for (char c : key) {
    if (c == '~') esc += "~0";
    else if (c == '/') esc += "~1";
    else esc += c;
  }
  return path + "/" + esc;
}

std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError("expected an object", path);
}

void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  std::set<std::string> ok(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw ParseError("unknown field", child(path, it.key()));
}

const json* find(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

int get_int(const json& j, const char* key, const std::string& path, std::optional<int> def = {}) {
  const json* v = find(j, key);
  if (!v) {
    if (def) return *def;
    throw ParseError("missing required field", child(path, key));
  }
  if (!v->is_number_integer()) throw ParseError("expected an integer", child(path, key));
  auto x = v->get<long long>();
  if (x < -1000000 || x > 1000000) throw ParseError("integer out of range", child(path, key));
  return static_cast<int>(x);
}

double get_double(const json& j, const char* key, const std::string& path,
                  std::optional<double> def = {}) {
  const json* v = find(j, key);
  if (!v) {
    if (def) return *def;
    throw ParseError("missing required field", child(path, key));
  }
  if (!v->is_number()) throw ParseError("expected a number", child(path, key));
  double x = v->get<double>();
  if (!std::isfinite(x)) throw ParseError("expected a finite number", child(path, key));
  return x;
}

std::string get_string(const json& j, const char* key, const std::string& path,
                       std::optional<std::string> def = {}) {
  const json* v = find(j, key);
  if (!v) {
    if (def) return *def;
    throw ParseError("missing required field", child(path, key));
  }
  if (!v->is_string()) throw ParseError("expected a string", child(path, key));
  return v->get<std::string>();
}

bool get_bool(const json& j, const char* key, const std::string& path, bool def) {
  const json* v = find(j, key);
  if (!v) return def;
  if (!v->is_boolean()) throw ParseError("expected a boolean", child(path, key));
  return v->get<bool>();
}

void check_vertex(const json& v, const std::string& path) {
  if (v.is_string()) return;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!v[i].is_number_integer() || v[i].get<long long>() < 0)
        throw ParseError("child index must be a nonnegative integer", child(path, i));
    return;
  }
  throw ParseError("vertex must be an id string or a child-index array", path);
}

const std::set<std::string> kRows{"isometry", "kernel", "quasi_brownian", "adjacency_pattern"};

void parse_command_params(const std::string& name, const json& c, const std::string& path) {
  if (name == "materialize" || name == "classify-tree" || name == "check-2iso" ||
      name == "cauchy-dual" || name == "classify-adjacency" || name == "invariants") {
    allow_keys(c, path, {"name"});
  } else if (name == "check-kernel") {
    allow_keys(c, path, {"name", "k"});
    if (get_int(c, "k", path, 0) < 0) throw ParseError("k must be >= 0", child(path, "k"));
  } else if (name == "moments") {
    allow_keys(c, path, {"name", "vertex", "nmax", "dual"});
    if (auto* v = find(c, "vertex")) check_vertex(*v, child(path, "vertex"));
    if (find(c, "nmax") && get_int(c, "nmax", path) < 0)
      throw ParseError("nmax must be >= 0", child(path, "nmax"));
    get_bool(c, "dual", path, true);
  } else if (name == "equivalent") {
    allow_keys(c, path, {"name", "other"});
    const json* o = find(c, "other");
    if (!o) throw ParseError("missing required field", child(path, "other"));
    auto op = child(path, "other");
    require_object(*o, op);
    allow_keys(*o, op, {"tree", "weights"});
    if (!find(*o, "tree")) throw ParseError("missing required field", child(op, "tree"));
    if (!find(*o, "weights")) throw ParseError("missing required field", child(op, "weights"));
    auto t = parse_tree((*o)["tree"], child(op, "tree"));
    auto w = parse_weights((*o)["weights"], child(op, "weights"));
    try {
      build_shift(w, t);
    } catch (const DomainError& e) {
      throw ConfigurationError(e.what());
    }
  } else if (name == "dual-subnormality") {
    allow_keys(c, path, {"name", "nmax", "witnesses", "require_two_isometry"});
    if (find(c, "nmax") && get_int(c, "nmax", path) < 2)
      throw ParseError("nmax must be >= 2", child(path, "nmax"));
    if (auto* w = find(c, "witnesses")) {
      if (!w->is_array()) throw ParseError("expected an array", child(path, "witnesses"));
      for (std::size_t i = 0; i < w->size(); ++i)
        check_vertex((*w)[i], child(child(path, "witnesses"), i));
    }
    get_bool(c, "require_two_isometry", path, true);
  } else if (name == "verify-table1") {
    allow_keys(c, path, {"name", "row", "nmax", "depth", "sigma"});
    auto row = get_string(c, "row", path);
    if (!kRows.count(row)) throw ParseError("unknown Table 1 row '" + row + "'", child(path, "row"));
    if (find(c, "nmax") && get_int(c, "nmax", path) < 1)
      throw ParseError("nmax must be >= 1", child(path, "nmax"));
    if (find(c, "depth") && get_int(c, "depth", path) < 2)
      throw ParseError("depth must be >= 2", child(path, "depth"));
    if (find(c, "sigma") && !(get_double(c, "sigma", path) > 0.0))
      throw ParseError("sigma must be > 0", child(path, "sigma"));
  } else if (name == "demo") {
    allow_keys(c, path, {"name", "demo", "nmax", "depth"});
    auto d = get_string(c, "demo", path);
    const auto& cat = demo_catalog();
    bool known = std::find(cat.begin(), cat.end(), d) != cat.end();
    if (!known && d.rfind("nbnkcsub-", 0) == 0 && d.size() > 9 && d.size() < 14) {
      auto tail = d.substr(9);
      known = std::all_of(tail.begin(), tail.end(), [](char ch) { return ch >= '0' && ch <= '9'; }) &&
              std::stoi(tail) >= 2;
    }
    if (!known) throw ParseError("unknown demo '" + d + "'", child(path, "demo"));
    get_int(c, "nmax", path, 12);
    get_int(c, "depth", path, 0);
  } else {
    throw ParseError("unknown command '" + name + "'", child(path, "name"));
  }
}

}  // namespace

std::string fnv1a_digest(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

TreeSpec parse_tree(const json& j, const std::string& path) {
  require_object(j, path);
  auto kind = get_string(j, "kind", path);
  TreeSpec s;
  if (kind == "path") {
    allow_keys(j, path, {"kind", "depth"});
    s = TreeSpec::path(0);
  } else if (kind == "t_eta_kappa") {
    allow_keys(j, path, {"kind", "depth", "eta", "kappa"});
    int eta = get_int(j, "eta", path);
    int kappa = get_int(j, "kappa", path, 0);
    if (eta < 2) throw ParseError("eta must be >= 2", child(path, "eta"));
    if (kappa != 0) throw ParseError("only kappa = 0 is supported", child(path, "kappa"));
    s = TreeSpec::t_eta_kappa(eta, kappa, 0);
  } else if (kind == "quasi_brownian") {
    allow_keys(j, path, {"kind", "depth", "valency"});
    int l = get_int(j, "valency", path);
    if (l < 2) throw ParseError("valency must be >= 2", child(path, "valency"));
    s = TreeSpec::quasi_brownian(l, 0);
  } else if (kind == "explicit") {
    allow_keys(j, path, {"kind", "depth", "edges"});
    const json* e = find(j, "edges");
    if (!e) throw ParseError("missing required field", child(path, "edges"));
    if (!e->is_array()) throw ParseError("expected an array of [parent, child] pairs", child(path, "edges"));
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t i = 0; i < e->size(); ++i) {
      const auto& p = (*e)[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
        throw ParseError("edge must be a [parent, child] pair of strings",
                         child(child(path, "edges"), i));
      edges.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
    s = TreeSpec::explicit_edges(std::move(edges), 0);
  } else if (kind == "generation_rule") {
    allow_keys(j, path, {"kind", "depth", "start", "rules", "preset", "l", "variant"});
    if (find(j, "preset")) {
      auto preset = get_string(j, "preset", path);
      if (find(j, "start") || find(j, "rules"))
        throw ParseError("preset and explicit rules are exclusive", child(path, "preset"));
      if (preset == "nbnkcsub" || preset == "przadj") {
        if (find(j, "variant")) throw ParseError("unknown field", child(path, "variant"));
        int l = get_int(j, "l", path);
        if (l < 2) throw ParseError("l must be >= 2", child(path, "l"));
        s = preset == "nbnkcsub" ? nbnkcsub_tree(l, 0) : przadj_tree(l, 0);
      } else if (preset == "two_plus_three") {
        if (find(j, "l")) throw ParseError("unknown field", child(path, "l"));
        int v = get_int(j, "variant", path);
        if (v != 1 && v != 2) throw ParseError("variant must be 1 or 2", child(path, "variant"));
        s = two_plus_three_tree(v, 0);
      } else {
        throw ParseError("unknown preset '" + preset + "'", child(path, "preset"));
      }
    } else {
      if (find(j, "l")) throw ParseError("unknown field", child(path, "l"));
      if (find(j, "variant")) throw ParseError("unknown field", child(path, "variant"));
      GenerationRule r;
      r.start = get_string(j, "start", path);
      const json* rules = find(j, "rules");
      if (!rules) throw ParseError("missing required field", child(path, "rules"));
      auto rp = child(path, "rules");
      require_object(*rules, rp);
      for (auto it = rules->begin(); it != rules->end(); ++it) {
        auto lp = child(rp, it.key());
        if (!it->is_array()) throw ParseError("expected an array of labels", lp);
        std::vector<std::string> kids;
        for (std::size_t i = 0; i < it->size(); ++i) {
          if (!(*it)[i].is_string()) throw ParseError("expected a label string", child(lp, i));
          kids.push_back((*it)[i].get<std::string>());
        }
        r.children[it.key()] = std::move(kids);
      }
      s = TreeSpec::generation_rule(std::move(r), 0);
    }
  } else {
    throw ParseError("unknown tree kind '" + kind + "'", child(path, "kind"));
  }
  s.depth = get_int(j, "depth", path);
  if (s.depth < 0) throw ParseError("depth must be >= 0", child(path, "depth"));
  if (s.depth > 4096) throw ParseError("depth too large", child(path, "depth"));
  return s;
}

WeightSpec parse_weights(const json& j, const std::string& path) {
  require_object(j, path);
  auto kind = get_string(j, "kind", path);
  if (kind == "adjacency" || kind == "dirichlet" || kind == "bergman_dual" || kind == "treiso") {
    allow_keys(j, path, {"kind"});
    if (kind == "adjacency") return WeightSpec::adjacency();
    if (kind == "dirichlet") return WeightSpec::dirichlet();
    if (kind == "bergman_dual") return WeightSpec::bergman_dual();
    return WeightSpec::treiso();
  }
  if (kind == "explicit") {
    allow_keys(j, path, {"kind", "weights"});
    const json* w = find(j, "weights");
    if (!w) throw ParseError("missing required field", child(path, "weights"));
    auto wp = child(path, "weights");
    require_object(*w, wp);
    std::map<std::string, double> m;
    for (auto it = w->begin(); it != w->end(); ++it) {
      if (!it->is_number()) throw ParseError("expected a number", child(wp, it.key()));
      double x = it->get<double>();
      if (!std::isfinite(x) || x < 0.0)
        throw ParseError("weights must be finite and >= 0", child(wp, it.key()));
      m[it.key()] = x;
    }
    return WeightSpec::explicit_map(std::move(m));
  }
  if (kind == "kernel_condition") {
    allow_keys(j, path, {"kind", "x", "proportions"});
    double x = get_double(j, "x", path);
    if (!(x >= 1.0)) throw ParseError("x must be >= 1", child(path, "x"));
    std::vector<double> p;
    if (const json* pr = find(j, "proportions")) {
      auto pp = child(path, "proportions");
      if (!pr->is_array() || pr->empty()) throw ParseError("expected a nonempty array", pp);
      for (std::size_t i = 0; i < pr->size(); ++i) {
        if (!(*pr)[i].is_number() || !((*pr)[i].get<double>() > 0.0))
          throw ParseError("proportions must be positive numbers", child(pp, i));
        p.push_back((*pr)[i].get<double>());
      }
    }
    return WeightSpec::kernel_condition(x, std::move(p));
  }
  if (kind == "glowny") {
    allow_keys(j, path, {"kind", "y1", "y2"});
    double y1 = get_double(j, "y1", path, 1.1), y2 = get_double(j, "y2", path, 1.3);
    const double r2 = std::sqrt(2.0);
    if (!(y1 > 1.0 && y1 < r2)) throw ParseError("y1 must lie in (1, sqrt 2)", child(path, "y1"));
    if (!(y2 > 1.0 && y2 < r2)) throw ParseError("y2 must lie in (1, sqrt 2)", child(path, "y2"));
    if (y1 == y2) throw ParseError("y1 and y2 must differ", child(path, "y2"));
    return WeightSpec::glowny(y1, y2);
  }
  throw ParseError("unknown weights kind '" + kind + "'", child(path, "kind"));
}

RunSpec parse_spec(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), "");
  }
  require_object(j, "");
  allow_keys(j, "", {"tree", "weights", "commands", "tolerances", "output"});
  RunSpec s;
  s.digest = fnv1a_digest(text);
  if (const json* t = find(j, "tree")) s.tree = parse_tree(*t, "/tree");
  if (const json* w = find(j, "weights")) s.weights = parse_weights(*w, "/weights");
  if (const json* tl = find(j, "tolerances")) {
    require_object(*tl, "/tolerances");
    allow_keys(*tl, "/tolerances", {"tol", "nmax"});
    s.tol = get_double(*tl, "tol", "/tolerances", kDefaultTol);
    if (!(s.tol > 0.0)) throw ParseError("tol must be > 0", "/tolerances/tol");
    if (find(*tl, "nmax")) {
      s.nmax = get_int(*tl, "nmax", "/tolerances");
      if (*s.nmax < 2) throw ParseError("nmax must be >= 2", "/tolerances/nmax");
    }
  }
  if (const json* o = find(j, "output")) {
    require_object(*o, "/output");
    allow_keys(*o, "/output", {"json", "csv", "verbosity"});
    if (find(*o, "json")) s.output.json_path = get_string(*o, "json", "/output");
    if (find(*o, "csv")) s.output.csv_path = get_string(*o, "csv", "/output");
    s.output.verbosity = get_string(*o, "verbosity", "/output", "normal");
    if (s.output.verbosity != "quiet" && s.output.verbosity != "normal" &&
        s.output.verbosity != "verbose")
      throw ParseError("verbosity must be quiet, normal or verbose", "/output/verbosity");
  }
  if (const json* c = find(j, "commands")) {
    if (!c->is_array()) throw ParseError("expected an array", "/commands");
    for (std::size_t i = 0; i < c->size(); ++i) {
      auto p = child("/commands", i);
      const auto& cj = (*c)[i];
      require_object(cj, p);
      auto name = get_string(cj, "name", p);
      parse_command_params(name, cj, p);
      Command cmd{name, cj};
      cmd.params.erase("name");
      s.commands.push_back(std::move(cmd));
    }
  }
  const bool demos_only =
      !s.commands.empty() && std::all_of(s.commands.begin(), s.commands.end(),
                                         [](const Command& c) { return c.name == "demo"; });
  if (!demos_only) {
    if (!s.tree) throw ParseError("missing required field", "/tree");
    if (!s.weights) throw ParseError("missing required field", "/weights");
  }
  if (s.tree && s.weights) {
    try {
      build_shift(*s.weights, *s.tree);
    } catch (const DomainError& e) {
      throw ConfigurationError(e.what());
    } catch (const StructuralError& e) {
      throw ParseError(e.what(), "/tree");
    } catch (const RangeError& e) {
      throw ParseError(e.what(), "/tree/depth");
    }
  }
  return s;
}

}  // namespace cdual
