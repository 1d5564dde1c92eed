#include "cdual/tree.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "cdual/errors.hpp"

namespace cdual {

TreeSpec TreeSpec::path(int depth) {
  TreeSpec s;
  s.kind = TreeKind::Path;
  s.depth = depth;
  return s;
}

TreeSpec TreeSpec::t_eta_kappa(int eta, int kappa, int depth) {
  TreeSpec s;
  s.kind = TreeKind::TEtaKappa;
  s.eta = eta;
  s.kappa = kappa;
  s.depth = depth;
  return s;
}

TreeSpec TreeSpec::quasi_brownian(int valency, int depth) {
  TreeSpec s;
  s.kind = TreeKind::QuasiBrownian;
  s.valency = valency;
  s.depth = depth;
  return s;
}

TreeSpec TreeSpec::explicit_edges(std::vector<std::pair<std::string, std::string>> edges,
                                  int depth) {
  TreeSpec s;
  s.kind = TreeKind::Explicit;
  s.edges = std::move(edges);
  s.depth = depth;
  return s;
}

TreeSpec TreeSpec::generation_rule(GenerationRule rule, int depth) {
  TreeSpec s;
  s.kind = TreeKind::GenerationRule;
  s.rule = std::move(rule);
  s.depth = depth;
  return s;
}

std::string_view to_string(TreeKind kind) {
  switch (kind) {
    case TreeKind::Path: return "path";
    case TreeKind::TEtaKappa: return "t_eta_kappa";
    case TreeKind::QuasiBrownian: return "quasi_brownian";
    case TreeKind::Explicit: return "explicit";
    case TreeKind::GenerationRule: return "generation_rule";
  }
  return "?";
}

TreeSpec nbnkcsub_tree(int l, int depth) {
  if (l < 2) throw DomainError("nbnkcsub tree needs l >= 2");
  GenerationRule r;
  r.start = "root";
  std::vector<std::string> rc{"one"};
  for (int i = 1; i < l; ++i) rc.push_back("two");
  r.children["root"] = rc;
  r.children["two"] = {"one", "two"};
  r.children["one"] = {"one"};
  auto s = TreeSpec::generation_rule(std::move(r), depth);
  s.preset = "nbnkcsub";
  return s;
}

TreeSpec przadj_tree(int l, int depth) {
  if (l < 2) throw DomainError("przadj tree needs l >= 2");
  GenerationRule r;
  r.start = "root";
  std::vector<std::string> rc(static_cast<std::size_t>(l - 1), "one");
  rc.push_back("psi");
  r.children["root"] = rc;
  std::vector<std::string> pc{"one"};
  for (int i = 1; i < l; ++i) pc.push_back("two");
  r.children["psi"] = pc;
  r.children["two"] = {"one", "two"};
  r.children["one"] = {"one"};
  auto s = TreeSpec::generation_rule(std::move(r), depth);
  s.preset = "przadj";
  return s;
}

TreeSpec two_plus_three_tree(int variant, int depth) {
  GenerationRule r;
  r.start = "root";
  r.children["one"] = {"one"};
  if (variant == 1) {
    r.children["root"] = {"three", "one"};
    r.children["three"] = {"one", "one", "one"};
  } else if (variant == 2) {
    r.children["root"] = {"two", "two"};
    r.children["two"] = {"one", "one"};
  } else {
    throw DomainError("two-plus-three variant must be 1 or 2");
  }
  auto s = TreeSpec::generation_rule(std::move(r), depth);
  s.preset = "two_plus_three_" + std::to_string(variant);
  return s;
}

// ---------------------------------------------------------------------------

std::span<const VertexIndex> DirectedTree::generation(int n) const {
  if (n < 0 || n > depth_)
    throw RangeError("generation " + std::to_string(n) + " outside [0, " +
                     std::to_string(depth_) + "]");
  auto b = gen_offsets_[static_cast<std::size_t>(n)];
  auto e = gen_offsets_[static_cast<std::size_t>(n) + 1];
  return {order_.data() + b, e - b};
}

std::optional<VertexIndex> DirectedTree::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

VertexIndex DirectedTree::at(std::string_view id) const {
  auto v = find(id);
  if (!v) throw RangeError("unknown vertex '" + std::string(id) + "'");
  return *v;
}

VertexIndex DirectedTree::by_path(std::span<const int> path) const {
  VertexIndex v = root();
  for (int step : path) {
    const auto& ch = vertices_[v].children;
    if (step < 0 || static_cast<std::size_t>(step) >= ch.size())
      throw RangeError("child index " + std::to_string(step) + " invalid at vertex " +
                       vertices_[v].id);
    v = ch[static_cast<std::size_t>(step)];
  }
  return v;
}

std::optional<VertexIndex> DirectedTree::find_label(std::string_view label) const {
  for (VertexIndex v = 0; v < vertices_.size(); ++v)
    if (vertices_[v].label == label) return v;
  return std::nullopt;
}

bool DirectedTree::leafless_to_depth() const {
  for (const auto& v : vertices_)
    if (v.depth < depth_ && v.children.empty()) return false;
  return true;
}

DirectedTree DirectedTree::from_vertices(std::vector<Vertex> vertices, int depth) {
  DirectedTree t;
  t.depth_ = depth;
  t.vertices_ = std::move(vertices);
  t.order_.resize(t.vertices_.size());
  t.gen_offsets_.assign(static_cast<std::size_t>(depth) + 2, t.vertices_.size());
  for (VertexIndex v = 0; v < t.vertices_.size(); ++v) {
    t.order_[v] = v;
    t.by_id_.emplace(t.vertices_[v].id, v);
  }
  // vertices arrive in BFS order, so the first vertex of each depth opens its range
  for (VertexIndex v = t.vertices_.size(); v-- > 0;)
    t.gen_offsets_[static_cast<std::size_t>(t.vertices_[v].depth)] = v;
  for (int d = depth; d >= 0; --d) {
    auto i = static_cast<std::size_t>(d);
    t.gen_offsets_[i] = std::min(t.gen_offsets_[i], t.gen_offsets_[i + 1]);
  }
  return t;
}

namespace {

std::string gen_id(int depth, std::size_t index) {
  return "g" + std::to_string(depth) + ":" + std::to_string(index);
}

// Grows a tree breadth-first; `kids(label, depth)` returns child labels.
template <class Kids>
DirectedTree grow(const std::string& root_label, int depth, Kids kids) {
  std::vector<Vertex> vs;
  vs.push_back(Vertex{gen_id(0, 0), 0, std::nullopt, {}, root_label});
  std::size_t begin = 0;
  for (int d = 0; d < depth; ++d) {
    std::size_t end = vs.size();
    std::size_t idx = 0;
    for (std::size_t u = begin; u < end; ++u) {
      for (const auto& lab : kids(vs[u].label, d)) {
        VertexIndex c = vs.size();
        vs.push_back(Vertex{gen_id(d + 1, idx++), d + 1, u, {}, lab});
        vs[u].children.push_back(c);
      }
    }
    begin = end;
  }
  return DirectedTree::from_vertices(std::move(vs), depth);
}

DirectedTree from_edges(const std::vector<std::pair<std::string, std::string>>& edges,
                        int depth) {
  std::map<std::string, std::vector<std::string>> kids;
  std::map<std::string, std::string> parent;
  std::vector<std::string> order;  // first appearance, for deterministic errors
  std::set<std::string> seen;
  auto note = [&](const std::string& s) {
    if (seen.insert(s).second) order.push_back(s);
  };
  for (const auto& [p, c] : edges) {
    if (p.empty() || c.empty()) throw StructuralError("empty vertex id in edge list", p.empty() ? c : p);
    if (p == c) throw StructuralError("self-loop at vertex '" + p + "'", p);
    note(p);
    note(c);
    auto [it, fresh] = parent.emplace(c, p);
    if (!fresh) throw StructuralError("vertex '" + c + "' has two parents", c);
    kids[p].push_back(c);
  }
  if (order.empty()) throw StructuralError("edge list is empty", "");
  std::vector<std::string> roots;
  for (const auto& v : order)
    if (!parent.count(v)) roots.push_back(v);
  if (roots.empty()) throw StructuralError("edge list has a cycle through '" + order.front() + "'", order.front());
  if (roots.size() > 1)
    throw StructuralError("vertex '" + roots[1] + "' is disconnected from root '" + roots[0] + "'",
                          roots[1]);

  std::vector<Vertex> vs;
  std::map<std::string, int> dep;
  vs.push_back(Vertex{roots[0], 0, std::nullopt, {}, ""});
  dep[roots[0]] = 0;
  for (std::size_t u = 0; u < vs.size(); ++u) {
    int d = vs[u].depth;
    auto it = kids.find(vs[u].id);
    if (it == kids.end()) continue;
    for (const auto& c : it->second) {
      dep[c] = d + 1;
      if (d + 1 > depth) continue;
      VertexIndex ci = vs.size();
      vs.push_back(Vertex{c, d + 1, u, {}, ""});
      vs[u].children.push_back(ci);
    }
  }
  for (const auto& v : order)
    if (!dep.count(v)) throw StructuralError("vertex '" + v + "' lies on a cycle", v);
  int maxd = 0;
  for (const auto& v : vs) maxd = std::max(maxd, v.depth);
  if (maxd < depth)
    throw RangeError("explicit tree has depth " + std::to_string(maxd) +
                     ", cannot materialize to depth " + std::to_string(depth));
  return DirectedTree::from_vertices(std::move(vs), depth);
}

}  // namespace

DirectedTree materialize(const TreeSpec& spec) { return materialize(spec, spec.depth); }

DirectedTree materialize(const TreeSpec& spec, int depth) {
  if (depth < 0) throw RangeError("depth must be nonnegative");
  switch (spec.kind) {
    case TreeKind::Path:
      return grow("", depth, [](const std::string&, int) { return std::vector<std::string>{""}; });
    case TreeKind::TEtaKappa: {
      if (spec.eta < 2) throw DomainError("t_eta_kappa needs eta >= 2");
      if (spec.kappa != 0) throw DomainError("only kappa = 0 is generated");
      int eta = spec.eta;
      return grow("", depth, [eta](const std::string&, int d) {
        return std::vector<std::string>(d == 0 ? static_cast<std::size_t>(eta) : 1, "");
      });
    }
    case TreeKind::QuasiBrownian: {
      int l = spec.valency;
      if (l < 2) throw DomainError("quasi-Brownian valency must be >= 2");
      return grow("l", depth, [l](const std::string& lab, int) {
        if (lab == "1") return std::vector<std::string>{"1"};
        std::vector<std::string> k{"l"};
        k.resize(static_cast<std::size_t>(l), "1");
        return k;
      });
    }
    case TreeKind::Explicit:
      return from_edges(spec.edges, depth);
    case TreeKind::GenerationRule: {
      const auto& rule = spec.rule;
      if (!rule.children.count(rule.start))
        throw StructuralError("generation rule has no entry for start label '" + rule.start + "'",
                              rule.start);
      for (const auto& [lab, ks] : rule.children) {
        if (ks.empty()) throw StructuralError("label '" + lab + "' produces a leaf", lab);
        for (const auto& k : ks)
          if (!rule.children.count(k))
            throw StructuralError("label '" + k + "' has no rule", k);
      }
      return grow(rule.start, depth,
                  [&rule](const std::string& lab, int) { return rule.children.at(lab); });
    }
  }
  throw DomainError("unknown tree kind");
}

TreePtr make_tree(const TreeSpec& spec) {
  return std::make_shared<const DirectedTree>(materialize(spec));
}

std::vector<std::string> generation_ids(const DirectedTree& tree, int n) {
  std::vector<std::string> out;
  for (auto v : tree.generation(n)) out.push_back(tree.id(v));
  return out;
}

std::size_t branching_degree(const DirectedTree& tree, int k) {
  if (k < 1 || k > tree.materialized_depth())
    throw RangeError("branching degree index " + std::to_string(k) + " outside [1, " +
                     std::to_string(tree.materialized_depth()) + "]");
  std::size_t s = 0;
  for (auto u : tree.generation(k - 1)) {
    auto d = tree.degree(u);
    if (d > 0) s += d - 1;
  }
  return s;
}

TreeReport classify_tree(const DirectedTree& tree) {
  TreeReport r;
  const int N = tree.materialized_depth();
  r.materialized_depth = N;
  r.leafless_to_depth = tree.leafless_to_depth();
  r.locally_finite = true;
  for (int n = 0; n < N; ++n) {
    std::map<std::size_t, std::size_t> m;
    for (auto u : tree.generation(n)) ++m[tree.degree(u)];
    r.degree_multiset_per_generation.push_back(std::move(m));
  }
  r.scope = "verified to depth " + std::to_string(std::max(N - 2, 0)) +
            "; nothing is claimed about vertices below depth " + std::to_string(N);

  auto& qb = r.quasi_brownian;
  qb.verified_depth = N - 2;
  if (N < 2) {
    qb.reason = "materialized depth below 2";
    qb.witness = tree.id(tree.root());
    return r;
  }
  std::size_t l = tree.degree(tree.root());
  qb.valency = static_cast<int>(l);
  if (l < 2) {
    qb.reason = "root degree " + std::to_string(l) + " (no vertex of degree >= 2 at the root)";
    qb.witness = tree.id(tree.root());
    return r;
  }
  for (int n = 0; n <= N - 2; ++n) {
    for (auto u : tree.generation(n)) {
      std::size_t du = tree.degree(u), sum = 0;
      bool bad_child = false;
      for (auto v : tree.vertex(u).children) {
        auto dv = tree.degree(v);
        sum += dv;
        if (dv != 1 && dv != l) bad_child = true;
      }
      if (du != 1 && du != l) {
        qb.reason = "degree " + std::to_string(du) + " not in {1, " + std::to_string(l) + "}";
        qb.witness = tree.id(u);
        return r;
      }
      if (bad_child) {
        qb.reason = "a child has degree outside {1, " + std::to_string(l) + "}";
        qb.witness = tree.id(u);
        return r;
      }
      if (sum + 1 != 2 * du) {
        qb.reason = "children degree sum " + std::to_string(sum) + " != 2 deg - 1 = " +
                    std::to_string(2 * du - 1);
        qb.witness = tree.id(u);
        return r;
      }
    }
  }
  qb.holds = true;
  return r;
}

}  // namespace cdual
