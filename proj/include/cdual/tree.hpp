#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cdual {

using VertexIndex = std::size_t;

struct Vertex {
  std::string id;
  int depth = 0;
  std::optional<VertexIndex> parent;
  std::vector<VertexIndex> children;
  /// Production label for rule-generated trees ("psi", "two", ...); empty otherwise.
  std::string label;
};

/// Context-free child rule: a vertex labelled `L` receives one child per entry
/// of `children.at(L)`, in order. Labels without an entry are an error.
struct GenerationRule {
  std::string start;
  std::map<std::string, std::vector<std::string>> children;
};

enum class TreeKind { Path, TEtaKappa, QuasiBrownian, Explicit, GenerationRule };

struct TreeSpec {
  TreeKind kind = TreeKind::Path;
  int depth = 0;
  int eta = 2;      // TEtaKappa
  int kappa = 0;    // TEtaKappa, only 0 is generated
  int valency = 2;  // QuasiBrownian
  std::vector<std::pair<std::string, std::string>> edges;  // Explicit, (parent, child)
  GenerationRule rule;                                      // GenerationRule
  std::string preset;  // informational name of a rule preset, may be empty

  static TreeSpec path(int depth);
  static TreeSpec t_eta_kappa(int eta, int kappa, int depth);
  static TreeSpec quasi_brownian(int valency, int depth);
  static TreeSpec explicit_edges(std::vector<std::pair<std::string, std::string>> edges, int depth);
  static TreeSpec generation_rule(GenerationRule rule, int depth);
};

std::string_view to_string(TreeKind kind);

// Rule presets for the counterexample trees.

/// Root of degree l; one child of degree 1 and l-1 of degree 2; degree-2
/// vertices have a degree-1 and a degree-2 child.
TreeSpec nbnkcsub_tree(int l, int depth);
/// Root with l-1 degree-1 children and one child "psi" of degree l; psi has
/// one degree-1 and l-1 degree-2 children.
TreeSpec przadj_tree(int l, int depth);
/// Two non-isomorphic trees with branching degrees (1, 2, 0, 0, ...).
/// Variant 1: root of degree 2, one child of degree 3. Variant 2: root of
/// degree 2, both children of degree 2.
TreeSpec two_plus_three_tree(int variant, int depth);

/// Finite-depth materialization of a rooted directed tree. Vertices are
/// stored in breadth-first order, so every generation is a contiguous range
/// and the root has index 0. Immutable after construction.
class DirectedTree {
 public:
  const Vertex& vertex(VertexIndex v) const { return vertices_.at(v); }
  std::size_t size() const noexcept { return vertices_.size(); }
  VertexIndex root() const noexcept { return 0; }
  int materialized_depth() const noexcept { return depth_; }

  /// Vertices of depth n. Throws RangeError outside [0, materialized_depth].
  std::span<const VertexIndex> generation(int n) const;

  std::size_t degree(VertexIndex v) const { return vertices_.at(v).children.size(); }
  std::optional<VertexIndex> find(std::string_view id) const;
  /// Throws RangeError for unknown ids.
  VertexIndex at(std::string_view id) const;
  /// Child-index path from the root, e.g. {1, 0}. Throws RangeError.
  VertexIndex by_path(std::span<const int> path) const;
  const std::string& id(VertexIndex v) const { return vertices_.at(v).id; }
  std::optional<VertexIndex> find_label(std::string_view label) const;

  /// True if every vertex above the truncation depth has a child.
  bool leafless_to_depth() const;

  /// Builds a tree from parent links; used by materialize.
  static DirectedTree from_vertices(std::vector<Vertex> vertices, int depth);

 private:
  std::vector<Vertex> vertices_;
  std::vector<VertexIndex> order_;          // identity permutation, spans point here
  std::vector<std::size_t> gen_offsets_;    // size depth+2
  std::unordered_map<std::string, VertexIndex> by_id_;
  int depth_ = 0;
};

using TreePtr = std::shared_ptr<const DirectedTree>;

DirectedTree materialize(const TreeSpec& spec);
DirectedTree materialize(const TreeSpec& spec, int depth);
TreePtr make_tree(const TreeSpec& spec);

std::vector<std::string> generation_ids(const DirectedTree& tree, int n);

/// Sum over generation k-1 of (deg u - 1). Requires 1 <= k <= materialized depth.
std::size_t branching_degree(const DirectedTree& tree, int k);

struct QuasiBrownianVerdict {
  bool holds = false;
  int valency = 0;
  int verified_depth = 0;
  std::optional<std::string> witness;
  std::string reason;
};

struct TreeReport {
  bool leafless_to_depth = false;
  bool locally_finite = true;
  int materialized_depth = 0;
  /// degree -> count, one entry per generation whose degrees are known (0..N-1).
  std::vector<std::map<std::size_t, std::size_t>> degree_multiset_per_generation;
  QuasiBrownianVerdict quasi_brownian;
  std::string scope;
};

TreeReport classify_tree(const DirectedTree& tree);

}  // namespace cdual
