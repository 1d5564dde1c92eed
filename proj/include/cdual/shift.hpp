#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdual/tree.hpp"

namespace cdual {

inline constexpr double kDefaultTol = 1e-9;

/// ξ_n(x) = sqrt((1 + (n+1)(x²-1)) / (1 + n(x²-1))). Throws DomainError for x < 1 or n < 0.
double xi(int n, double x);

enum class WeightKind { Explicit, Adjacency, KernelCondition, Glowny, Dirichlet, BergmanDual, Treiso };

std::string_view to_string(WeightKind kind);

struct WeightSpec {
  WeightKind kind = WeightKind::Adjacency;
  std::map<std::string, double> weights;  // Explicit: vertex id -> λ
  double x = 1.0;                         // KernelCondition: root norm
  std::vector<double> proportions;        // KernelCondition: empty means equal split
  double y1 = 1.1, y2 = 1.3;              // Glowny

  static WeightSpec explicit_map(std::map<std::string, double> w);
  static WeightSpec adjacency();
  static WeightSpec kernel_condition(double x, std::vector<double> proportions = {});
  static WeightSpec glowny(double y1 = 1.1, double y2 = 1.3);
  static WeightSpec dirichlet();
  static WeightSpec bergman_dual();
  static WeightSpec treiso();
};

/// Immutable weighted shift on a materialized tree. weight(root) is 0 and unused.
class WeightedShift {
 public:
  WeightedShift(TreePtr tree, std::vector<double> weights, std::string name = {});

  const DirectedTree& tree() const { return *tree_; }
  const TreePtr& tree_ptr() const { return tree_; }
  double weight(VertexIndex v) const { return weights_.at(v); }
  const std::vector<double>& weights() const { return weights_; }
  const std::string& name() const { return name_; }
  int depth() const { return tree_->materialized_depth(); }
  bool has_zero_weight() const;

 private:
  TreePtr tree_;
  std::vector<double> weights_;
  std::string name_;
};

WeightedShift build_shift(const WeightSpec& spec, TreePtr tree);
WeightedShift build_shift(const WeightSpec& spec, const TreeSpec& tree);
/// Unilateral shift on a path with weights w[0], w[1], ... (w[n] sits on the depth n+1 vertex).
WeightedShift path_shift(const std::vector<double>& w, std::string name = {});

/// ‖S e_u‖. Throws RangeError when u has depth N (children not materialized).
double vertex_norm(const WeightedShift& S, VertexIndex u);
double vertex_norm_sq(const WeightedShift& S, VertexIndex u);
/// sup of vertex_norm over vertices of depth <= N-1.
double operator_norm(const WeightedShift& S);

struct Witness {
  std::string vertex;
  double residual = 0.0;
};

struct PropertyVerdict {
  bool holds = false;
  int verified_depth = 0;
  std::optional<Witness> witness;
  double tolerance = kDefaultTol;
  std::optional<double> min_vertex_norm;
  std::string note;
};

/// Σ_{v∈Chi(u)} λ_v²(2 - ‖S e_v‖²) = 1 for depth(u) <= N-2. Needs N >= 2.
PropertyVerdict is_two_isometry(const WeightedShift& S, double tol = kDefaultTol);
/// Sibling norms with nonzero weight constant below every parent of depth >= k, up to N-2.
PropertyVerdict satisfies_kernel_condition(const WeightedShift& S, int k, double tol = kDefaultTol);

/// λ'_v = λ_v / ‖S e_par(v)‖². Throws NotLeftInvertibleError naming a vertex of zero norm.
WeightedShift cauchy_dual(const WeightedShift& S);

struct AdjacencyReport {
  PropertyVerdict two_isometry;
  PropertyVerdict kernel_condition;
  PropertyVerdict quasi_brownian_isometry;
  PropertyVerdict brownian_isometry;
  PropertyVerdict isometry;
};

AdjacencyReport classify_adjacency(const TreePtr& tree, double tol = kDefaultTol);

struct ShiftInvariants {
  double root_norm = 0.0;
  std::vector<std::size_t> branching;  // 𝔧_1 .. 𝔧_N
  int depth = 0;
  bool truncated = true;
};

/// Throws ClassificationError unless S is a 2-isometry with the kernel condition.
ShiftInvariants shift_invariants(const WeightedShift& S, double tol = kDefaultTol);

bool are_unitarily_equivalent(const ShiftInvariants& a, const ShiftInvariants& b,
                              double tol = kDefaultTol);

/// Orthogonal sums of unilateral shifts, each given by a weight prefix. True iff
/// a bijection matches equal sequences. All prefixes must share one length.
bool equivalent_shift_multisets(std::vector<std::vector<double>> a,
                                std::vector<std::vector<double>> b, double tol = 1e-12);

}  // namespace cdual
