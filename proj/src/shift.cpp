#include "cdual/shift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cdual/errors.hpp"

namespace cdual {

double xi(int n, double x) {
  if (n < 0) throw DomainError("xi: n must be nonnegative");
  if (!(x >= 1.0)) throw DomainError("xi: x must be >= 1");
  const double s = x * x - 1.0;
  return std::sqrt((1.0 + (n + 1) * s) / (1.0 + n * s));
}

std::string_view to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::Explicit: return "explicit";
    case WeightKind::Adjacency: return "adjacency";
    case WeightKind::KernelCondition: return "kernel_condition";
    case WeightKind::Glowny: return "glowny";
    case WeightKind::Dirichlet: return "dirichlet";
    case WeightKind::BergmanDual: return "bergman_dual";
    case WeightKind::Treiso: return "treiso";
  }
  return "?";
}

WeightSpec WeightSpec::explicit_map(std::map<std::string, double> w) {
  WeightSpec s;
  s.kind = WeightKind::Explicit;
  s.weights = std::move(w);
  return s;
}
WeightSpec WeightSpec::adjacency() { return {}; }
WeightSpec WeightSpec::kernel_condition(double x, std::vector<double> proportions) {
  WeightSpec s;
  s.kind = WeightKind::KernelCondition;
  s.x = x;
  s.proportions = std::move(proportions);
  return s;
}
WeightSpec WeightSpec::glowny(double y1, double y2) {
  WeightSpec s;
  s.kind = WeightKind::Glowny;
  s.y1 = y1;
  s.y2 = y2;
  return s;
}
WeightSpec WeightSpec::dirichlet() {
  WeightSpec s;
  s.kind = WeightKind::Dirichlet;
  return s;
}
WeightSpec WeightSpec::bergman_dual() {
  WeightSpec s;
  s.kind = WeightKind::BergmanDual;
  return s;
}
WeightSpec WeightSpec::treiso() {
  WeightSpec s;
  s.kind = WeightKind::Treiso;
  return s;
}

WeightedShift::WeightedShift(TreePtr tree, std::vector<double> weights, std::string name)
    : tree_(std::move(tree)), weights_(std::move(weights)), name_(std::move(name)) {
  if (!tree_) throw ConfigurationError("weighted shift without a tree");
  if (weights_.size() != tree_->size())
    throw ConfigurationError("weight vector size does not match vertex count");
  weights_[0] = 0.0;
  for (VertexIndex v = 1; v < weights_.size(); ++v)
    if (!std::isfinite(weights_[v]) || weights_[v] < 0.0)
      throw DomainError("weight at vertex '" + tree_->id(v) + "' is not a finite nonnegative number");
}

bool WeightedShift::has_zero_weight() const {
  return std::any_of(weights_.begin() + 1, weights_.end(), [](double w) { return w == 0.0; });
}

namespace {

bool is_path(const DirectedTree& t) {
  for (VertexIndex v = 0; v < t.size(); ++v)
    if (t.vertex(v).depth < t.materialized_depth() && t.degree(v) != 1) return false;
  return true;
}

bool is_t20(const DirectedTree& t) {
  if (t.materialized_depth() < 1 || t.degree(t.root()) != 2) return false;
  for (VertexIndex v = 1; v < t.size(); ++v)
    if (t.vertex(v).depth < t.materialized_depth() && t.degree(v) != 1) return false;
  return true;
}

// Weight on a path vertex of depth n+1 as a function of n.
template <class F>
std::vector<double> path_weights(const DirectedTree& t, F f) {
  std::vector<double> w(t.size(), 0.0);
  for (VertexIndex v = 1; v < t.size(); ++v) w[v] = f(t.vertex(v).depth - 1);
  return w;
}

void check_glowny_y(double y, const char* name) {
  if (!(y > 1.0 && y < std::sqrt(2.0)))
    throw DomainError(std::string("glowny ") + name + " must lie in (1, sqrt 2)");
}

}  // namespace

WeightedShift build_shift(const WeightSpec& spec, const TreeSpec& tree) {
  return build_shift(spec, make_tree(tree));
}

WeightedShift build_shift(const WeightSpec& spec, TreePtr tp) {
  const DirectedTree& t = *tp;
  std::vector<double> w(t.size(), 0.0);
  std::string name(to_string(spec.kind));
  switch (spec.kind) {
    case WeightKind::Explicit: {
      for (const auto& [id, val] : spec.weights) {
        auto v = t.find(id);
        if (!v) throw ConfigurationError("weight given for unknown vertex '" + id + "'");
        if (*v == t.root()) throw ConfigurationError("the root carries no weight");
        w[*v] = val;
      }
      for (VertexIndex v = 1; v < t.size(); ++v)
        if (!spec.weights.count(t.id(v)))
          throw ConfigurationError("vertex '" + t.id(v) + "' has no weight");
      break;
    }
    case WeightKind::Adjacency:
      std::fill(w.begin() + 1, w.end(), 1.0);
      break;
    case WeightKind::KernelCondition: {
      if (!(spec.x >= 1.0)) throw DomainError("kernel_condition needs x >= 1");
      for (double p : spec.proportions)
        if (!(p > 0.0) || !std::isfinite(p))
          throw DomainError("kernel_condition proportions must be positive");
      for (VertexIndex u = 0; u < t.size(); ++u) {
        const auto& ch = t.vertex(u).children;
        if (ch.empty()) continue;
        const double target = xi(t.vertex(u).depth, spec.x);
        if (spec.proportions.empty()) {
          for (auto c : ch) w[c] = target / std::sqrt(static_cast<double>(ch.size()));
        } else {
          const auto& p = spec.proportions;
          double total = 0.0;
          for (std::size_t i = 0; i < ch.size(); ++i) total += p[i % p.size()];
          for (std::size_t i = 0; i < ch.size(); ++i)
            w[ch[i]] = target * std::sqrt(p[i % p.size()] / total);
        }
      }
      break;
    }
    case WeightKind::Glowny: {
      if (!is_t20(t)) throw ConfigurationError("glowny weights need the tree T_{2,0}");
      check_glowny_y(spec.y1, "y1");
      check_glowny_y(spec.y2, "y2");
      if (spec.y1 == spec.y2) throw DomainError("glowny needs y1 != y2");
      const double y[2] = {spec.y1, spec.y2};
      const auto& top = t.vertex(t.root()).children;
      for (int i = 0; i < 2; ++i) {
        VertexIndex v = top[static_cast<std::size_t>(i)];
        w[v] = 1.0 / std::sqrt(2.0 * (2.0 - y[i] * y[i]));
        while (!t.vertex(v).children.empty()) {
          VertexIndex c = t.vertex(v).children.front();
          w[c] = xi(t.vertex(c).depth - 2, y[i]);
          v = c;
        }
      }
      break;
    }
    case WeightKind::Dirichlet:
    case WeightKind::BergmanDual:
    case WeightKind::Treiso: {
      if (!is_path(t)) throw ConfigurationError(name + " weights need a path tree");
      if (spec.kind == WeightKind::Dirichlet)
        w = path_weights(t, [](int n) { return xi(n, std::sqrt(2.0)); });
      else if (spec.kind == WeightKind::BergmanDual)
        w = path_weights(t, [](int n) { return std::sqrt((n + 1.0) / (n + 2.0)); });
      else
        w = path_weights(t, [](int n) {
          auto phi = [](double k) { return k * k + 1.0; };
          return std::sqrt(phi(n + 1.0) / phi(n));
        });
      break;
    }
  }
  return WeightedShift(std::move(tp), std::move(w), name);
}

WeightedShift path_shift(const std::vector<double>& w, std::string name) {
  auto tp = make_tree(TreeSpec::path(static_cast<int>(w.size())));
  std::vector<double> full(tp->size(), 0.0);
  std::copy(w.begin(), w.end(), full.begin() + 1);
  return WeightedShift(std::move(tp), std::move(full), std::move(name));
}

double vertex_norm_sq(const WeightedShift& S, VertexIndex u) {
  const auto& t = S.tree();
  if (t.vertex(u).depth >= t.materialized_depth())
    throw RangeError("vertex '" + t.id(u) + "' has depth " + std::to_string(t.vertex(u).depth) +
                     "; its children are not materialized (need depth <= " +
                     std::to_string(t.materialized_depth() - 1) + ")");
  double s = 0.0;
  for (auto c : t.vertex(u).children) s += S.weight(c) * S.weight(c);
  return s;
}

double vertex_norm(const WeightedShift& S, VertexIndex u) { return std::sqrt(vertex_norm_sq(S, u)); }

double operator_norm(const WeightedShift& S) {
  double m = 0.0;
  for (int n = 0; n < S.depth(); ++n)
    for (auto u : S.tree().generation(n)) m = std::max(m, vertex_norm_sq(S, u));
  return std::sqrt(m);
}

namespace {

std::string zero_note(const WeightedShift& S) {
  return S.has_zero_weight()
             ? "zero weights present; behaviour at truncation leaves is not covered by the theory"
             : "";
}

}  // namespace

PropertyVerdict is_two_isometry(const WeightedShift& S, double tol) {
  const int N = S.depth();
  if (N < 2) throw RangeError("2-isometry check needs materialized depth >= 2");
  PropertyVerdict r;
  r.tolerance = tol;
  r.verified_depth = N - 2;
  r.note = zero_note(S);
  double minnorm = std::numeric_limits<double>::infinity();
  for (int n = 0; n <= N - 1; ++n)
    for (auto u : S.tree().generation(n)) minnorm = std::min(minnorm, vertex_norm(S, u));
  r.min_vertex_norm = minnorm;
  r.holds = true;
  for (int n = 0; n <= N - 2 && r.holds; ++n) {
    for (auto u : S.tree().generation(n)) {
      double lhs = 0.0;
      for (auto v : S.tree().vertex(u).children) {
        double l2 = S.weight(v) * S.weight(v);
        lhs += l2 * (2.0 - vertex_norm_sq(S, v));
      }
      double res = lhs - 1.0;
      if (std::abs(res) / (1.0 + std::abs(lhs)) > tol) {
        r.holds = false;
        r.witness = Witness{S.tree().id(u), res};
        break;
      }
    }
  }
  return r;
}

PropertyVerdict satisfies_kernel_condition(const WeightedShift& S, int k, double tol) {
  const int N = S.depth();
  if (k < 0) throw DomainError("kernel condition index k must be >= 0");
  if (N < k + 2)
    throw RangeError("kernel condition with k = " + std::to_string(k) +
                     " needs materialized depth >= " + std::to_string(k + 2));
  PropertyVerdict r;
  r.tolerance = tol;
  r.verified_depth = N - 2;
  r.note = zero_note(S);
  r.holds = true;
  for (int n = k; n <= N - 2; ++n) {
    for (auto v : S.tree().generation(n)) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (auto u : S.tree().vertex(v).children) {
        if (S.weight(u) == 0.0) continue;
        double a = vertex_norm(S, u);
        lo = std::min(lo, a);
        hi = std::max(hi, a);
      }
      if (hi > lo && hi - lo > tol * (1.0 + hi)) {
        r.holds = false;
        r.witness = Witness{S.tree().id(v), hi - lo};
        return r;
      }
    }
  }
  return r;
}

WeightedShift cauchy_dual(const WeightedShift& S) {
  const auto& t = S.tree();
  std::vector<double> norms(t.size(), 0.0);
  for (int n = 0; n < S.depth(); ++n)
    for (auto u : t.generation(n)) {
      norms[u] = vertex_norm_sq(S, u);
      if (norms[u] == 0.0)
        throw NotLeftInvertibleError("S e_u = 0 at vertex '" + t.id(u) + "'", t.id(u));
    }
  std::vector<double> w(t.size(), 0.0);
  for (VertexIndex v = 1; v < t.size(); ++v) w[v] = S.weight(v) / norms[*t.vertex(v).parent];
  std::string name = S.name().empty() ? "dual" : S.name() + "'";
  return WeightedShift(S.tree_ptr(), std::move(w), std::move(name));
}

AdjacencyReport classify_adjacency(const TreePtr& tp, double tol) {
  const auto& t = *tp;
  const int N = t.materialized_depth();
  if (N < 2) throw RangeError("adjacency classification needs materialized depth >= 2");
  auto S = build_shift(WeightSpec::adjacency(), tp);
  AdjacencyReport r;
  r.two_isometry = is_two_isometry(S, tol);
  r.kernel_condition = satisfies_kernel_condition(S, 0, tol);

  auto fresh = [&] {
    PropertyVerdict p;
    p.tolerance = tol;
    p.verified_depth = N - 2;
    p.holds = true;
    return p;
  };

  // quasi-Brownian: 2-isometry and sqrt(deg u - 1) sqrt(deg v - 1) = deg v - 1 for v in Chi(u)
  r.quasi_brownian_isometry = fresh();
  if (!r.two_isometry.holds) {
    r.quasi_brownian_isometry.holds = false;
    r.quasi_brownian_isometry.witness = r.two_isometry.witness;
    r.quasi_brownian_isometry.note = "not a 2-isometry";
  } else {
    for (int n = 0; n <= N - 2 && r.quasi_brownian_isometry.holds; ++n)
      for (auto u : t.generation(n)) {
        double du = static_cast<double>(t.degree(u));
        double worst = 0.0;
        for (auto v : t.vertex(u).children) {
          double dv = static_cast<double>(t.degree(v));
          double res = std::sqrt(du - 1.0) * std::sqrt(dv - 1.0) - (dv - 1.0);
          if (std::abs(res) > std::abs(worst)) worst = res;
        }
        if (std::abs(worst) > tol * (1.0 + du)) {
          r.quasi_brownian_isometry.holds = false;
          r.quasi_brownian_isometry.witness = Witness{t.id(u), worst};
          break;
        }
      }
  }

  // isometry: every degree is 1
  r.isometry = fresh();
  for (int n = 0; n <= N - 2 && r.isometry.holds; ++n)
    for (auto u : t.generation(n))
      if (t.degree(u) != 1) {
        r.isometry.holds = false;
        r.isometry.witness = Witness{t.id(u), static_cast<double>(t.degree(u)) - 1.0};
        break;
      }

  // On rooted trees the Brownian adjacency operators are exactly the isometric ones.
  r.brownian_isometry = r.isometry;
  r.brownian_isometry.note = "rooted tree: Brownian adjacency operator only on a path";
  return r;
}

ShiftInvariants shift_invariants(const WeightedShift& S, double tol) {
  auto two = is_two_isometry(S, tol);
  if (!two.holds)
    throw ClassificationError("invariants are complete only for 2-isometries (fails at '" +
                              two.witness->vertex + "')");
  auto kc = satisfies_kernel_condition(S, 0, tol);
  if (!kc.holds)
    throw ClassificationError("invariants are complete only under the kernel condition (fails at '" +
                              kc.witness->vertex + "')");
  ShiftInvariants inv;
  inv.root_norm = vertex_norm(S, S.tree().root());
  inv.depth = S.depth();
  for (int k = 1; k <= S.depth(); ++k) inv.branching.push_back(branching_degree(S.tree(), k));
  return inv;
}

bool are_unitarily_equivalent(const ShiftInvariants& a, const ShiftInvariants& b, double tol) {
  if (a.depth != b.depth || a.branching.size() != b.branching.size())
    throw ComparisonError("invariants computed to depths " + std::to_string(a.depth) + " and " +
                          std::to_string(b.depth));
  auto close = [tol](double p, double q) {
    return std::abs(p - q) <= tol * (1.0 + std::max(std::abs(p), std::abs(q)));
  };
  const bool a1 = close(a.root_norm, 1.0), b1 = close(b.root_norm, 1.0);
  if (a1 && b1) {
    std::size_t sa = 0, sb = 0;
    for (auto x : a.branching) sa += x;
    for (auto x : b.branching) sb += x;
    return sa == sb;
  }
  if (a1 != b1) return false;
  return close(a.root_norm, b.root_norm) && a.branching == b.branching;
}

bool equivalent_shift_multisets(std::vector<std::vector<double>> a,
                                std::vector<std::vector<double>> b, double tol) {
  if (a.size() != b.size()) return false;
  std::size_t len = a.empty() ? 0 : a.front().size();
  for (const auto* side : {&a, &b})
    for (const auto& s : *side)
      if (s.size() != len) throw ComparisonError("weight prefixes of unequal length");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < len; ++j)
      if (std::abs(a[i][j] - b[i][j]) > tol) return false;
  return true;
}

}  // namespace cdual
