#include "cdual/moments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "cdual/errors.hpp"

namespace cdual {

MomentSequence d_sequence(const WeightedShift& S, VertexIndex u, int nmax, bool dual) {
  const auto& t = S.tree();
  const int N = S.depth();
  const int du = t.vertex(u).depth;
  if (nmax < 0) throw RangeError("nmax must be nonnegative");
  const int need = du + nmax + (dual ? 1 : 0);
  if (need > N)
    throw RangeError("d-sequence at '" + t.id(u) + "' to n = " + std::to_string(nmax) +
                     (dual ? " (dual)" : "") + " requires materialized depth >= " +
                     std::to_string(need) + ", have " + std::to_string(N));
  std::optional<WeightedShift> D;
  if (dual) D.emplace(cauchy_dual(S));
  const WeightedShift& W = dual ? *D : S;

  MomentSequence out;
  out.source = std::string(dual ? "dual " : "") + "d(" + t.id(u) + ", n)" +
               (S.name().empty() ? "" : " of " + S.name());
  out.values.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
  // path products of squared weights below u; the sum over Chi^n(u) is d(u,n)
  std::vector<std::pair<VertexIndex, double>> layer{{u, 1.0}}, next;
  for (int n = 0; n <= nmax; ++n) {
    double s = 0.0;
    for (const auto& [v, p] : layer) s += p;
    out.values[static_cast<std::size_t>(n)] = s;
    if (n == nmax) break;
    next.clear();
    for (const auto& [v, p] : layer)
      for (auto c : t.vertex(v).children) next.emplace_back(c, p * W.weight(c) * W.weight(c));
    layer.swap(next);
  }
  return out;
}

std::string_view to_string(Table1Row row) {
  switch (row) {
    case Table1Row::Isometry: return "isometry";
    case Table1Row::Kernel: return "kernel";
    case Table1Row::QuasiBrownian: return "quasi_brownian";
    case Table1Row::AdjacencyPattern: return "adjacency_pattern";
  }
  return "?";
}

double table1_rn(Table1Row row, double t, int n) {
  if (!(t >= 1.0)) throw DomainError("Table 1 formulas need t >= 1");
  if (n < 0) throw DomainError("Table 1 formulas need n >= 0");
  switch (row) {
    case Table1Row::Isometry:
      return 1.0;
    case Table1Row::Kernel:
      return 1.0 / (1.0 + n * (t - 1.0));
    case Table1Row::QuasiBrownian:
      return (1.0 + std::pow(t, 1.0 - 2.0 * n)) / (1.0 + t);
    case Table1Row::AdjacencyPattern:
      if (n == 0) return 1.0;
      return (t + 2.0 + 2.0 * (t - 1.0) * std::pow(2.0, 2.0 * (1.0 - n))) / (3.0 * t * t);
  }
  return 0.0;
}

double closed_form_table1(Table1Row row, double t, int n) {
  if (row == Table1Row::AdjacencyPattern && !(t >= 2.0 && std::floor(t) == t))
    throw DomainError("adjacency_pattern row needs an integer t >= 2");
  return table1_rn(row, t, n);
}

double dgraph_closed_form(const WeightedShift& S, VertexIndex u, int n, double tol) {
  if (n < 1) throw DomainError("explicit dual moment formula needs n >= 1");
  auto two = is_two_isometry(S, tol);
  if (!two.holds) throw ClassificationError("explicit dual moment formula needs a 2-isometry");
  if (S.depth() < 3) throw RangeError("perturbed kernel check needs depth >= 3");
  auto kc = satisfies_kernel_condition(S, 1, tol);
  if (!kc.holds)
    throw ClassificationError("explicit dual moment formula needs the perturbed kernel condition (k = 1)");
  const auto& t = S.tree();
  const double nn = n;
  if (t.vertex(u).depth > S.depth() - 2)
    throw RangeError("vertex '" + t.id(u) + "' too deep for the explicit formula");
  if (u == t.root()) {
    const double r2 = vertex_norm_sq(S, u);
    double s = 0.0;
    for (auto v : t.vertex(u).children) {
      double l2 = S.weight(v) * S.weight(v);
      s += l2 / ((nn - 1.0) * vertex_norm_sq(S, v) - (nn - 2.0));
    }
    return s / (r2 * r2);
  }
  double alpha2 = 0.0;
  for (auto w : t.vertex(u).children)
    if (S.weight(w) != 0.0) {
      alpha2 = vertex_norm_sq(S, w);
      break;
    }
  return 1.0 / (vertex_norm_sq(S, u) * ((nn - 1.0) * alpha2 - (nn - 2.0)));
}

namespace {

double min_eig(const Eigen::MatrixXd& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Eigen::MatrixXd hankel(const std::vector<double>& g, int n, int shift) {
  Eigen::MatrixXd H(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) H(i, j) = g[static_cast<std::size_t>(i + j + shift)];
  return H;
}

}  // namespace

MomentVerdict stieltjes_test(const MomentSequence& g, double tol) {
  const auto& v = g.values;
  if (v.size() < 3) throw RangeError("Stieltjes test needs at least 3 moments");
  const int N = static_cast<int>(v.size()) - 1;
  double maxabs = 0.0;
  for (double x : v) maxabs = std::max(maxabs, std::abs(x));
  MomentVerdict r;
  r.threshold = -tol * (1.0 + maxabs);
  r.min_value = std::numeric_limits<double>::infinity();
  r.holds = true;
  for (int n = 0; 2 * n <= N; ++n) {
    double e = min_eig(hankel(v, n, 0));
    if (2 * n + 1 <= N) e = std::min(e, min_eig(hankel(v, n, 1)));
    r.min_value = std::min(r.min_value, e);
    r.checked_order = n;
    if (e < r.threshold) {
      r.holds = false;
      r.failing_order = n;
      return r;
    }
  }
  r.certificate = recover_atomic_measure(v, 1e-8);
  return r;
}

MomentVerdict hausdorff_test(const MomentSequence& g, double tol) {
  const auto& v = g.values;
  if (v.size() < 2) throw RangeError("Hausdorff test needs at least 2 moments");
  const int N = static_cast<int>(v.size()) - 1;
  double maxabs = 0.0;
  for (double x : v) maxabs = std::max(maxabs, std::abs(x));
  MomentVerdict r;
  r.threshold = -tol;
  r.min_value = std::numeric_limits<double>::infinity();
  r.holds = true;
  std::vector<double> diff = v;  // (-1)^k Δ^k γ_n, n = 0..N-k
  for (int k = 0; k <= N; ++k) {
    const double scale = std::ldexp(1.0 + maxabs, k);
    for (int n = 0; n + k <= N; ++n) {
      double s = diff[static_cast<std::size_t>(n)] / scale;
      r.min_value = std::min(r.min_value, s);
      if (s < -tol && r.holds) {
        r.holds = false;
        r.failing_order = k;
      }
    }
    r.checked_order = k;
    if (!r.holds) return r;
    for (int n = 0; n + k + 1 <= N; ++n)
      diff[static_cast<std::size_t>(n)] -= diff[static_cast<std::size_t>(n) + 1];
  }
  return r;
}

MuABResult mu_ab_moments(double a, double b, int nmax) {
  MuABResult r;
  r.sequence.source = "1/(a + b n), a = " + std::to_string(a) + ", b = " + std::to_string(b);
  for (int n = 0; n <= nmax; ++n) {
    double d = a + b * n;
    if (d == 0.0) throw DomainError("a + b n vanishes at n = " + std::to_string(n));
    r.sequence.values.push_back(1.0 / d);
  }
  r.hamburger = a > 0.0 && b >= 0.0;
  if (r.hamburger) {
    r.measure = MuAB{a, b};
    r.description = r.measure->describe();
  } else {
    r.description = "not a Hamburger moment sequence";
  }
  return r;
}

}  // namespace cdual
