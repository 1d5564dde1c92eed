// Randomized and grid property checks. Seeds are fixed.
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "cdual/matrix_oracle.hpp"
#include "cdual/moments.hpp"

using namespace cdual;

namespace {

std::vector<TreeSpec> tree_zoo(int depth) {
  return {TreeSpec::path(depth), TreeSpec::t_eta_kappa(2, 0, depth), TreeSpec::t_eta_kappa(3, 0, depth),
          TreeSpec::quasi_brownian(2, depth), TreeSpec::quasi_brownian(3, depth), nbnkcsub_tree(3, depth),
          przadj_tree(3, depth), two_plus_three_tree(1, depth), two_plus_three_tree(2, depth)};
}

struct Catalog {
  std::string name;
  WeightedShift S;
};

std::vector<Catalog> catalog() {
  std::vector<Catalog> c;
  c.push_back({"dirichlet", build_shift(WeightSpec::dirichlet(), TreeSpec::path(24))});
  c.push_back({"bergman", build_shift(WeightSpec::bergman_dual(), TreeSpec::path(24))});
  c.push_back({"treiso", build_shift(WeightSpec::treiso(), TreeSpec::path(24))});
  c.push_back({"glowny", build_shift(WeightSpec::glowny(), TreeSpec::t_eta_kappa(2, 0, 10))});
  c.push_back({"przadj", build_shift(WeightSpec::adjacency(), przadj_tree(3, 8))});
  for (int l : {2, 3, 4})
    c.push_back({"nbnkcsub", build_shift(WeightSpec::adjacency(), nbnkcsub_tree(l, 8))});
  c.push_back({"qb3", build_shift(WeightSpec::adjacency(), TreeSpec::quasi_brownian(3, 8))});
  c.push_back({"2+3", build_shift(WeightSpec::kernel_condition(1.2), two_plus_three_tree(1, 8))});
  return c;
}

std::size_t chi_n_count(const DirectedTree& t, VertexIndex u, int n) {
  std::vector<VertexIndex> front{u};
  for (int i = 0; i < n; ++i) {
    std::vector<VertexIndex> next;
    for (auto v : front)
      for (auto c : t.vertex(v).children) next.push_back(c);
    front = std::move(next);
  }
  return front.size();
}

}  // namespace

TEST_CASE("generations partition the vertex set") {
  for (int depth : {3, 5, 7})
    for (const auto& spec : tree_zoo(depth)) {
      auto t = materialize(spec);
      std::set<VertexIndex> seen;
      std::size_t total = 0;
      for (int n = 0; n <= depth; ++n)
        for (auto v : t.generation(n)) {
          CHECK(t.vertex(v).depth == n);
          seen.insert(v);
          ++total;
        }
      CHECK(total == t.size());
      CHECK(seen.size() == t.size());
    }
}

TEST_CASE("quasi-Brownian tree counts") {
  for (int l = 2; l <= 6; ++l)
    for (int N = 3; N <= 8; ++N) {
      auto t = materialize(TreeSpec::quasi_brownian(l, N));
      for (VertexIndex u = 0; u < t.size(); ++u) {
        if (t.degree(u) != static_cast<std::size_t>(l)) continue;
        for (int n = 0; t.vertex(u).depth + n <= N; ++n)
          CHECK(chi_n_count(t, u, n) == static_cast<std::size_t>(1 + n * (l - 1)));
      }
      for (int k = 1; k <= N; ++k) CHECK(branching_degree(t, k) == static_cast<std::size_t>(l - 1));
      auto r = classify_tree(t);
      CHECK(r.quasi_brownian.holds);
      CHECK(r.quasi_brownian.valency == l);
    }
}

TEST_CASE("xi semigroup and monotonicity") {
  for (double x : {1.0, 1.1, std::sqrt(2.0), 2.0, 5.0})
    for (int m = 0; m <= 20; ++m)
      for (int n = 0; n <= 20; ++n) CHECK(std::abs(xi(m + n, x) - xi(m, xi(n, x))) < 1e-12);
  for (double x : {1.01, 1.1, std::sqrt(2.0), 2.0, 5.0})
    for (int n = 0; n <= 40; ++n) {
      CHECK(xi(n, x) > xi(n + 1, x));
      CHECK(xi(n + 1, x) > 1.0);
    }
}

TEST_CASE("kernel-condition shifts on random trees") {
  std::mt19937 rng(20261019);
  std::uniform_real_distribution<double> xs(1.0, 2.5), ps(0.2, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    auto zoo = tree_zoo(6);
    const auto& spec = zoo[trial % zoo.size()];
    double x = xs(rng);
    std::vector<double> prop;
    if (trial % 2)
      for (int i = 0; i < 4; ++i) prop.push_back(ps(rng));
    auto S = build_shift(WeightSpec::kernel_condition(x, prop), spec);
    const auto& t = S.tree();
    for (VertexIndex u = 0; u < t.size(); ++u)
      if (t.vertex(u).depth < 6) CHECK(std::abs(vertex_norm(S, u) - xi(t.vertex(u).depth, x)) < 1e-12);
    CHECK(is_two_isometry(S).holds);
    CHECK(satisfies_kernel_condition(S, 0).holds);
    CHECK(satisfies_kernel_condition(cauchy_dual(S), 0).holds);
    auto d = d_sequence(S, 0, 5, true);
    for (int n = 0; n <= 5; ++n)
      CHECK(std::abs(d.values[n] - closed_form_table1(Table1Row::Kernel, x * x, n)) < 1e-10);
  }
}

TEST_CASE("dual is an involution and preserves the kernel condition") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> w(0.1, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto zoo = tree_zoo(5);
    auto tree = make_tree(zoo[trial % zoo.size()]);
    std::vector<double> ws(tree->size(), 0.0);
    for (std::size_t i = 1; i < ws.size(); ++i) ws[i] = w(rng);
    WeightedShift S(tree, ws);
    auto back = cauchy_dual(cauchy_dual(S));
    for (VertexIndex v = 1; v < tree->size(); ++v) CHECK(std::abs(back.weight(v) - S.weight(v)) < 1e-12);
    CHECK(satisfies_kernel_condition(S, 0).holds == satisfies_kernel_condition(cauchy_dual(S), 0).holds);
  }
}

TEST_CASE("two-isometries are expansive") {
  for (const auto& c : catalog()) {
    auto v = is_two_isometry(c.S);
    if (!v.holds) continue;
    const auto& t = c.S.tree();
    for (VertexIndex u = 0; u < t.size(); ++u)
      if (t.vertex(u).depth < c.S.depth()) CHECK(vertex_norm(c.S, u) >= 1.0 - 1e-9);
  }
}

TEST_CASE("adjacency on quasi-Brownian trees") {
  for (int l = 2; l <= 6; ++l) {
    auto r = classify_adjacency(make_tree(TreeSpec::quasi_brownian(l, 7)));
    CHECK(r.quasi_brownian_isometry.holds);
    CHECK_FALSE(r.brownian_isometry.holds);
  }
}

TEST_CASE("recurrence against the kernel row") {
  for (double x : {1.0, 1.2, std::sqrt(2.0), 1.4}) {
    auto S = build_shift(WeightSpec::kernel_condition(x), TreeSpec::t_eta_kappa(2, 0, 14));
    auto d = d_sequence(S, 0, 12, true);
    for (int n = 0; n <= 12; ++n)
      CHECK(std::abs(d.values[n] - closed_form_table1(Table1Row::Kernel, x * x, n)) < 1e-10);
  }
}

TEST_CASE("explicit dual moments on random glowny shifts") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ys(1.01, 1.41);
  for (int trial = 0; trial < 15; ++trial) {
    double y1 = ys(rng), y2 = ys(rng);
    if (std::abs(y1 - y2) < 1e-3) continue;
    auto S = build_shift(WeightSpec::glowny(y1, y2), TreeSpec::t_eta_kappa(2, 0, 12));
    auto d = d_sequence(S, 0, 10, true);
    for (int n = 1; n <= 10; ++n) CHECK(std::abs(dgraph_closed_form(S, 0, n) - d.values[n]) < 1e-10);

    // strict Cauchy-Schwarz gap
    const auto& t = S.tree();
    double lhs = 0;
    for (auto v : t.generation(1)) lhs += S.weight(v) * S.weight(v) / (2.0 - vertex_norm_sq(S, v));
    double rhs = std::pow(vertex_norm_sq(S, 0), 2);
    CHECK(lhs > rhs);
  }
  // equal y: the kernel-condition shift with the same child norms closes the gap
  for (double y : {1.1, 1.25, 1.4}) {
    auto S = build_shift(WeightSpec::kernel_condition(1.0 / std::sqrt(2.0 - y * y)),
                         TreeSpec::t_eta_kappa(2, 0, 6));
    double lhs = 0;
    for (auto v : S.tree().generation(1)) {
      CHECK(std::abs(vertex_norm(S, v) - y) < 1e-12);
      lhs += S.weight(v) * S.weight(v) / (2.0 - vertex_norm_sq(S, v));
    }
    CHECK(std::abs(lhs - std::pow(vertex_norm_sq(S, 0), 2)) < 1e-10);
  }
}

TEST_CASE("backward extension round trip") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> loc(0.05, 4.0), mass(0.01, 1.0);
  std::uniform_int_distribution<int> count(1, 8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Atom> a;
    int k = count(rng);
    for (int i = 0; i < k; ++i) a.push_back({loc(rng), mass(rng)});
    // rescale so that the integral of 1/t is a uniform draw in (0, 1]
    double inv = 0;
    for (const auto& x : a) inv += x.mass / x.location;
    double target = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    for (auto& x : a) x.mass *= target / inv;
    DiscreteMeasure mu(a);
    auto e = backward_extension(mu);
    CHECK(e.admissible);
    REQUIRE(e.nu);
    CHECK(std::abs(e.nu->mass_at(0.0) - (1.0 - target)) < 1e-12);
    auto over = backward_extension(mu.scaled(1.5 / target));
    CHECK_FALSE(over.admissible);
    CHECK_FALSE(over.nu);
    auto g = mu.moments(10);
    auto h = e.nu->moments(11);
    double scale = 0;
    for (double x : g) scale = std::max(scale, std::abs(x));
    for (int n = 0; n <= 10; ++n) CHECK(std::abs(h[n + 1] - g[n]) <= 1e-12 * (1.0 + scale));
  }
}

TEST_CASE("monotone limits and largest constants") {
  for (double x : {1.1, 1.3, 1.7}) {
    auto S = build_shift(WeightSpec::kernel_condition(x), TreeSpec::t_eta_kappa(2, 0, 40));
    auto d = d_sequence(S, 0, 38, true);
    for (int n = 1; n <= 38; ++n) {
      CHECK(d.values[n] <= d.values[n - 1] + 1e-15);
      CHECK(d.values[n] <= 1.0 / (1.0 + n * (x * x - 1.0)) + 1e-12);
    }
    CHECK(d.values[38] < 0.5);
    double norm2 = std::pow(operator_norm(S), 2);
    for (int n = 1; n <= 10; ++n)
      for (auto u : {VertexIndex{0}, S.tree().generation(3)[0], S.tree().generation(7)[1]})
        CHECK(d_sequence(S, u, n, true).values[n] >= 1.0 / (1.0 + n * (norm2 - 1.0)) - 1e-9);
  }
  for (double t : {2.0, 3.0, 5.0}) CHECK(std::abs(table1_rn(Table1Row::QuasiBrownian, t, 60) - 1.0 / (1.0 + t)) < 1e-12);

  auto Q = build_shift(WeightSpec::adjacency(), TreeSpec::quasi_brownian(3, 14));
  double s2 = std::pow(operator_norm(Q), 2);
  for (int n = 1; n <= 10; ++n)
    for (VertexIndex u : {VertexIndex{0}, Q.tree().generation(2)[0], Q.tree().generation(2)[4]})
      CHECK(d_sequence(Q, u, n, true).values[n] >= (1.0 + std::pow(s2, 1.0 - 2.0 * n)) / (1.0 + s2) - 1e-9);
}

TEST_CASE("Cauchy dual identities on truncations") {
  for (const auto& c : catalog()) {
    INFO(c.name);
    auto T = truncate(c.S);
    auto Tp = dual_matrix(T);
    auto blk = T.block(T.interior_depth);
    const auto& A = T.matrix;
    const auto& B = Tp.matrix;
    Eigen::MatrixXd one = (A.transpose() * B)(blk, blk);
    CHECK((one - Eigen::MatrixXd::Identity(one.rows(), one.cols())).norm() < 1e-10);

    // T'T* projects onto the range of T: symmetric, idempotent, fixes columns of T
    auto inner = T.block(T.interior_depth - 1);
    Eigen::MatrixXd P = B(Eigen::all, blk) * A(Eigen::all, blk).transpose();
    Eigen::MatrixXd Pi = P(inner, inner);
    CHECK((Pi - Pi.transpose()).norm() < 1e-10);
    CHECK(((P * P)(inner, inner) - Pi).norm() < 1e-10);
    auto inner2 = T.block(T.interior_depth - 2);
    for (auto j : inner2) CHECK((P * A.col(j) - A.col(j)).norm() < 1e-10);

    Eigen::MatrixXd G = (A.transpose() * A)(blk, blk);
    Eigen::MatrixXd Gp = (B.transpose() * B)(blk, blk);
    CHECK((G * Gp - Eigen::MatrixXd::Identity(G.rows(), G.cols())).norm() < 1e-10);
  }
}

TEST_CASE("2-isometries are m-isometries") {
  for (const auto& c : catalog()) {
    if (!is_two_isometry(c.S).holds) continue;
    INFO(c.name);
    auto T = truncate(c.S);
    for (int m : {2, 3, 4}) CHECK(block_norm(defect(T, m), T, T.interior_depth - m) < 1e-10);
  }
}

TEST_CASE("char-1 identity") {
  for (const auto& c : catalog()) {
    if (!is_two_isometry(c.S).holds || !satisfies_kernel_condition(c.S, 0).holds) continue;
    INFO(c.name);
    CHECK(char1_residual(truncate(c.S)) < 1e-9);
  }
  auto G = build_shift(WeightSpec::glowny(), TreeSpec::t_eta_kappa(2, 0, 10));
  CHECK(char1_residual(truncate(G)) >= 0.1);
}

TEST_CASE("Agler probe on the Bergman dual") {
  auto T = truncate(build_shift(WeightSpec::dirichlet(), TreeSpec::path(32)));
  auto Tp = dual_matrix(T);
  for (int m = 1; m <= 6; ++m) CHECK(defect(Tp, m)(0, 0) >= -1e-10);
}

TEST_CASE("symbolic and matrix layers agree") {
  for (const auto& c : catalog()) {
    INFO(c.name);
    auto T = truncate(c.S);
    auto Tp = dual_matrix(T);
    const auto& t = c.S.tree();
    for (int n = 0; n <= 3; ++n) {
      auto g = gram_diag(T, n);
      auto gp = gram_diag(Tp, n);
      for (std::size_t i = 0; i < g.basis.size(); ++i) {
        auto v = t.at(g.basis[i]);
        CHECK(std::abs(g.diag[i] - d_sequence(c.S, v, n, false).values[n]) < 1e-10);
        if (t.vertex(v).depth + n < c.S.depth())
          CHECK(std::abs(gp.diag[i] - d_sequence(c.S, v, n, true).values[n]) < 1e-10);
      }
    }
  }
}
