#include <doctest.h>

#include <cmath>
#include <limits>

#include "cdual/errors.hpp"
#include "cdual/moments.hpp"

using namespace cdual;
using doctest::Approx;

namespace {

MomentSequence seq(std::vector<double> v) { return {std::move(v), "test"}; }

// Independent dual d-sequence: apply the dual weights directly, vertex by vertex.
std::vector<double> brute_dual_d(const WeightedShift& S, VertexIndex u, int nmax) {
  const auto& t = S.tree();
  auto dual_w = [&](VertexIndex v) {
    VertexIndex p = *t.vertex(v).parent;
    double s = 0;
    for (auto c : t.vertex(p).children) s += S.weight(c) * S.weight(c);
    return S.weight(v) / s;
  };
  std::vector<double> out{1.0};
  std::vector<std::pair<VertexIndex, double>> front{{u, 1.0}};
  for (int n = 1; n <= nmax; ++n) {
    std::vector<std::pair<VertexIndex, double>> next;
    double total = 0;
    for (auto [v, w] : front)
      for (auto c : t.vertex(v).children) {
        double x = w * dual_w(c) * dual_w(c);
        next.push_back({c, x});
        total += x;
      }
    out.push_back(total);
    front = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("d_sequence basics") {
  auto S = build_shift(WeightSpec::dirichlet(), TreeSpec::path(20));
  auto d = d_sequence(S, 0, 10, false);
  CHECK(d.values[0] == 1.0);
  for (int n = 0; n <= 10; ++n) CHECK(d.values[n] == Approx(n + 1.0).epsilon(1e-13));
  auto dd = d_sequence(S, 0, 10, true);
  for (int n = 0; n <= 10; ++n) CHECK(dd.values[n] == Approx(1.0 / (n + 1.0)).epsilon(1e-13));
  CHECK_THROWS_AS(d_sequence(S, 0, 20, true), RangeError);
  CHECK_NOTHROW(d_sequence(S, 0, 20, false));
  CHECK_THROWS_AS(d_sequence(S, 0, 21, false), RangeError);

  auto P = build_shift(WeightSpec::adjacency(), przadj_tree(3, 6));
  CHECK(d_sequence(P, 0, 1, true).values[1] == Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("d_sequence matches a brute-force oracle on glowny") {
  auto S = build_shift(WeightSpec::glowny(), TreeSpec::t_eta_kappa(2, 0, 14));
  auto oracle = brute_dual_d(S, 0, 12);
  auto d = d_sequence(S, 0, 12, true);
  for (int n = 0; n <= 12; ++n) CHECK(std::abs(d.values[n] - oracle[n]) < 1e-14);
}

TEST_CASE("Table 1 closed forms") {
  CHECK(closed_form_table1(Table1Row::Kernel, 2.0, 3) == Approx(0.25).epsilon(1e-15));
  for (int n = 0; n < 20; ++n) CHECK(closed_form_table1(Table1Row::QuasiBrownian, 1.0, n) == 1.0);
  CHECK(closed_form_table1(Table1Row::AdjacencyPattern, 2.0, 2) == Approx(0.375).epsilon(1e-15));
  CHECK(closed_form_table1(Table1Row::QuasiBrownian, 2.0, 2) == Approx(0.375).epsilon(1e-15));
  CHECK(closed_form_table1(Table1Row::AdjacencyPattern, 3.0, 0) == 1.0);
  CHECK(closed_form_table1(Table1Row::Isometry, 5.0, 7) == 1.0);
  CHECK_THROWS_AS(closed_form_table1(Table1Row::AdjacencyPattern, 2.5, 1), DomainError);
  CHECK_THROWS_AS(closed_form_table1(Table1Row::AdjacencyPattern, 1.0, 1), DomainError);
  CHECK_THROWS_AS(closed_form_table1(Table1Row::Kernel, 0.5, 1), DomainError);
  CHECK_THROWS_AS(closed_form_table1(Table1Row::Kernel, 2.0, -1), DomainError);
}

TEST_CASE("dgraph closed form") {
  auto S = build_shift(WeightSpec::glowny(1.1, 1.3), TreeSpec::t_eta_kappa(2, 0, 14));
  const auto& t = S.tree();
  auto c = t.generation(1);
  double x1 = S.weight(c[0]), x2 = S.weight(c[1]);
  double r4 = std::pow(x1 * x1 + x2 * x2, 2);
  CHECK(r4 == Approx(5.043683).epsilon(1e-6));
  double expect2 = (x1 * x1 / 1.21 + x2 * x2 / 1.69) / r4;
  CHECK(dgraph_closed_form(S, 0, 2) == Approx(expect2).epsilon(1e-13));
  auto d = d_sequence(S, 0, 12, true);
  for (int n = 1; n <= 12; ++n) CHECK(std::abs(dgraph_closed_form(S, 0, n) - d.values[n]) < 1e-10);
  for (auto v : c) {
    auto dv = d_sequence(S, v, 10, true);
    CHECK(dgraph_closed_form(S, v, 1) == Approx(1.0 / vertex_norm_sq(S, v)).epsilon(1e-14));
    for (int n = 1; n <= 10; ++n) CHECK(std::abs(dgraph_closed_form(S, v, n) - dv.values[n]) < 1e-10);
  }
  auto K = build_shift(WeightSpec::kernel_condition(1.3), TreeSpec::t_eta_kappa(2, 0, 10));
  for (int n = 1; n <= 8; ++n)
    CHECK(dgraph_closed_form(K, 0, n) == Approx(1.0 / (1.0 + n * (1.69 - 1.0))).epsilon(1e-13));
  auto A = build_shift(WeightSpec::adjacency(), make_tree(TreeSpec::t_eta_kappa(2, 0, 6)));
  CHECK_THROWS_AS(dgraph_closed_form(A, 0, 2), ClassificationError);
}

TEST_CASE("stieltjes_test") {
  std::vector<double> h, c;
  for (int n = 0; n <= 16; ++n) {
    h.push_back(1.0 / (n + 1));
    c.push_back(3.0);
  }
  auto vh = stieltjes_test(seq(h));
  CHECK(vh.holds);
  CHECK(vh.checked_order == 8);
  CHECK(stieltjes_test(seq(c)).holds);
  auto r = stieltjes_test(seq(c));
  REQUIRE(r.certificate);
  CHECK(r.certificate->mass_at(1.0) == Approx(3.0).epsilon(1e-9));

  auto S = build_shift(WeightSpec::glowny(), TreeSpec::t_eta_kappa(2, 0, 14));
  auto g = stieltjes_test(d_sequence(S, 0, 12, true));
  CHECK_FALSE(g.holds);
  REQUIRE(g.failing_order);
  CHECK(*g.failing_order == 5);
  CHECK(g.min_value == Approx(-1.45881e-7).epsilon(1e-4));

  std::vector<double> neg{1.0, -0.5, 1.0};
  CHECK_FALSE(stieltjes_test(seq(neg)).holds);
  CHECK_THROWS_AS(stieltjes_test(seq({1.0, 1.0})), RangeError);
}

TEST_CASE("hausdorff_test") {
  std::vector<double> h, p, q;
  for (int n = 0; n <= 20; ++n) {
    h.push_back(1.0 / (n + 1));
    p.push_back(std::pow(2.0, n));
    q.push_back((1.0 + std::pow(2.0, 1 - 2 * n)) / 3.0);
  }
  CHECK(hausdorff_test(seq(h)).holds);
  auto f = hausdorff_test(seq(p));
  CHECK_FALSE(f.holds);
  REQUIRE(f.failing_order);
  CHECK(*f.failing_order == 1);
  CHECK(hausdorff_test(seq(q)).holds);
  CHECK_THROWS_AS(hausdorff_test(seq({1.0})), RangeError);
}

TEST_CASE("mu_ab_moments") {
  auto a = mu_ab_moments(1, 0, 8);
  for (double v : a.sequence.values) CHECK(v == 1.0);
  REQUIRE(a.measure);
  CHECK(a.measure->discretize().mass_at(1.0) == Approx(1.0));
  auto b = mu_ab_moments(1, 1, 8);
  for (int n = 0; n <= 8; ++n) CHECK(b.sequence.values[n] == Approx(1.0 / (1 + n)));
  CHECK(b.hamburger);
  CHECK(b.description.find("[0,1]") != std::string::npos);
  auto bad = mu_ab_moments(-0.5, 1, 8);
  CHECK_FALSE(bad.hamburger);
  CHECK_FALSE(bad.measure);
  CHECK_THROWS_AS(mu_ab_moments(-1.0, 1.0, 4), DomainError);
}

TEST_CASE("mu_ab quadrature reproduces the exact moments") {
  for (auto [a, b] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {3.0, 2.0}, {0.5, 3.0}}) {
    auto m = MuAB{a, b}.discretize(64);
    for (int n = 0; n <= 30; ++n) CHECK(m.moment(n) == Approx(1.0 / (a + b * n)).epsilon(1e-11));
  }
}

TEST_CASE("backward extension") {
  auto d = backward_extension(DiscreteMeasure::dirac(1.0));
  CHECK(d.admissible);
  CHECK(d.integral == Approx(1.0));
  REQUIRE(d.nu);
  CHECK(d.nu->mass_at(1.0) == Approx(1.0));
  CHECK(d.nu->mass_at(0.0) == 0.0);

  DiscreteMeasure mu({{0.25, 4.0 / 27}, {1.0, 5.0 / 27}});
  auto e = backward_extension(mu);
  CHECK(e.admissible);
  CHECK(e.integral == Approx(7.0 / 9).epsilon(1e-14));
  REQUIRE(e.nu);
  CHECK(e.nu->mass_at(0.0) == Approx(2.0 / 9).epsilon(1e-14));

  DiscreteMeasure rho({{0.0, 2.0 / 81}, {1.0, 0.5}});
  auto r = backward_extension(rho);
  CHECK_FALSE(r.admissible);
  CHECK(r.integral == std::numeric_limits<double>::infinity());

  auto big = backward_extension(DiscreteMeasure::dirac(0.5));
  CHECK_FALSE(big.admissible);
  CHECK(big.integral == Approx(2.0));
}

TEST_CASE("atomic measure recovery") {
  DiscreteMeasure mu({{0.0, 0.1}, {0.3, 0.4}, {1.7, 0.25}});
  auto g = mu.moments(8);
  auto r = recover_atomic_measure(g);
  REQUIRE(r);
  REQUIRE(r->size() == 3);
  CHECK(r->mass_at(0.0) == Approx(0.1).epsilon(1e-8));
  CHECK(r->mass_at(0.3, 1e-8) == Approx(0.4).epsilon(1e-8));
  std::vector<double> h;
  for (int n = 0; n <= 8; ++n) h.push_back(1.0 / (n + 1));
  CHECK_FALSE(recover_atomic_measure(h));
}

TEST_CASE("dual_subnormality decision paths") {
  auto d = dual_subnormality(build_shift(WeightSpec::dirichlet(), TreeSpec::path(40)));
  CHECK(d.outcome == Outcome::Subnormal);
  CHECK(d.path == "cdsubn");
  REQUIRE(d.closed_form_deviation);
  CHECK(*d.closed_form_deviation < 1e-10);

  auto g = dual_subnormality(build_shift(WeightSpec::glowny(), TreeSpec::t_eta_kappa(2, 0, 14)));
  CHECK(g.outcome == Outcome::NotSubnormal);
  CHECK(g.path == "main2");
  REQUIRE(g.perturbation_k);
  CHECK(*g.perturbation_k == 1);

  auto p = dual_subnormality(build_shift(WeightSpec::adjacency(), przadj_tree(3, 14)));
  CHECK(p.outcome == Outcome::NotSubnormal);
  CHECK(p.path == "generic-moment-test");

  auto q = dual_subnormality(build_shift(WeightSpec::adjacency(), TreeSpec::quasi_brownian(3, 14)));
  CHECK(q.outcome == Outcome::Subnormal);
  CHECK(q.path == "BrownianG");

  auto n3 = dual_subnormality(build_shift(WeightSpec::adjacency(), nbnkcsub_tree(3, 14)));
  CHECK(n3.outcome == Outcome::Subnormal);
  CHECK(n3.path == "constant-t");

  auto adjT = build_shift(WeightSpec::adjacency(), TreeSpec::t_eta_kappa(2, 0, 8));
  CHECK_THROWS_AS(dual_subnormality(adjT), ClassificationError);

  SubnormalityOptions o;
  o.require_two_isometry = false;
  auto t = dual_subnormality(build_shift(WeightSpec::treiso(), TreeSpec::path(32)), o);
  CHECK(t.outcome == Outcome::NotSubnormal);
  CHECK(t.path == "generic-moment-test");
}
