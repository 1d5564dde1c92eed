#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cdual/errors.hpp"
#include "cdual/matrix_oracle.hpp"

using namespace cdual;
using doctest::Approx;

TEST_CASE("truncate") {
  auto T = truncate(build_shift(WeightSpec::adjacency(), TreeSpec::path(4)));
  CHECK(T.dim() == 5);
  Eigen::MatrixXd sub = Eigen::MatrixXd::Zero(5, 5);
  for (int i = 0; i < 4; ++i) sub(i + 1, i) = 1.0;
  CHECK((T.matrix - sub).norm() == 0.0);
  CHECK(T.interior_depth == 3);

  auto D = truncate(build_shift(WeightSpec::dirichlet(), TreeSpec::path(3)));
  CHECK(D.matrix(1, 0) == Approx(std::sqrt(2.0)));
  CHECK(D.matrix(2, 1) == Approx(std::sqrt(1.5)));
  CHECK(D.matrix(3, 2) == Approx(std::sqrt(4.0 / 3)));

  auto G = truncate(build_shift(WeightSpec::glowny(), TreeSpec::t_eta_kappa(2, 0, 3)));
  CHECK(G.dim() == 7);
  CHECK(G.block(1).size() == 3);
}

TEST_CASE("defects") {
  auto iso = truncate(build_shift(WeightSpec::adjacency(), TreeSpec::path(10)));
  CHECK(block_norm(defect(iso, 1), iso, iso.interior_depth - 1) < 1e-12);
  auto dir = truncate(build_shift(WeightSpec::dirichlet(), TreeSpec::path(32)));
  CHECK(block_norm(defect(dir, 2), dir, dir.interior_depth - 2) < 1e-10);
  CHECK(block_norm(defect(dir, 1), dir, dir.interior_depth - 1) > 0.1);
  auto tri = truncate(build_shift(WeightSpec::treiso(), TreeSpec::path(32)));
  CHECK(block_norm(defect(tri, 3), tri, tri.interior_depth - 3) < 1e-10);
  CHECK(block_norm(defect(tri, 2), tri, tri.interior_depth - 2) > 1e-3);
  CHECK_THROWS_AS(defect(iso, 20), RangeError);
}

TEST_CASE("dual_matrix") {
  auto dir = build_shift(WeightSpec::dirichlet(), TreeSpec::path(20));
  auto T = truncate(dir);
  auto Tp = dual_matrix(T);
  auto B = truncate(build_shift(WeightSpec::bergman_dual(), TreeSpec::path(20)));
  int d = T.interior_depth;
  auto cols = T.block(d);
  for (auto j : cols) CHECK((Tp.matrix.col(j) - B.matrix.col(j)).norm() < 1e-12);

  auto iso = truncate(build_shift(WeightSpec::adjacency(), TreeSpec::path(10)));
  auto isop = dual_matrix(iso);
  for (auto j : iso.block(iso.interior_depth)) CHECK((isop.matrix.col(j) - iso.matrix.col(j)).norm() < 1e-14);

  auto g = build_shift(WeightSpec::glowny(), TreeSpec::t_eta_kappa(2, 0, 8));
  auto gt = truncate(g);
  auto gp = dual_matrix(gt);
  auto sym = truncate(cauchy_dual(g));
  for (auto j : gt.block(gt.interior_depth)) CHECK((gp.matrix.col(j) - sym.matrix.col(j)).norm() < 1e-12);

  // T*T' = I on interior columns
  Eigen::MatrixXd I = gt.matrix.transpose() * gp.matrix;
  auto blk = gt.block(gt.interior_depth);
  Eigen::MatrixXd sub = I(blk, blk);
  CHECK((sub - Eigen::MatrixXd::Identity(sub.rows(), sub.cols())).norm() < 1e-12);

  using E = std::vector<std::pair<std::string, std::string>>;
  auto zero = build_shift(WeightSpec::explicit_map({{"a", 0.0}, {"b", 1.0}, {"c", 1.0}}),
                          TreeSpec::explicit_edges(E{{"r", "a"}, {"a", "b"}, {"b", "c"}}, 3));
  CHECK_THROWS_AS(dual_matrix(truncate(zero)), NotLeftInvertibleError);
}

TEST_CASE("gram_diag") {
  auto T = truncate(build_shift(WeightSpec::glowny(), TreeSpec::t_eta_kappa(2, 0, 8)));
  auto g0 = gram_diag(T, 0);
  for (double v : g0.diag) CHECK(v == 1.0);
  auto dir = truncate(build_shift(WeightSpec::dirichlet(), TreeSpec::path(20)));
  auto dd = gram_diag(dual_matrix(dir), 2);
  CHECK(dd.diag.at(0) == Approx(1.0 / 3).epsilon(1e-13));
  CHECK(dd.max_offdiag < 1e-12);
  auto p = truncate(build_shift(WeightSpec::adjacency(), przadj_tree(3, 6)));
  CHECK(gram_diag(dual_matrix(p), 1).diag.at(0) == Approx(1.0 / 3).epsilon(1e-13));
  CHECK_THROWS_AS(gram_diag(T, T.interior_depth + 1), RangeError);
}

TEST_CASE("verify_table1") {
  auto dir = build_shift(WeightSpec::dirichlet(), TreeSpec::path(64));
  auto r = verify_table1(dir, Table1Row::Kernel, 10);
  CHECK(r.within(1e-9));
  CHECK(r.deviation_per_n.size() == 10);

  auto b = build_brownian_shift(1.0, 64);
  CHECK(verify_table1(b, Table1Row::QuasiBrownian, 10).within(1e-9));

  auto n2 = build_shift(WeightSpec::adjacency(), nbnkcsub_tree(2, 12));
  CHECK(verify_table1(n2, Table1Row::AdjacencyPattern, 8).within(1e-9));
  CHECK(verify_table1(n2, Table1Row::QuasiBrownian, 8).within(1e-9));

  auto n3 = build_shift(WeightSpec::adjacency(), nbnkcsub_tree(3, 12));
  CHECK(verify_table1(n3, Table1Row::AdjacencyPattern, 8).within(1e-9));
  CHECK_THROWS_AS(verify_table1(n3, Table1Row::QuasiBrownian, 8), ClassificationError);

  auto g = build_shift(WeightSpec::glowny(), TreeSpec::t_eta_kappa(2, 0, 10));
  CHECK_THROWS_AS(verify_table1(g, Table1Row::Kernel, 4), ClassificationError);
  CHECK_THROWS_AS(verify_table1(b, Table1Row::Kernel, 4), ClassificationError);
  CHECK_THROWS_AS(verify_table1(b, Table1Row::AdjacencyPattern, 4), ClassificationError);
}

TEST_CASE("char1 residual") {
  auto K = truncate(build_shift(WeightSpec::kernel_condition(1.3), TreeSpec::t_eta_kappa(2, 0, 12)));
  CHECK(char1_residual(K) < 1e-9);
  auto G = truncate(build_shift(WeightSpec::glowny(), TreeSpec::t_eta_kappa(2, 0, 12)));
  CHECK(char1_residual(G) >= 0.1);
}

TEST_CASE("Brownian shift") {
  auto b = build_brownian_shift(1.0, 16);
  Eigen::MatrixXd G = b.matrix.transpose() * b.matrix;
  auto blk = b.block(b.interior_depth);
  Eigen::MatrixXd D = G(blk, blk) - Eigen::MatrixXd::Identity(blk.size(), blk.size());
  CHECK(D.norm() == Approx(1.0).epsilon(1e-12));
  CHECK(block_norm(defect(b, 2), b, b.interior_depth - 2) < 1e-12);
  auto f = b.index_of("f");
  auto r1 = gram_diag(dual_matrix(b), 1);
  for (std::size_t i = 0; i < r1.basis.size(); ++i)
    if (r1.basis[i] == b.basis[f]) CHECK(r1.diag[i] == Approx(0.5).epsilon(1e-12));

  double prev = 1e9;
  for (double s : {0.5, 0.1, 0.01}) {
    auto t = build_brownian_shift(s, 16);
    auto tp = dual_matrix(t);
    double diff = 0;
    for (auto j : t.block(t.interior_depth)) diff = std::max(diff, (t.matrix.col(j) - tp.matrix.col(j)).norm());
    CHECK(diff < prev);
    prev = diff;
  }
  CHECK_THROWS_AS(build_brownian_shift(0.0, 8), DomainError);
  CHECK_THROWS_AS(build_brownian_shift(1.0, 3), RangeError);
}

TEST_CASE("operator-valued weighted shifts") {
  auto o = ovws_from_atoms({{std::sqrt(2.0), 1}}, 12);
  auto d = truncate(build_shift(WeightSpec::dirichlet(), TreeSpec::path(12)));
  REQUIRE(o.op.dim() == d.dim());
  CHECK((o.op.matrix - d.matrix).norm() < 1e-14);

  auto iso = ovws_from_atoms({{1.0, 3}}, 6);
  Eigen::MatrixXd G = iso.op.matrix.transpose() * iso.op.matrix;
  auto blk = iso.op.block(iso.op.interior_depth);
  CHECK((G(blk, blk) - Eigen::MatrixXd::Identity(blk.size(), blk.size())).norm() < 1e-14);
  CHECK(iso.summands.size() == 3);

  auto m = ovws_from_atoms({{std::sqrt(2.0), 1}, {1.2, 2}}, 10);
  CHECK(m.labels.size() == 2);
  CHECK(block_norm(defect(m.op, 2), m.op, m.op.interior_depth - 2) < 1e-12);
  auto comps = scalar_components(m.op);
  CHECK(comps.size() == 3);
  CHECK_THROWS_AS(ovws_from_atoms({{0.9, 1}}, 6), DomainError);
}

TEST_CASE("direct sums and matrix dump") {
  auto a = truncate(build_shift(WeightSpec::dirichlet(), TreeSpec::path(6)));
  auto b = build_brownian_shift(1.0, 5);
  auto s = direct_sum({a, b});
  CHECK(s.dim() == a.dim() + b.dim());
  CHECK(s.interior_depth == std::min(a.interior_depth, b.interior_depth));
  CHECK((s.matrix.topLeftCorner(a.dim(), a.dim()) - a.matrix).norm() == 0.0);
  CHECK(s.matrix.topRightCorner(a.dim(), b.dim()).norm() == 0.0);

  std::ostringstream os;
  write_matrix(os, truncate(build_shift(WeightSpec::adjacency(), TreeSpec::path(2))));
  CHECK(os.str() == "0 0 0\n1 0 0\n0 1 0\n");
}
