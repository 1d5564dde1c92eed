#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <sstream>

#include "cdual/app.hpp"
#include "cdual/errors.hpp"

namespace cdual {

namespace {

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

json finish(json j, bool matches, const std::string& expected, const std::string& conclusion) {
  j["expected"] = expected;
  j["conclusion"] = conclusion;
  j["matches"] = matches;
  return j;
}

json demo_dirichlet(const DemoOptions& o) {
  const int N = o.depth.value_or(64);
  auto S = build_shift(WeightSpec::dirichlet(), TreeSpec::path(N));
  auto two = is_two_isometry(S, o.tol);
  auto kc = satisfies_kernel_condition(S, 0, o.tol);
  SubnormalityOptions so;
  so.tol = o.tol;
  so.nmax = o.nmax.value_or(12);
  auto sub = dual_subnormality(S, so);
  auto t1 = verify_table1(S, Table1Row::Kernel, std::min(10, N - 1), o.tol);
  bool ok = two.holds && kc.holds && sub.path == "cdsubn" && sub.outcome == Outcome::Subnormal &&
            t1.max_deviation < 1e-9;
  json ev{{"two_isometry", to_json(two)},
          {"kernel_condition", to_json(kc)},
          {"dual_subnormality", to_json(sub)},
          {"table1_kernel_row", to_json(t1)}};
  return finish({{"demo", "dirichlet"}, {"evidence", ev}}, ok,
                "subnormal contraction; Table 1 row 2 verified",
                std::string(ok ? "subnormal contraction" : "unexpected verdict") +
                    "; Table 1 row 2 verified, max dev " + sci(t1.max_deviation));
}

json demo_bergman(const DemoOptions& o) {
  const int N = o.depth.value_or(32);
  auto S = build_shift(WeightSpec::dirichlet(), TreeSpec::path(N));
  auto B = build_shift(WeightSpec::bergman_dual(), TreeSpec::path(N));
  auto D = cauchy_dual(S);
  double wdev = max_abs_diff(D.weights(), B.weights());
  auto Dm = dual_matrix(truncate(S));
  auto Bm = truncate(B);
  auto cols = Bm.block(Bm.interior_depth);
  double mdev = (Dm.matrix(Eigen::all, cols) - Bm.matrix(Eigen::all, cols)).cwiseAbs().maxCoeff();
  auto seq = d_sequence(S, 0, std::min(o.nmax.value_or(12), N - 1), true);
  double sdev = 0.0;
  for (std::size_t n = 0; n < seq.values.size(); ++n)
    sdev = std::max(sdev, std::abs(seq.values[n] - 1.0 / (n + 1.0)));
  bool ok = wdev < 1e-12 && mdev < 1e-10 && sdev < 1e-12;
  json ev{{"weight_deviation", wdev}, {"matrix_deviation", mdev}, {"dual_root_moment_deviation", sdev}};
  return finish({{"demo", "bergman-dual"}, {"evidence", ev}}, ok,
                "Cauchy dual of the Dirichlet shift is the Bergman shift",
                ok ? "Cauchy dual of the Dirichlet shift is the Bergman shift (max weight dev " +
                         sci(wdev) + ")"
                   : "dual weights differ from the Bergman shift");
}

json demo_treiso(const DemoOptions& o) {
  const int N = o.depth.value_or(32);
  auto S = build_shift(WeightSpec::treiso(), TreeSpec::path(N));
  auto T = truncate(S);
  double b3 = block_norm(defect(T, 3), T, T.interior_depth - 3);
  double b2 = block_norm(defect(T, 2), T, T.interior_depth - 2);
  auto two = is_two_isometry(S, o.tol);
  double agler = defect(dual_matrix(T), 4)(0, 0);
  SubnormalityOptions so;
  so.tol = o.tol;
  so.nmax = o.nmax.value_or(12);
  so.require_two_isometry = false;
  auto sub = dual_subnormality(S, so);
  bool ok = b3 < 1e-10 && !two.holds && std::abs(agler + 12.0 / 85.0) < 1e-12 &&
            sub.outcome == Outcome::NotSubnormal;
  json ev{{"b3_interior_norm", b3},
          {"b2_interior_norm", b2},
          {"two_isometry", to_json(two)},
          {"agler_b4_dual_root", agler},
          {"agler_expected", -12.0 / 85.0},
          {"dual_subnormality", to_json(sub)}};
  return finish({{"demo", "treiso"}, {"evidence", ev}}, ok,
                "3-isometry whose Cauchy dual is NOT subnormal",
                ok ? "3-isometry (B_3 interior " + sci(b3) + "), Cauchy dual NOT subnormal; <B_4(T')e0,e0> = " +
                         std::to_string(agler)
                   : "unexpected verdict");
}

json demo_glowny(const DemoOptions& o) {
  const int N = o.depth.value_or(16);
  auto S = build_shift(WeightSpec::glowny(), TreeSpec::t_eta_kappa(2, 0, N));
  const auto& t = S.tree();
  auto two = is_two_isometry(S, o.tol);
  auto k0 = satisfies_kernel_condition(S, 0, o.tol);
  auto k1 = satisfies_kernel_condition(S, 1, o.tol);
  double cs = 0.0;
  for (auto v : t.vertex(0).children) cs += S.weight(v) * S.weight(v) / (2.0 - vertex_norm_sq(S, v));
  double r2 = vertex_norm_sq(S, 0);
  SubnormalityOptions so;
  so.tol = o.tol;
  so.nmax = o.nmax.value_or(12);
  auto sub = dual_subnormality(S, so);
  bool ok = two.holds && !k0.holds && k1.holds && cs > r2 * r2 && sub.path == "main2" &&
            sub.outcome == Outcome::NotSubnormal;
  std::string order = "none";
  if (!sub.evidence.empty() && sub.evidence.front().stieltjes.failing_order)
    order = std::to_string(*sub.evidence.front().stieltjes.failing_order);
  json ev{{"two_isometry", to_json(two)},
          {"kernel_condition_k0", to_json(k0)},
          {"kernel_condition_k1", to_json(k1)},
          {"sum_lambda2_over_2_minus_norm2", cs},
          {"root_norm_fourth_power", r2 * r2},
          {"dual_subnormality", to_json(sub)}};
  return finish({{"demo", "glowny"}, {"evidence", ev}}, ok,
                "NOT subnormal (main2 fast path)",
                ok ? "NOT subnormal (main2 fast path; Stieltjes failure at root, order " + order + ")"
                   : "unexpected verdict");
}

json demo_przadj(const DemoOptions& o) {
  const int l = 3;
  const int N = o.depth.value_or(16);
  auto S = build_shift(WeightSpec::adjacency(), przadj_tree(l, N));
  const auto& t = S.tree();
  const int nmax = std::min(o.nmax.value_or(12), N - 2);
  VertexIndex psi = *t.find_label("psi");
  auto spsi = d_sequence(S, psi, nmax, true);
  const double L = l;
  DiscreteMeasure mu({{0.25, 2.0 * (L - 1.0) / (3.0 * L * L)}, {1.0, (L + 2.0) / (3.0 * L * L)}});
  std::vector<double> shifted(spsi.values.begin() + 1, spsi.values.end());
  double mu_dev = max_abs_diff(shifted, mu.moments(nmax - 1));
  auto ext = backward_extension(mu);
  double nu_dev = max_abs_diff(spsi.values, ext.nu ? ext.nu->moments(nmax) : std::vector<double>{});
  auto rho = DiscreteMeasure::mixture({{(L - 1.0) / (L * L), DiscreteMeasure::dirac(1.0)},
                                       {1.0 / (L * L), ext.nu.value_or(DiscreteMeasure{})}});
  auto sroot = d_sequence(S, 0, std::min(o.nmax.value_or(12), N - 1), true);
  std::vector<double> rshift(sroot.values.begin() + 1, sroot.values.end());
  double rho_dev = max_abs_diff(rshift, rho.moments(static_cast<int>(rshift.size()) - 1));
  double rho0 = rho.mass_at(0.0);
  auto st = stieltjes_test(sroot, o.tol);
  SubnormalityOptions so;
  so.tol = o.tol;
  so.nmax = o.nmax.value_or(12);
  auto sub = dual_subnormality(S, so);
  const double expect0 = (L - 1.0) * (L - 2.0) / (L * L * L * L);
  bool ok = std::abs(ext.integral - (3.0 * L - 2.0) / (L * L)) < 1e-12 && ext.admissible &&
            std::abs(rho0 - expect0) < 1e-12 && mu_dev < 1e-12 && rho_dev < 1e-12 && !st.holds &&
            sub.outcome == Outcome::NotSubnormal;
  json ev{{"psi", t.id(psi)},
          {"mu", to_json(mu)},
          {"mu_moment_deviation", mu_dev},
          {"integral_inverse_t_mu", ext.integral},
          {"nu", ext.nu ? to_json(*ext.nu) : json(nullptr)},
          {"nu_moment_deviation", nu_dev},
          {"rho", to_json(rho)},
          {"rho_moment_deviation", rho_dev},
          {"rho_atom_at_0", rho0},
          {"root_stieltjes", to_json(st)},
          {"dual_subnormality", to_json(sub)}};
  return finish({{"demo", "przadj"}, {"evidence", ev}}, ok, "NOT subnormal; rho({0}) = 2/81",
                ok ? "NOT subnormal; rho({0}) = 2/81 (" + std::to_string(rho0) + ")"
                   : "unexpected verdict");
}

json demo_nbnkcsub(int l, const DemoOptions& o) {
  const int N = o.depth.value_or(14);
  auto S = build_shift(WeightSpec::adjacency(), nbnkcsub_tree(l, N));
  auto adj = classify_adjacency(S.tree_ptr(), o.tol);
  SubnormalityOptions so;
  so.tol = o.tol;
  so.nmax = o.nmax.value_or(12);
  auto sub = dual_subnormality(S, so);
  auto seq = d_sequence(S, 0, std::min(so.nmax, N - 1), true);
  double dev = 0.0;
  for (std::size_t n = 0; n < seq.values.size(); ++n)
    dev = std::max(dev, std::abs(seq.values[n] -
                                 closed_form_table1(Table1Row::AdjacencyPattern, l, static_cast<int>(n))));
  const bool qb_expected = l == 2;
  bool ok = adj.two_isometry.holds && !adj.kernel_condition.holds &&
            adj.quasi_brownian_isometry.holds == qb_expected && !adj.brownian_isometry.holds &&
            sub.outcome == Outcome::Subnormal && dev < 1e-10;
  json ev{{"l", l},
          {"adjacency", to_json(adj)},
          {"dual_subnormality", to_json(sub)},
          {"root_dual_sequence", seq.values},
          {"closed_form_deviation", dev}};
  std::string expected = "2-isometry, S' subnormal contraction, no kernel condition, quasi-Brownian iff l = 2";
  return finish({{"demo", "nbnkcsub-" + std::to_string(l)}, {"evidence", ev}}, ok, expected,
                ok ? "2-isometry with subnormal Cauchy dual (" + sub.path + "), kernel condition fails, " +
                         (qb_expected ? "quasi-Brownian" : "not quasi-Brownian")
                   : "unexpected verdict");
}

json demo_brownian(const DemoOptions& o) {
  const int N = o.depth.value_or(64);
  const double sigma = 1.0;
  auto T = build_brownian_shift(sigma, N);
  auto idx = T.block(T.interior_depth);
  Eigen::MatrixXd G = T.matrix.transpose() * T.matrix;
  Eigen::MatrixXd Dl = G(idx, idx) - Eigen::MatrixXd::Identity(idx.size(), idx.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Dl);
  double dnorm = es.eigenvalues().cwiseAbs().maxCoeff();
  int rank = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) rank += std::abs(es.eigenvalues()(i)) > 1e-9;
  double b2 = block_norm(defect(T, 2), T, T.interior_depth - 2);
  auto t1 = verify_table1(T, Table1Row::QuasiBrownian, std::min(10, N - 2), o.tol);
  auto Tp = dual_matrix(T);
  auto f = T.index_of("f");
  double r1 = Tp.matrix.col(f).squaredNorm();
  json trend = json::array();
  double prev = std::numeric_limits<double>::infinity();
  bool decreasing = true;
  for (double s : {1.0, 0.1, 0.01}) {
    auto Ts = build_brownian_shift(s, N);
    auto cols = Ts.block(Ts.interior_depth);
    double d = (Ts.matrix(Eigen::all, cols) - dual_matrix(Ts).matrix(Eigen::all, cols)).norm();
    decreasing = decreasing && d < prev;
    prev = d;
    trend.push_back({{"sigma", s}, {"norm_T_minus_Tdual", d}});
  }
  bool ok = std::abs(dnorm - sigma * sigma) < 1e-12 && rank == 1 && b2 < 1e-10 &&
            t1.max_deviation < 1e-9 && std::abs(r1 - 0.5) < 1e-12 && decreasing;
  json ev{{"sigma", sigma},
          {"norm_TstarT_minus_I", dnorm},
          {"defect_rank", rank},
          {"b2_interior_norm", b2},
          {"table1_quasi_brownian_row", to_json(t1)},
          {"r1_at_f", r1},
          {"dual_distance_trend", trend}};
  return finish({{"demo", "brownian-shift"}, {"evidence", ev}}, ok,
                "quasi-Brownian isometry; Table 1 row 3 verified",
                ok ? "quasi-Brownian isometry; Table 1 row 3 verified, max dev " + sci(t1.max_deviation)
                   : "unexpected verdict");
}

json demo_two_plus_three(const DemoOptions& o) {
  const int N = o.depth.value_or(8);
  auto t1 = make_tree(two_plus_three_tree(1, N));
  auto t2 = make_tree(two_plus_three_tree(2, N));
  auto a = shift_invariants(build_shift(WeightSpec::kernel_condition(1.2), t1), o.tol);
  auto b = shift_invariants(build_shift(WeightSpec::kernel_condition(1.2), t2), o.tol);
  auto c = shift_invariants(build_shift(WeightSpec::kernel_condition(1.3), t2), o.tol);
  bool same = are_unitarily_equivalent(a, b, o.tol);
  bool diff_x = are_unitarily_equivalent(a, c, o.tol);
  auto d1 = classify_tree(*t1).degree_multiset_per_generation;
  auto d2 = classify_tree(*t2).degree_multiset_per_generation;
  bool non_isomorphic = d1 != d2;
  bool ok = same && !diff_x && non_isomorphic;
  json ev{{"invariants_tree1_x1.2", to_json(a)},
          {"invariants_tree2_x1.2", to_json(b)},
          {"invariants_tree2_x1.3", to_json(c)},
          {"equivalent_same_x", same},
          {"equivalent_different_x", diff_x},
          {"degree_patterns_differ", non_isomorphic}};
  return finish({{"demo", "two-plus-three"}, {"evidence", ev}}, ok,
                "unitarily equivalent shifts on non-isomorphic trees",
                ok ? "unitarily equivalent shifts on non-isomorphic trees" : "unexpected verdict");
}

json demo_mewa(const DemoOptions& o) {
  const int N = o.depth.value_or(8);
  auto q = classify_adjacency(make_tree(TreeSpec::quasi_brownian(3, N)), o.tol);
  auto p = classify_adjacency(make_tree(TreeSpec::path(N)), o.tol);
  bool ok = q.two_isometry.holds && q.quasi_brownian_isometry.holds && !q.brownian_isometry.holds &&
            !q.kernel_condition.holds && p.brownian_isometry.holds && p.quasi_brownian_isometry.holds;
  json ev{{"quasi_brownian_tree_l3", to_json(q)}, {"path", to_json(p)}};
  return finish({{"demo", "mewa-distinction"}, {"evidence", ev}}, ok,
                "quasi-Brownian but not Brownian on the valency-3 tree; Brownian on the path",
                ok ? "quasi-Brownian but not Brownian on the valency-3 tree; Brownian on the path"
                   : "unexpected verdict");
}

}  // namespace

const std::vector<std::string>& demo_catalog() {
  static const std::vector<std::string> cat{
      "dirichlet",  "bergman-dual", "treiso",         "glowny",         "przadj",          "nbnkcsub-2",
      "nbnkcsub-3", "nbnkcsub-4",   "brownian-shift", "two-plus-three", "mewa-distinction"};
  return cat;
}

json demo_result(const std::string& name, const DemoOptions& o) {
  if (name == "dirichlet") return demo_dirichlet(o);
  if (name == "bergman-dual") return demo_bergman(o);
  if (name == "treiso") return demo_treiso(o);
  if (name == "glowny") return demo_glowny(o);
  if (name == "przadj") return demo_przadj(o);
  if (name == "brownian-shift") return demo_brownian(o);
  if (name == "two-plus-three") return demo_two_plus_three(o);
  if (name == "mewa-distinction") return demo_mewa(o);
  if (name.rfind("nbnkcsub-", 0) == 0) {
    int l = 0;
    try {
      std::size_t used = 0;
      l = std::stoi(name.substr(9), &used);
      if (used != name.size() - 9) l = 0;
    } catch (const std::exception&) {
      l = 0;
    }
    if (l >= 2) return demo_nbnkcsub(l, o);
  }
  std::string list;
  for (const auto& c : demo_catalog()) list += (list.empty() ? "" : ", ") + c;
  throw ConfigurationError("unknown demo '" + name + "'; catalog: " + list);
}

Report run_demo(const std::string& name, const DemoOptions& opts) {
  Report rep;
  rep.input_digest = fnv1a_digest("demo:" + name + ";tol=" + std::to_string(opts.tol) +
                                 ";nmax=" + std::to_string(opts.nmax.value_or(-1)) +
                                 ";depth=" + std::to_string(opts.depth.value_or(-1)));
  CommandResult cr;
  cr.name = "demo";
  auto t0 = std::chrono::steady_clock::now();
  cr.result = demo_result(name, opts);
  cr.wall_clock_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  bool ok = cr.result["matches"].get<bool>();
  cr.status = ok ? "ok" : "failed";
  rep.exit_code = ok ? 0 : 1;
  rep.commands.push_back(std::move(cr));
  return rep;
}

}  // namespace cdual
