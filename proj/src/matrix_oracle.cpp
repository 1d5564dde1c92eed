#include "cdual/matrix_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "cdual/errors.hpp"

namespace cdual {

std::vector<Eigen::Index> TruncatedOperator::block(int d) const {
  std::vector<Eigen::Index> out;
  for (std::size_t i = 0; i < depths.size(); ++i)
    if (depths[i] <= d) out.push_back(static_cast<Eigen::Index>(i));
  return out;
}

Eigen::Index TruncatedOperator::index_of(const std::string& label) const {
  auto it = std::find(basis.begin(), basis.end(), label);
  if (it == basis.end()) throw RangeError("no basis vector '" + label + "'");
  return it - basis.begin();
}

TruncatedOperator truncate(const WeightedShift& S) {
  const auto& t = S.tree();
  TruncatedOperator T;
  const auto n = static_cast<Eigen::Index>(t.size());
  T.matrix = Eigen::MatrixXd::Zero(n, n);
  for (VertexIndex u = 0; u < t.size(); ++u) {
    T.basis.push_back(t.id(u));
    T.depths.push_back(t.vertex(u).depth);
    for (auto c : t.vertex(u).children)
      T.matrix(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(u)) = S.weight(c);
  }
  T.interior_depth = t.materialized_depth() - 1;
  return T;
}

Eigen::MatrixXd defect(const TruncatedOperator& T, int m) {
  if (m < 1) throw DomainError("defect order must be >= 1");
  if (T.interior_depth < m)
    throw RangeError("defect B_" + std::to_string(m) + " needs interior depth >= " +
                     std::to_string(m) + ", have " + std::to_string(T.interior_depth));
  const auto n = T.matrix.rows();
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  double binom = 1.0;
  for (int k = 0; k <= m; ++k) {
    B += ((k % 2) ? -binom : binom) * (P.transpose() * P);
    binom = binom * (m - k) / (k + 1);
    P = T.matrix * P;
  }
  return B;
}

Eigen::MatrixXd sub_block(const Eigen::MatrixXd& M, const TruncatedOperator& T, int d) {
  auto idx = T.block(d);
  return M(idx, idx);
}

double block_norm(const Eigen::MatrixXd& M, const TruncatedOperator& T, int d) {
  auto idx = T.block(d);
  if (idx.empty()) return 0.0;
  return M(idx, idx).norm();
}

namespace {

std::vector<Eigen::Index> complement(const std::vector<Eigen::Index>& idx, Eigen::Index n) {
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  for (auto i : idx) in[static_cast<std::size_t>(i)] = true;
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < n; ++i)
    if (!in[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

struct InteriorGram {
  std::vector<Eigen::Index> idx;
  Eigen::MatrixXd vecs;
  Eigen::VectorXd vals;
};

InteriorGram interior_gram(const TruncatedOperator& T) {
  InteriorGram g;
  g.idx = T.block(T.interior_depth);
  if (g.idx.empty()) throw RangeError("empty interior block");
  Eigen::MatrixXd G = T.matrix.transpose() * T.matrix;
  auto rest = complement(g.idx, G.rows());
  const double scale = 1.0 + G.cwiseAbs().maxCoeff();
  if (!rest.empty() && G(g.idx, rest).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw RangeError("T*T does not decouple interior from boundary");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G(g.idx, g.idx));
  g.vecs = es.eigenvectors();
  g.vals = es.eigenvalues();
  if (g.vals(0) <= 1e-14 * scale) {
    Eigen::Index k;
    g.vecs.col(0).cwiseAbs().maxCoeff(&k);
    const auto& w = T.basis[static_cast<std::size_t>(g.idx[static_cast<std::size_t>(k)])];
    throw NotLeftInvertibleError("T*T is singular on the interior block (near '" + w + "')", w);
  }
  return g;
}

template <class F>
Eigen::MatrixXd spectral(const InteriorGram& g, F f) {
  Eigen::VectorXd d = g.vals.unaryExpr(f);
  return g.vecs * d.asDiagonal() * g.vecs.transpose();
}

double max_abs(const Eigen::MatrixXd& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TruncatedOperator dual_matrix(const TruncatedOperator& T) {
  auto g = interior_gram(T);
  Eigen::MatrixXd inv = spectral(g, [](double x) { return 1.0 / x; });
  TruncatedOperator D = T;
  D.matrix.setZero();
  D.matrix(Eigen::all, g.idx) = T.matrix(Eigen::all, g.idx) * inv;
  return D;
}

GramDiag gram_diag(const TruncatedOperator& T, int n) {
  if (n < 0 || n > T.interior_depth)
    throw RangeError("gram_diag power " + std::to_string(n) + " outside [0, " +
                     std::to_string(T.interior_depth) + "]");
  const auto dim = T.matrix.rows();
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(dim, dim);
  for (int k = 0; k < n; ++k) P = T.matrix * P;
  Eigen::MatrixXd G = P.transpose() * P;
  GramDiag r;
  r.block_depth = T.interior_depth - n;
  auto idx = T.block(r.block_depth);
  Eigen::MatrixXd B = G(idx, idx);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    r.basis.push_back(T.basis[static_cast<std::size_t>(idx[i])]);
    r.diag.push_back(B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
  }
  B.diagonal().setZero();
  r.max_offdiag = max_abs(B);
  return r;
}

double char1_residual(const TruncatedOperator& T) {
  const int d = T.interior_depth - 2;
  if (d < 0) throw RangeError("char-1 identity needs interior depth >= 2");
  auto D = dual_matrix(T);
  const Eigen::MatrixXd& A = T.matrix;
  Eigen::MatrixXd R = D.matrix - 2.0 * A + A.transpose() * A * A;
  auto cols = T.block(d);
  return R(Eigen::all, cols).norm();
}

namespace {

void matrix_class_check(const TruncatedOperator& T, Table1Row row, double tol,
                        std::vector<std::string>& notes) {
  auto fail = [&](const std::string& what) {
    throw ClassificationError("operator is not in the class of the " +
                              std::string(to_string(row)) + " row: " + what);
  };
  std::ostringstream os;
  os.precision(3);
  if (row == Table1Row::AdjacencyPattern) fail("this row needs a tree source");
  if (row == Table1Row::Isometry) {
    auto idx = T.block(T.interior_depth);
    Eigen::MatrixXd G = T.matrix.transpose() * T.matrix;
    double r = max_abs(G(idx, idx) - Eigen::MatrixXd::Identity(idx.size(), idx.size()));
    if (r > tol) fail("T*T != I");
    notes.push_back("matrix: T*T = I on interior");
    return;
  }
  if (T.interior_depth < 2) fail("interior too shallow for B_2");
  double b2 = block_norm(defect(T, 2), T, T.interior_depth - 2);
  if (b2 > tol) fail("B_2 interior norm " + std::to_string(b2));
  os << "matrix: B_2 interior norm " << b2;
  notes.push_back(os.str());
  if (row == Table1Row::Kernel) {
    double c = char1_residual(T);
    if (c > tol) fail("T' - 2T + T*T^2 interior norm " + std::to_string(c));
    notes.push_back("matrix: T' = 2T - T*T^2 on interior");
    return;
  }
  // quasi-Brownian: Δ T = Δ^{1/2} T Δ^{1/2}
  auto g = interior_gram(T);
  if (g.vals(0) < 1.0 - tol) fail("T*T has spectrum below 1");
  const auto n = T.matrix.rows();
  Eigen::MatrixXd Delta = Eigen::MatrixXd::Zero(n, n), Half = Eigen::MatrixXd::Zero(n, n);
  Delta(g.idx, g.idx) = spectral(g, [](double x) { return x - 1.0; });
  Half(g.idx, g.idx) = spectral(g, [](double x) { return std::sqrt(std::max(x - 1.0, 0.0)); });
  Eigen::MatrixXd R = Delta * T.matrix - Half * T.matrix * Half;
  auto b = T.block(T.interior_depth - 2);
  double q = R(b, b).norm();
  if (q > tol) fail("Delta T - Delta^1/2 T Delta^1/2 interior norm " + std::to_string(q));
  notes.push_back("matrix: Delta T = Delta^1/2 T Delta^1/2 on interior");
}

Table1Report compare_rn(const TruncatedOperator& T, Table1Row row, int nmax, double tol,
                        std::vector<std::string> notes) {
  if (nmax < 1) throw DomainError("verify_table1 needs nmax >= 1");
  if (nmax > T.interior_depth)
    throw RangeError("nmax " + std::to_string(nmax) + " exceeds interior depth " +
                     std::to_string(T.interior_depth));
  auto g = interior_gram(T);
  for (Eigen::Index i = 0; i < g.vals.size(); ++i) {
    if (g.vals(i) < 1.0 - tol) throw ClassificationError("T*T has spectrum below 1");
    g.vals(i) = std::max(g.vals(i), 1.0);
  }
  // position of each basis index inside the interior block
  std::vector<Eigen::Index> pos(static_cast<std::size_t>(T.matrix.rows()), -1);
  for (std::size_t i = 0; i < g.idx.size(); ++i)
    pos[static_cast<std::size_t>(g.idx[i])] = static_cast<Eigen::Index>(i);

  Table1Report r;
  r.row = row;
  r.nmax = nmax;
  r.class_checks = std::move(notes);
  auto D = dual_matrix(T);
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(T.matrix.rows(), T.matrix.cols());
  for (int n = 1; n <= nmax; ++n) {
    P = D.matrix * P;
    Eigen::MatrixXd L = P.transpose() * P;
    Eigen::MatrixXd Rn = spectral(g, [row, n](double t) { return table1_rn(row, t, n); });
    auto b = T.block(T.interior_depth - n);
    std::vector<Eigen::Index> bp;
    for (auto i : b) bp.push_back(pos[static_cast<std::size_t>(i)]);
    double dev = max_abs(L(b, b) - Rn(bp, bp));
    r.deviation_per_n.push_back(dev);
    r.max_deviation = std::max(r.max_deviation, dev);
  }
  return r;
}

bool all_ones(const WeightedShift& S) {
  for (VertexIndex v = 1; v < S.tree().size(); ++v)
    if (S.weight(v) != 1.0) return false;
  return true;
}

}  // namespace

Table1Report verify_table1(const TruncatedOperator& T, Table1Row row, int nmax, double tol) {
  std::vector<std::string> notes;
  matrix_class_check(T, row, tol, notes);
  return compare_rn(T, row, nmax, tol, std::move(notes));
}

Table1Report verify_table1(const WeightedShift& S, Table1Row row, int nmax, double tol) {
  std::vector<std::string> notes;
  const auto& t = S.tree();
  auto fail = [&](const std::string& what) {
    throw ClassificationError("shift is not in the class of the " + std::string(to_string(row)) +
                              " row: " + what);
  };
  auto T = truncate(S);
  switch (row) {
    case Table1Row::Isometry:
      for (int n = 0; n < S.depth(); ++n)
        for (auto u : t.generation(n))
          if (std::abs(vertex_norm(S, u) - 1.0) > tol) fail("norm at '" + t.id(u) + "' is not 1");
      notes.push_back("symbolic: every vertex norm is 1");
      break;
    case Table1Row::Kernel: {
      auto two = is_two_isometry(S, tol);
      if (!two.holds) fail("not a 2-isometry at '" + two.witness->vertex + "'");
      auto kc = satisfies_kernel_condition(S, 0, tol);
      if (!kc.holds) fail("kernel condition fails at '" + kc.witness->vertex + "'");
      notes.push_back("symbolic: 2-isometry with kernel condition");
      break;
    }
    case Table1Row::QuasiBrownian:
      if (all_ones(S)) {
        auto adj = classify_adjacency(S.tree_ptr(), tol);
        if (!adj.quasi_brownian_isometry.holds) fail("adjacency operator is not quasi-Brownian");
        notes.push_back("symbolic: quasi-Brownian adjacency operator");
      } else {
        matrix_class_check(T, row, tol, notes);
      }
      break;
    case Table1Row::AdjacencyPattern: {
      if (!all_ones(S)) fail("weights are not all 1");
      auto two = is_two_isometry(S, tol);
      if (!two.holds) fail("not a 2-isometry at '" + two.witness->vertex + "'");
      std::size_t l = t.degree(t.root()), deg2 = 0;
      for (auto v : t.vertex(t.root()).children) deg2 += t.degree(v) == 2 ? 1 : 0;
      if (l < 2 || deg2 + 1 != l) fail("root does not have l-1 children of degree 2");
      notes.push_back("symbolic: 2-isometric adjacency operator, l-1 root children of degree 2");
      break;
    }
  }
  return compare_rn(T, row, nmax, tol, std::move(notes));
}

TruncatedOperator build_brownian_shift(double sigma, int N) {
  if (!(sigma > 0.0)) throw DomainError("Brownian shift needs sigma > 0");
  if (N < 4) throw RangeError("Brownian shift needs N >= 4");
  TruncatedOperator T;
  T.matrix = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (int k = 0; k < N; ++k) {
    T.basis.push_back("e" + std::to_string(k));
    T.depths.push_back(k + 1);
    if (k + 1 < N) T.matrix(k + 1, k) = 1.0;
  }
  T.basis.push_back("f");
  T.depths.push_back(0);
  T.matrix(0, N) = sigma;
  T.matrix(N, N) = 1.0;
  T.interior_depth = N - 1;
  return T;
}

OvwsResult ovws_from_atoms(const std::vector<SpectralAtom>& atoms, int N) {
  if (N < 1) throw RangeError("ovws needs N >= 1");
  int width = 0;
  for (const auto& a : atoms) {
    if (!(a.x >= 1.0)) throw DomainError("spectral atoms must satisfy x >= 1");
    if (a.multiplicity < 1) throw DomainError("multiplicity must be >= 1");
    width += a.multiplicity;
  }
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j)
      if (atoms[i].x == atoms[j].x) throw DomainError("spectral atoms must be distinct");
  OvwsResult r;
  const int dim = width * (N + 1);
  r.op.matrix = Eigen::MatrixXd::Zero(dim, dim);
  auto at = [width](int n, int slot) { return n * width + slot; };
  for (int n = 0; n <= N; ++n) {
    int slot = 0;
    for (std::size_t j = 0; j < atoms.size(); ++j)
      for (int c = 0; c < atoms[j].multiplicity; ++c, ++slot) {
        std::ostringstream os;
        os << "e(" << n << "," << j << "," << c << ")";
        r.op.basis.push_back(os.str());
        r.op.depths.push_back(n);
        if (n < N) r.op.matrix(at(n + 1, slot), at(n, slot)) = xi(n, atoms[j].x);
      }
  }
  r.op.interior_depth = N - 1;
  for (const auto& a : atoms) {
    std::vector<double> w;
    for (int n = 0; n < N; ++n) w.push_back(xi(n, a.x));
    for (int c = 0; c < a.multiplicity; ++c) r.summands.push_back(w);
    std::ostringstream os;
    os.precision(10);
    os << "S_[" << a.x << "] x " << a.multiplicity;
    r.labels.push_back(os.str());
  }
  return r;
}

TruncatedOperator direct_sum(const std::vector<TruncatedOperator>& parts) {
  TruncatedOperator T;
  Eigen::Index dim = 0;
  T.interior_depth = parts.empty() ? 0 : parts.front().interior_depth;
  for (const auto& p : parts) {
    dim += p.matrix.rows();
    T.interior_depth = std::min(T.interior_depth, p.interior_depth);
  }
  T.matrix = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::Index off = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& p = parts[k];
    T.matrix.block(off, off, p.matrix.rows(), p.matrix.cols()) = p.matrix;
    for (std::size_t i = 0; i < p.basis.size(); ++i) {
      T.basis.push_back(std::to_string(k) + "/" + p.basis[i]);
      T.depths.push_back(p.depths[i]);
    }
    off += p.matrix.rows();
  }
  return T;
}

std::vector<std::vector<double>> scalar_components(const TruncatedOperator& T) {
  const auto n = T.matrix.rows();
  std::vector<Eigen::Index> next(static_cast<std::size_t>(n), -1);
  std::vector<int> incoming(static_cast<std::size_t>(n), 0);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (T.matrix(i, j) != 0.0) {
        if (next[static_cast<std::size_t>(j)] != -1)
          throw ClassificationError("column '" + T.basis[static_cast<std::size_t>(j)] +
                                    "' has more than one nonzero entry");
        next[static_cast<std::size_t>(j)] = i;
        if (++incoming[static_cast<std::size_t>(i)] > 1)
          throw ClassificationError("row '" + T.basis[static_cast<std::size_t>(i)] +
                                    "' has more than one nonzero entry");
      }
  std::vector<std::vector<double>> out;
  for (Eigen::Index s = 0; s < n; ++s) {
    if (incoming[static_cast<std::size_t>(s)]) continue;
    std::vector<double> w;
    Eigen::Index v = s;
    while (next[static_cast<std::size_t>(v)] != -1) {
      Eigen::Index c = next[static_cast<std::size_t>(v)];
      w.push_back(T.matrix(c, v));
      v = c;
    }
    out.push_back(std::move(w));
  }
  return out;
}

void write_matrix(std::ostream& os, const TruncatedOperator& T) {
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < T.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < T.matrix.cols(); ++j) {
      if (j) os << ' ';
      os << T.matrix(i, j);
    }
    os << '\n';
  }
}

}  // namespace cdual
