#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "cdual/moments.hpp"
#include "cdual/shift.hpp"

namespace cdual {

/// Dense truncation. depths[i] is the depth of basis vector i; rows and
/// columns of depth <= interior_depth are free of truncation artifacts.
struct TruncatedOperator {
  Eigen::MatrixXd matrix;
  std::vector<std::string> basis;
  std::vector<int> depths;
  int interior_depth = 0;

  std::size_t dim() const { return basis.size(); }
  /// Indices of basis vectors with depth <= d.
  std::vector<Eigen::Index> block(int d) const;
  Eigen::Index index_of(const std::string& label) const;
};

TruncatedOperator truncate(const WeightedShift& S);

/// Σ_k (-1)^k C(m,k) T*^k T^k. Meaningful on block(interior_depth - m).
/// Throws RangeError when interior_depth < m.
Eigen::MatrixXd defect(const TruncatedOperator& T, int m);

/// Restriction of M to the rows and columns of block(d).
Eigen::MatrixXd sub_block(const Eigen::MatrixXd& M, const TruncatedOperator& T, int d);
/// Frobenius norm of sub_block(M, T, d); 0 for an empty block.
double block_norm(const Eigen::MatrixXd& M, const TruncatedOperator& T, int d);

/// T (T*T)^{-1}, with (T*T)^{-1} taken on the interior block by symmetric
/// eigendecomposition; boundary columns are zero.
TruncatedOperator dual_matrix(const TruncatedOperator& T);

struct GramDiag {
  std::vector<std::string> basis;
  std::vector<double> diag;
  double max_offdiag = 0.0;
  int block_depth = 0;
};

/// Diagonal of T*^n T^n on block(interior_depth - n). Throws RangeError for n > interior_depth.
GramDiag gram_diag(const TruncatedOperator& T, int n);

struct Table1Report {
  Table1Row row = Table1Row::Kernel;
  int nmax = 0;
  double max_deviation = 0.0;
  std::vector<double> deviation_per_n;  // index n-1
  std::vector<std::string> class_checks;
  bool within(double tol) const { return max_deviation < tol; }
};

/// Checks the class symbolically, then compares T'*ⁿT'ⁿ with r_n(T*T) on the
/// truncation of S.
Table1Report verify_table1(const WeightedShift& S, Table1Row row, int nmax, double tol = kDefaultTol);
/// Matrix-only class checks; the adjacency_pattern row needs a tree source.
Table1Report verify_table1(const TruncatedOperator& T, Table1Row row, int nmax,
                           double tol = kDefaultTol);

/// Norm of T' - 2T + T*T² on columns of block(interior_depth - 2).
double char1_residual(const TruncatedOperator& T);

/// Brownian shift of covariance sigma, angle 0: T e_k = e_{k+1} (k < N-1),
/// T f = sigma e_0 + f, with f last in the basis.
TruncatedOperator build_brownian_shift(double sigma, int N);

struct SpectralAtom {
  double x = 1.0;
  int multiplicity = 1;
};

struct OvwsResult {
  TruncatedOperator op;
  /// One entry per scalar summand: weights ξ_0(x), ..., ξ_{N-1}(x).
  std::vector<std::vector<double>> summands;
  std::vector<std::string> labels;  // "S_[x] x m"
};

/// Operator-valued weighted shift with diagonal weights ξ_n(x_j) on basis (n, j, c).
OvwsResult ovws_from_atoms(const std::vector<SpectralAtom>& atoms, int N);

/// Block-diagonal sum; depths are kept, interior depth is the minimum.
TruncatedOperator direct_sum(const std::vector<TruncatedOperator>& parts);

/// Splits an operator that maps each basis vector to a multiple of at most one
/// other into chains and returns the weight sequences of the chains.
std::vector<std::vector<double>> scalar_components(const TruncatedOperator& T);

/// Row-major, space separated.
void write_matrix(std::ostream& os, const TruncatedOperator& T);

}  // namespace cdual
