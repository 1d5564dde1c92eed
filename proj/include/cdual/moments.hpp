#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cdual/measure.hpp"
#include "cdual/shift.hpp"

namespace cdual {

struct MomentSequence {
  std::vector<double> values;
  std::string source;
};

struct MomentVerdict {
  bool holds = false;
  std::optional<int> failing_order;
  /// Stieltjes: smallest Hankel eigenvalue seen. Hausdorff: most negative scaled difference.
  double min_value = 0.0;
  int checked_order = 0;
  double threshold = 0.0;
  std::optional<DiscreteMeasure> certificate;
};

/// d(u,n) = ‖Sⁿ e_u‖² for n = 0..nmax, through the children-sum recurrence.
/// With dual = true the recurrence runs on cauchy_dual(S); this needs
/// depth(u) + nmax <= N - 1 (N otherwise).
MomentSequence d_sequence(const WeightedShift& S, VertexIndex u, int nmax, bool dual);

enum class Table1Row { Isometry, Kernel, QuasiBrownian, AdjacencyPattern };

std::string_view to_string(Table1Row row);

/// r_n(t) with the domain checks of the table (adjacency_pattern: integer t >= 2).
double closed_form_table1(Table1Row row, double t, int n);
/// Same formulas for any t >= 1, used when r_n is applied to a spectrum.
double table1_rn(Table1Row row, double t, int n);

/// d_{S'}(u,n) from the explicit formula for 2-isometries with the perturbed
/// kernel condition at k = 1. Throws ClassificationError outside that class.
double dgraph_closed_form(const WeightedShift& S, VertexIndex u, int n, double tol = kDefaultTol);

/// Hankel matrices [γ_{i+j}] and [γ_{i+j+1}] positive semidefinite at every
/// order the prefix supports. Order n refers to the (n+1)x(n+1) matrices.
MomentVerdict stieltjes_test(const MomentSequence& g, double tol = kDefaultTol);
/// Complete monotonicity (-1)^k Δ^k γ_n >= 0 for k + n <= N. failing_order is k.
MomentVerdict hausdorff_test(const MomentSequence& g, double tol = kDefaultTol);

struct MuABResult {
  MomentSequence sequence;
  bool hamburger = false;
  std::optional<MuAB> measure;
  std::string description;
};

MuABResult mu_ab_moments(double a, double b, int nmax);

// Cauchy dual subnormality decision.

enum class Outcome { Subnormal, NotSubnormal, ConsistentToOrder };

std::string_view to_string(Outcome o);

struct WitnessEvidence {
  std::string vertex;
  MomentSequence sequence;
  MomentVerdict stieltjes;
  std::optional<DiscreteMeasure> shifted_measure;  // represents γ_{n+1}
  std::optional<BackwardExtension> extension;
  bool hankel_singular = false;
};

struct SubnormalityOptions {
  int nmax = 12;
  double tol = kDefaultTol;
  /// Vertex ids; empty means the root plus the first vertex of each generation.
  std::vector<std::string> witnesses;
  /// Throw ClassificationError when S is not a 2-isometry. When false, such
  /// shifts go straight to the generic moment test.
  bool require_two_isometry = true;
};

struct SubnormalityReport {
  Outcome outcome = Outcome::ConsistentToOrder;
  std::string path;      // cdsubn | BrownianG | constant-t | main2 | generic-moment-test
  std::string citation;
  std::string summary;
  int nmax = 0;
  std::optional<int> perturbation_k;
  std::optional<double> closed_form_deviation;
  std::vector<WitnessEvidence> evidence;
  std::vector<std::string> notes;
};

SubnormalityReport dual_subnormality(const WeightedShift& S, const SubnormalityOptions& opts = {});

}  // namespace cdual
