#include <algorithm>
#include <cmath>

#include "cdual/errors.hpp"
#include "cdual/moments.hpp"

namespace cdual {

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Subnormal: return "subnormal";
    case Outcome::NotSubnormal: return "not subnormal";
    case Outcome::ConsistentToOrder: return "consistent to order";
  }
  return "?";
}

namespace {

bool is_adjacency(const WeightedShift& S) {
  for (VertexIndex v = 1; v < S.tree().size(); ++v)
    if (S.weight(v) != 1.0) return false;
  return true;
}

int usable_nmax(const WeightedShift& S, VertexIndex u, int nmax) {
  return std::min(nmax, S.depth() - 1 - S.tree().vertex(u).depth);
}

WitnessEvidence examine(const WeightedShift& S, VertexIndex u, int nmax, double tol) {
  WitnessEvidence ev;
  ev.vertex = S.tree().id(u);
  ev.sequence = d_sequence(S, u, nmax, true);
  ev.stieltjes = stieltjes_test(ev.sequence, tol);
  std::vector<double> shifted(ev.sequence.values.begin() + 1, ev.sequence.values.end());
  if (auto mu = recover_atomic_measure(shifted, 1e-8)) {
    ev.shifted_measure = mu;
    // more moments reproduced than the atoms need: the Hankel matrix is singular
    ev.hankel_singular = shifted.size() >= 2 * mu->size() + 1;
    ev.extension = backward_extension(*mu);
  }
  return ev;
}

bool refutes(const WitnessEvidence& ev) {
  if (!ev.stieltjes.holds) return true;
  return ev.hankel_singular && ev.extension && !ev.extension->admissible;
}

double max_deviation(const MomentSequence& seq, Table1Row row, double t) {
  double m = 0.0;
  for (std::size_t n = 0; n < seq.values.size(); ++n)
    m = std::max(m, std::abs(seq.values[n] - table1_rn(row, t, static_cast<int>(n))));
  return m;
}

SubnormalityReport closed_path(const WeightedShift& S, const SubnormalityOptions& o,
                               const char* path, const char* citation, Table1Row row, double t) {
  SubnormalityReport r;
  r.outcome = Outcome::Subnormal;
  r.path = path;
  r.citation = citation;
  const auto root = S.tree().root();
  r.nmax = usable_nmax(S, root, o.nmax);
  if (r.nmax >= 2) {
    WitnessEvidence ev;
    ev.vertex = S.tree().id(root);
    ev.sequence = d_sequence(S, root, r.nmax, true);
    ev.stieltjes = stieltjes_test(ev.sequence, o.tol);
    r.closed_form_deviation = max_deviation(ev.sequence, row, t);
    r.evidence.push_back(std::move(ev));
  } else {
    r.notes.push_back("tree too shallow to attach moment evidence");
  }
  r.summary = std::string("Cauchy dual is a subnormal contraction (") + citation + ")";
  return r;
}

}  // namespace

SubnormalityReport dual_subnormality(const WeightedShift& S, const SubnormalityOptions& o) {
  const auto& t = S.tree();
  const int N = S.depth();
  auto two = is_two_isometry(S, o.tol);
  std::vector<std::string> notes;
  if (!two.holds) {
    if (o.require_two_isometry)
      throw ClassificationError("dual subnormality decision needs a 2-isometry (fails at '" +
                                two.witness->vertex + "')");
    notes.push_back("not a 2-isometry (fails at '" + two.witness->vertex +
                    "'); only the generic moment test applies");
  } else {
    if (satisfies_kernel_condition(S, 0, o.tol).holds) {
      double x2 = vertex_norm_sq(S, t.root());
      return closed_path(S, o, "cdsubn", "kernel condition theorem: S' is a subnormal contraction",
                         Table1Row::Kernel, x2);
    }
    if (is_adjacency(S)) {
      auto adj = classify_adjacency(S.tree_ptr(), o.tol);
      const double l = static_cast<double>(t.degree(t.root()));
      if (adj.quasi_brownian_isometry.holds)
        return closed_path(S, o, "BrownianG", "quasi-Brownian isometry theorem",
                           Table1Row::QuasiBrownian, l);
      std::size_t deg2 = 0;
      for (auto v : t.vertex(t.root()).children) deg2 += t.degree(v) == 2 ? 1 : 0;
      if (l >= 2 && deg2 + 1 == t.degree(t.root()))
        return closed_path(S, o, "constant-t", "adjacency operator theorem, condition (ii)",
                           Table1Row::AdjacencyPattern, l);
    }
    for (int k = 1; k <= N - 3; ++k) {
      if (!satisfies_kernel_condition(S, k, o.tol).holds) continue;
      bool zero = false;
      for (int g = 1; g <= k; ++g)
        for (auto v : t.generation(g)) zero = zero || S.weight(v) == 0.0;
      if (zero) {
        notes.push_back("perturbed kernel condition holds from generation " + std::to_string(k) +
                        " but generations 1.." + std::to_string(k) +
                        " carry zero weights; falling back to the generic moment test");
        break;
      }
      SubnormalityReport r;
      r.outcome = Outcome::NotSubnormal;
      r.path = "main2";
      r.citation = "perturbed kernel condition theorem: S' subnormal iff the kernel condition holds";
      r.perturbation_k = k;
      r.notes = notes;
      r.notes.push_back("kernel condition fails at k = 0 and holds from k = " + std::to_string(k) +
                        " (verified to depth " + std::to_string(N - 2) + ")");
      r.nmax = usable_nmax(S, t.root(), o.nmax);
      if (r.nmax >= 2) {
        auto ev = examine(S, t.root(), r.nmax, o.tol);
        if (ev.stieltjes.holds)
          r.notes.push_back("root moment prefix is still Stieltjes to order " +
                            std::to_string(ev.stieltjes.checked_order));
        r.evidence.push_back(std::move(ev));
      }
      r.summary = "Cauchy dual is NOT subnormal (main2 fast path, k = " + std::to_string(k) + ")";
      if (!r.evidence.empty() && !r.evidence.front().stieltjes.holds)
        r.summary += "; Stieltjes failure at root, order " +
                     std::to_string(*r.evidence.front().stieltjes.failing_order);
      return r;
    }
  }

  SubnormalityReport r;
  r.path = "generic-moment-test";
  r.citation = "Lambert: S' subnormal iff every d_{S'}(u, .) is a Stieltjes moment sequence";
  r.notes = notes;
  r.nmax = o.nmax;
  std::vector<VertexIndex> wit;
  if (o.witnesses.empty()) {
    wit.push_back(t.root());
    for (int g = 1; g <= N; ++g) wit.push_back(t.generation(g).front());
  } else {
    for (const auto& id : o.witnesses) wit.push_back(t.at(id));
  }
  bool refuted = false;
  int skipped = 0;
  for (auto u : wit) {
    int n = usable_nmax(S, u, o.nmax);
    if (n < 2) {
      ++skipped;
      continue;
    }
    auto ev = examine(S, u, n, o.tol);
    refuted = refuted || refutes(ev);
    r.evidence.push_back(std::move(ev));
  }
  if (skipped) r.notes.push_back(std::to_string(skipped) + " witness vertices too deep for a moment test");
  if (r.evidence.empty()) throw RangeError("no witness vertex has enough depth for a moment test");
  if (refuted) {
    r.outcome = Outcome::NotSubnormal;
    for (const auto& ev : r.evidence) {
      if (!refutes(ev)) continue;
      r.summary = "Cauchy dual is NOT subnormal: at '" + ev.vertex + "' ";
      if (!ev.stieltjes.holds)
        r.summary += "the Hankel test fails at order " + std::to_string(*ev.stieltjes.failing_order);
      else
        r.summary += "the backward extension is inadmissible (integral " +
                     std::to_string(ev.extension->integral) + ")";
      break;
    }
  } else {
    r.outcome = Outcome::ConsistentToOrder;
    r.summary = "consistent with subnormality to order " + std::to_string(o.nmax) +
                " (not a proof)";
  }
  return r;
}

}  // namespace cdual
