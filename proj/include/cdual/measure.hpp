#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cdual {

struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

/// Finite positive atomic measure on [0, inf). Atoms are kept sorted by
/// location; atoms closer than `merge_tol` (relative) are merged, zero masses dropped.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  explicit DiscreteMeasure(std::vector<Atom> atoms, double merge_tol = 0.0);

  static DiscreteMeasure dirac(double t, double mass = 1.0);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  double total_mass() const;
  double moment(int n) const;
  std::vector<double> moments(int nmax) const;
  double mass_at(double t, double tol = 1e-12) const;

  DiscreteMeasure scaled(double c) const;
  /// Σ c_i μ_i with c_i >= 0.
  static DiscreteMeasure mixture(const std::vector<std::pair<double, DiscreteMeasure>>& parts);

  std::string describe() const;

 private:
  std::vector<Atom> atoms_;
};

/// The measure with moments 1/(a + b n): density t^{a/b - 1}/b on [0,1] for
/// b > 0, δ_1/a for b = 0. Defined only for a > 0, b >= 0.
struct MuAB {
  double a = 1.0, b = 0.0;
  double moment(int n) const { return 1.0 / (a + b * n); }
  /// Gauss–Jacobi sampling with `nodes` atoms; the single atom δ_1/a when b = 0.
  DiscreteMeasure discretize(int nodes = 64) const;
  std::string describe() const;
};

struct BackwardExtension {
  bool admissible = false;
  double integral = 0.0;  // ∫ t^{-1} dμ, +inf with an atom at 0
  std::optional<DiscreteMeasure> nu;
};

/// ν = μ/t + (1 - ∫ t^{-1} dμ) δ_0 when the integral is at most 1.
BackwardExtension backward_extension(const DiscreteMeasure& mu, double tol = 1e-12);

/// Tries to write γ_0..γ_{2r} as moments of an r-atomic measure on [0, inf),
/// r chosen from the numerical rank of the Hankel matrix. Returns nullopt if
/// no atomic measure reproduces every given moment within `tol` (relative).
std::optional<DiscreteMeasure> recover_atomic_measure(const std::vector<double>& gamma,
                                                      double tol = 1e-9);

}  // namespace cdual
