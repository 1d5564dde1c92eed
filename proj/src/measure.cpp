#include "cdual/measure.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cdual/errors.hpp"

namespace cdual {

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms, double merge_tol) {
  for (const auto& a : atoms) {
    if (!std::isfinite(a.location) || a.location < 0.0)
      throw DomainError("atom location must be a finite number >= 0");
    if (!std::isfinite(a.mass) || a.mass < 0.0) throw DomainError("atom mass must be >= 0");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& p, const Atom& q) { return p.location < q.location; });
  for (const auto& a : atoms) {
    if (a.mass == 0.0) continue;
    if (!atoms_.empty() &&
        std::abs(atoms_.back().location - a.location) <= merge_tol * (1.0 + a.location)) {
      atoms_.back().mass += a.mass;
    } else {
      atoms_.push_back(a);
    }
  }
}

DiscreteMeasure DiscreteMeasure::dirac(double t, double mass) {
  return DiscreteMeasure({Atom{t, mass}});
}

double DiscreteMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.mass;
  return s;
}

double DiscreteMeasure::moment(int n) const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.mass * (n == 0 ? 1.0 : std::pow(a.location, n));
  return s;
}

std::vector<double> DiscreteMeasure::moments(int nmax) const {
  std::vector<double> out;
  for (int n = 0; n <= nmax; ++n) out.push_back(moment(n));
  return out;
}

double DiscreteMeasure::mass_at(double t, double tol) const {
  double s = 0.0;
  for (const auto& a : atoms_)
    if (std::abs(a.location - t) <= tol) s += a.mass;
  return s;
}

DiscreteMeasure DiscreteMeasure::scaled(double c) const {
  if (!(c >= 0.0)) throw DomainError("measure scale factor must be >= 0");
  auto out = atoms_;
  for (auto& a : out) a.mass *= c;
  return DiscreteMeasure(std::move(out));
}

DiscreteMeasure DiscreteMeasure::mixture(
    const std::vector<std::pair<double, DiscreteMeasure>>& parts) {
  std::vector<Atom> all;
  for (const auto& [c, m] : parts) {
    if (!(c >= 0.0)) throw DomainError("mixture coefficients must be >= 0");
    for (auto a : m.atoms()) {
      a.mass *= c;
      all.push_back(a);
    }
  }
  return DiscreteMeasure(std::move(all), 1e-14);
}

std::string DiscreteMeasure::describe() const {
  std::ostringstream os;
  os.precision(10);
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i) os << " + ";
    os << atoms_[i].mass << " d_" << atoms_[i].location;
  }
  if (atoms_.empty()) os << "0";
  return os.str();
}

DiscreteMeasure MuAB::discretize(int nodes) const {
  if (!(a > 0.0) || !(b >= 0.0)) throw DomainError("mu_{a,b} exists only for a > 0, b >= 0");
  if (b == 0.0) return DiscreteMeasure::dirac(1.0, 1.0 / a);
  if (nodes < 1) throw DomainError("quadrature needs at least one node");
  // Jacobi weight (1+x)^beta on [-1,1], Golub–Welsch.
  const double beta = a / b - 1.0, alpha = 0.0;
  const int N = nodes;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, N);
  for (int n = 0; n < N; ++n) {
    const double s = 2.0 * n + alpha + beta;
    J(n, n) = n == 0 ? (beta - alpha) / (alpha + beta + 2.0)
                     : (beta * beta - alpha * alpha) / (s * (s + 2.0));
    if (n + 1 < N) {
      const double m = n + 1.0, s1 = 2.0 * m + alpha + beta;
      const double bn = 4.0 * m * (m + alpha) * (m + beta) * (m + alpha + beta) /
                        (s1 * s1 * (s1 + 1.0) * (s1 - 1.0));
      J(n, n + 1) = J(n + 1, n) = std::sqrt(bn);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 = std::pow(2.0, beta + 1.0) / (beta + 1.0);
  const double scale = std::pow(2.0, -beta - 1.0) / b;
  std::vector<Atom> atoms;
  for (int i = 0; i < N; ++i) {
    double v0 = es.eigenvectors()(0, i);
    atoms.push_back(Atom{(1.0 + es.eigenvalues()(i)) / 2.0, mu0 * v0 * v0 * scale});
  }
  return DiscreteMeasure(std::move(atoms));
}

std::string MuAB::describe() const {
  std::ostringstream os;
  os.precision(10);
  if (b == 0.0)
    os << (1.0 / a) << " d_1";
  else
    os << "density t^(" << (a / b - 1.0) << ")/" << b << " on [0,1]";
  return os.str();
}

BackwardExtension backward_extension(const DiscreteMeasure& mu, double tol) {
  BackwardExtension r;
  double integral = 0.0;
  for (const auto& a : mu.atoms()) {
    if (a.location == 0.0) {
      r.integral = std::numeric_limits<double>::infinity();
      return r;
    }
    integral += a.mass / a.location;
  }
  r.integral = integral;
  if (integral > 1.0 + tol) return r;
  r.admissible = true;
  std::vector<Atom> nu;
  for (const auto& a : mu.atoms()) nu.push_back(Atom{a.location, a.mass / a.location});
  double rest = 1.0 - integral;
  if (rest > tol) nu.push_back(Atom{0.0, rest});
  r.nu = DiscreteMeasure(std::move(nu));
  return r;
}

std::optional<DiscreteMeasure> recover_atomic_measure(const std::vector<double>& gamma,
                                                      double tol) {
  const int m = static_cast<int>(gamma.size()) - 1;
  if (m < 0) return std::nullopt;
  if (m == 0) {
    if (gamma[0] < 0.0) return std::nullopt;
    return DiscreteMeasure::dirac(1.0, gamma[0]);
  }
  const int p = m / 2;
  Eigen::MatrixXd H(p + 1, p + 1);
  for (int i = 0; i <= p; ++i)
    for (int j = 0; j <= p; ++j) H(i, j) = gamma[static_cast<std::size_t>(i + j)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  if (top == 0.0) return DiscreteMeasure{};
  int rank = 0;
  for (int i = 0; i <= p; ++i)
    if (es.eigenvalues()(i) > 1e-11 * top) ++rank;
  rank = std::min(rank, (m + 1) / 2);

  for (int r = rank; r >= 1; --r) {
    Eigen::MatrixXd H0(r, r), H1(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        H0(i, j) = gamma[static_cast<std::size_t>(i + j)];
        H1(i, j) = gamma[static_cast<std::size_t>(i + j + 1)];
      }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(H1, H0);
    if (ges.info() != Eigen::Success) continue;
    std::vector<double> t(ges.eigenvalues().data(), ges.eigenvalues().data() + r);
    bool ok = true;
    for (auto& x : t) {
      if (x < -1e-9 * (1.0 + top)) ok = false;
      x = std::max(x, 0.0);
      if (std::abs(x) < 1e-13) x = 0.0;
    }
    if (!ok) continue;
    Eigen::MatrixXd V(m + 1, r);
    Eigen::VectorXd g(m + 1);
    for (int n = 0; n <= m; ++n) {
      g(n) = gamma[static_cast<std::size_t>(n)];
      for (int j = 0; j < r; ++j) V(n, j) = n == 0 ? 1.0 : std::pow(t[static_cast<std::size_t>(j)], n);
    }
    Eigen::VectorXd w = V.colPivHouseholderQr().solve(g);
    std::vector<Atom> atoms;
    for (int j = 0; j < r; ++j) {
      if (w(j) < -tol * (1.0 + std::abs(g(0)))) ok = false;
      atoms.push_back(Atom{t[static_cast<std::size_t>(j)], std::max(w(j), 0.0)});
    }
    if (!ok) continue;
    DiscreteMeasure mu(std::move(atoms), 1e-10);
    for (int n = 0; n <= m && ok; ++n)
      if (std::abs(mu.moment(n) - g(n)) > tol * (1.0 + std::abs(g(n)))) ok = false;
    if (ok) return mu;
  }
  return std::nullopt;
}

}  // namespace cdual
