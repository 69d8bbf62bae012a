// Independent reference computations used by the unit and acceptance tests.
#pragma once

#include "locclab/states.hpp"

#include <cmath>
#include <random>

namespace oracle {

using locclab::ComplexMatrix;
using locclab::ComplexVector;

/// (N+1)/2 * integral_{-1}^{1} ((1+u)/2)^{N+1} du by composite Simpson.
/// This is the mean fidelity of the continuous covariant measurement on N
/// copies: u is the cosine between guess and input Bloch vectors.
inline double covariant_estimation_fidelity(std::size_t copies, std::size_t intervals = 200000) {
  const double n1 = static_cast<double>(copies + 1);
  auto f = [&](double u) { return std::pow(0.5 * (1.0 + u), n1); };
  const double h = 2.0 / static_cast<double>(intervals);
  double s = f(-1.0) + f(1.0);
  for (std::size_t k = 1; k < intervals; ++k) s += (k % 2 ? 4.0 : 2.0) * f(-1.0 + h * static_cast<double>(k));
  return 0.5 * n1 * s * h / 3.0;
}

/// Largest <Phi+|(a ⊗ b)|Phi+> over `samples` random product pure states.
inline double sampled_product_singlet_overlap(std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  const double r = 1.0 / std::sqrt(2.0);
  double best = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    ComplexVector a(2), b(2);
    a << locclab::Complex(g(rng), g(rng)), locclab::Complex(g(rng), g(rng));
    b << locclab::Complex(g(rng), g(rng)), locclab::Complex(g(rng), g(rng));
    a.normalize();
    b.normalize();
    const locclab::Complex amp = r * (a(0) * b(0) + a(1) * b(1));
    best = std::max(best, std::norm(amp));
  }
  return best;
}

/// Closed-form Werner concurrence and negativity.
inline double werner_concurrence(double p) { return std::max(0.0, (3.0 * p - 1.0) / 2.0); }
inline double werner_negativity(double p) { return std::max(0.0, (3.0 * p - 1.0) / 4.0); }

/// Concurrence by the textbook route: square roots of the eigenvalues of
/// rho (Y⊗Y) rho^* (Y⊗Y), a non-Hermitian product.
inline double concurrence_spin_flip(const ComplexMatrix& rho) {
  ComplexMatrix yy = ComplexMatrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const ComplexMatrix r = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<ComplexMatrix> es(r);
  std::vector<double> l;
  for (int k = 0; k < 4; ++k) l.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(k).real())));
  std::sort(l.rbegin(), l.rend());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

}  // namespace oracle
