// Estimating an unknown qubit from N copies with a discretized covariant
// measurement. Operators live on the (N+1)-dimensional symmetric subspace,
// written in the Dicke basis |N,k> (k = number of ones).
#pragma once

#include "locclab/states.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace locclab {

inline constexpr double kPovmCompletenessTolerance = 1e-6;

/// Near-uniform unit vectors on the sphere from the Fibonacci lattice.
inline std::vector<Eigen::Vector3d> fibonacci_sphere(std::size_t count) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(count);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t k = 0; k < count; ++k) {
    const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(count);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(k);
    out.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return out;
}

/// Pure qubit state with Bloch vector n.
inline ComplexVector qubit_from_bloch(const Eigen::Vector3d& n) {
  const double theta = std::acos(std::clamp(n.z(), -1.0, 1.0));
  const double phi = std::atan2(n.y(), n.x());
  ComplexVector v(2);
  v << std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi);
  return v;
}

inline double binomial(std::size_t n, std::size_t k) {
  return std::exp(std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
                  std::lgamma(static_cast<double>(n - k) + 1.0));
}

inline Complex integer_power(Complex base, std::size_t exponent) {
  Complex out(1.0, 0.0);
  for (std::size_t k = 0; k < exponent; ++k) out *= base;
  return out;
}

/// Dicke-basis coordinates of |a>^{⊗N}: sqrt(C(N,k)) a0^{N-k} a1^k.
inline ComplexVector symmetric_power(const ComplexVector& a, std::size_t copies) {
  if (a.size() != 2) throw ShapeError("symmetric_power: not a qubit");
  ComplexVector out(static_cast<Eigen::Index>(copies + 1));
  for (std::size_t k = 0; k <= copies; ++k) {
    out(static_cast<Eigen::Index>(k)) = std::sqrt(binomial(copies, k)) * integer_power(a(0), copies - k) *
                                        integer_power(a(1), k);
  }
  return out;
}

/// Isometry from the Dicke basis into the full 2^N-dimensional space.
inline ComplexMatrix symmetric_embedding(std::size_t copies) {
  const std::size_t full = std::size_t{1} << copies;
  check_dimension(full, "symmetric_embedding");
  ComplexMatrix e = ComplexMatrix::Zero(static_cast<Eigen::Index>(full), static_cast<Eigen::Index>(copies + 1));
  for (std::size_t x = 0; x < full; ++x) {
    const auto k = static_cast<std::size_t>(std::popcount(x));
    e(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(k)) = 1.0 / std::sqrt(binomial(copies, k));
  }
  return e;
}

struct PovmElement {
  std::string label;
  ComplexMatrix op;   // on the symmetric subspace
  PureState guess;    // single qubit
};

/// Measurement on N copies with a guessed single-qubit state per outcome.
class EstimationPovm {
 public:
  EstimationPovm(std::vector<PovmElement> elements, std::size_t copies)
      : elements_(std::move(elements)), copies_(copies) {
    if (copies_ == 0) throw std::invalid_argument("EstimationPovm: copies must be >= 1");
    if (elements_.empty()) throw ContractError("EstimationPovm: no elements");
    const auto dim = static_cast<Eigen::Index>(copies_ + 1);
    for (const auto& e : elements_) {
      if (e.op.rows() != dim || e.op.cols() != dim) throw ShapeError("EstimationPovm: element has wrong shape");
      if (e.guess.dimension() != 2) throw ShapeError("EstimationPovm: guess is not a qubit");
      if (hermitian_eigendecomposition(hermitian_part(e.op)).values.minCoeff() < -kPsdTolerance) {
        throw ContractError("EstimationPovm: element '" + e.label + "' is not positive semidefinite");
      }
    }
    const double res = completeness_residual();
    if (!(res <= kCompletenessTolerance)) {
      throw ContractError("EstimationPovm: completeness residual " + std::to_string(res));
    }
  }

  const std::vector<PovmElement>& elements() const { return elements_; }
  std::size_t copies() const { return copies_; }
  std::size_t size() const { return elements_.size(); }

  double completeness_residual() const {
    const auto dim = static_cast<Eigen::Index>(copies_ + 1);
    ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
    for (const auto& e : elements_) sum += e.op;
    return max_abs(sum - ComplexMatrix::Identity(dim, dim));
  }

 private:
  static constexpr double kCompletenessTolerance = 1e-9;
  std::vector<PovmElement> elements_;
  std::size_t copies_;
};

/// Elements c |n_k><n_k|^{⊗N} over `mesh` Fibonacci directions with guess |n_k>.
/// The single scale c = 1/lambda_max(sum_k |n_k><n_k|^{⊗N}) keeps the remainder
/// I_sym - c sum_k (...) positive; the remainder is added as one more element
/// with guess |0>.
inline EstimationPovm covariant_estimation_povm(std::size_t copies, std::size_t mesh) {
  if (copies == 0) throw std::invalid_argument("covariant_estimation_povm: copies must be >= 1");
  if (mesh < copies + 2) {
    throw std::invalid_argument("covariant_estimation_povm: mesh of " + std::to_string(mesh) +
                                " directions is too small; need at least copies + 2 = " +
                                std::to_string(copies + 2));
  }
  const auto dim = static_cast<Eigen::Index>(copies + 1);
  const auto dirs = fibonacci_sphere(mesh);
  std::vector<ComplexVector> kets;
  ComplexMatrix frame = ComplexMatrix::Zero(dim, dim);
  for (const auto& n : dirs) {
    kets.push_back(symmetric_power(qubit_from_bloch(n), copies));
    frame.noalias() += kets.back() * kets.back().adjoint();
  }
  const EigenSystem es = hermitian_eigendecomposition(hermitian_part(frame));
  if (es.values(0) <= 0.0) {
    throw ContractError("covariant_estimation_povm: mesh does not span the symmetric subspace; increase mesh");
  }
  const double scale = 1.0 / es.values(dim - 1);

  std::vector<PovmElement> elements;
  elements.reserve(mesh + 1);
  for (std::size_t k = 0; k < mesh; ++k) {
    elements.push_back({std::to_string(k), scale * kets[k] * kets[k].adjoint(),
                        PureState::normalized(qubit_from_bloch(dirs[k]), {2})});
  }
  ComplexMatrix remainder = hermitian_part(ComplexMatrix::Identity(dim, dim) - scale * frame);
  elements.push_back({"remainder", remainder, basis_state({2}, 0)});

  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (const auto& e : elements) sum += e.op;
  const double res = max_abs(sum - ComplexMatrix::Identity(dim, dim));
  if (!(res <= kPovmCompletenessTolerance)) {
    throw ContractError("covariant_estimation_povm: completeness residual " + std::to_string(res) +
                        " exceeds tolerance; increase mesh");
  }
  return EstimationPovm(std::move(elements), copies);
}

struct EstimationBranch {
  std::string label;
  double probability;
  DensityMatrix guess;
};

/// Outcome probabilities Tr[P_i (|psi><psi|)^{⊗N}].
inline std::vector<double> outcome_probabilities(const EstimationPovm& povm, const ComplexVector& psi) {
  const ComplexVector w = symmetric_power(psi, povm.copies());
  std::vector<double> p;
  p.reserve(povm.size());
  for (const auto& e : povm.elements()) p.push_back(std::max(0.0, (w.adjoint() * e.op * w)(0, 0).real()));
  return p;
}

inline std::vector<EstimationBranch> estimate_branches(const EstimationPovm& povm, const PureState& input) {
  if (input.dimension() != 2) throw ShapeError("estimate_branches: input is not a qubit");
  const auto p = outcome_probabilities(povm, input.amplitudes());
  std::vector<EstimationBranch> out;
  out.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.push_back({povm.elements()[i].label, p[i], projector(povm.elements()[i].guess)});
  }
  return out;
}

/// sum_i p_i |<psi|guess_i>|^2 for one input.
inline double estimation_fidelity(const EstimationPovm& povm, const ComplexVector& psi) {
  const auto p = outcome_probabilities(povm, psi);
  double f = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) f += p[i] * std::norm(psi.dot(povm.elements()[i].guess.amplitudes()));
  return f;
}

/// Monte-Carlo mean of estimation_fidelity over Haar-random inputs.
inline double mean_estimation_fidelity(const EstimationPovm& povm, std::size_t trials, Seed seed) {
  if (trials == 0) throw std::invalid_argument("mean_estimation_fidelity: trials must be >= 1");
  double sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    sum += estimation_fidelity(povm, random_pure_state({2}, seed.sub(t)).amplitudes());
  }
  return sum / static_cast<double>(trials);
}

inline double mean_estimation_fidelity(std::size_t copies, std::size_t mesh, std::size_t trials, Seed seed) {
  return mean_estimation_fidelity(covariant_estimation_povm(copies, mesh), trials, seed);
}

}  // namespace locclab
