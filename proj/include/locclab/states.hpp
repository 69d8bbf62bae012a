// Quantum states, standard state families, and comparison metrics.
#pragma once

#include "locclab/tensor.hpp"

#include <cmath>
#include <string>

namespace locclab {

inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kPsdTolerance = 1e-9;
inline constexpr double kNormTolerance = 1e-10;

/// Normalized state vector on a multipartite space.
class PureState {
 public:
  PureState(ComplexVector amplitudes, SystemDims dims)
      : amplitudes_(std::move(amplitudes)), dims_(std::move(dims)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != dims_.total()) {
      throw ShapeError("PureState: amplitude count " + std::to_string(amplitudes_.size()) +
                       " inconsistent with dims " + dims_.to_string());
    }
    const double dev = std::abs(amplitudes_.norm() - 1.0);
    if (!(dev <= kNormTolerance)) {
      throw ContractError("PureState: norm deviates from 1 by " + std::to_string(dev));
    }
  }

  /// Normalizes `v` first; rejects the zero vector.
  static PureState normalized(const ComplexVector& v, SystemDims dims) {
    const double n = v.norm();
    if (!(n > 0.0)) throw ContractError("PureState: cannot normalize zero vector");
    return PureState(v / n, std::move(dims));
  }

  const ComplexVector& amplitudes() const { return amplitudes_; }
  const SystemDims& dims() const { return dims_; }
  std::size_t dimension() const { return dims_.total(); }

 private:
  ComplexVector amplitudes_;
  SystemDims dims_;
};

/// Positive-semidefinite, unit-trace operator with subsystem layout.
class DensityMatrix {
 public:
  DensityMatrix(const ComplexMatrix& matrix, SystemDims dims) : dims_(std::move(dims)) {
    detail::require_dims(matrix, dims_, "DensityMatrix");
    const double herm = hermiticity_deviation(matrix);
    if (!(herm <= kHermitianTolerance)) {
      throw ContractError("DensityMatrix: not Hermitian (deviation " + std::to_string(herm) + ")");
    }
    matrix_ = hermitian_part(matrix);
    const double tr_dev = std::abs(matrix_.trace() - Complex(1.0));
    if (!(tr_dev <= kTraceTolerance)) {
      throw ContractError("DensityMatrix: trace deviates from 1 by " + std::to_string(tr_dev));
    }
    const double min_eig = hermitian_eigendecomposition(matrix_).values.minCoeff();
    if (!(min_eig >= -kPsdTolerance)) {
      throw ContractError("DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
    }
  }

  /// Divides by the trace after symmetrizing; for operators built from
  /// accumulated sums whose trace is known to be positive.
  static DensityMatrix normalized(const ComplexMatrix& m, SystemDims dims) {
    const ComplexMatrix h = hermitian_part(m);
    const double tr = h.trace().real();
    if (!(tr > 0.0)) throw ContractError("DensityMatrix: non-positive trace");
    return DensityMatrix(h / tr, std::move(dims));
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  const SystemDims& dims() const { return dims_; }
  std::size_t dimension() const { return dims_.total(); }

  double purity() const { return (matrix_ * matrix_).trace().real(); }

  /// Reduced state on the listed subsystems.
  DensityMatrix reduce(const std::vector<std::size_t>& keep) const {
    return DensityMatrix::normalized(partial_trace(matrix_, dims_, keep), dims_.select(sorted(keep)));
  }

 private:
  static std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
    std::sort(v.begin(), v.end());
    return v;
  }

  ComplexMatrix matrix_;
  SystemDims dims_;
};

inline DensityMatrix projector(const PureState& psi) {
  const ComplexVector& v = psi.amplitudes();
  return DensityMatrix(v * v.adjoint(), psi.dims());
}

inline PureState basis_state(const SystemDims& dims, std::size_t index) {
  if (index >= dims.total()) throw std::invalid_argument("basis_state: index out of range");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dims.total()));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(v, dims);
}

inline DensityMatrix maximally_mixed(const SystemDims& dims) {
  return DensityMatrix(identity(dims.total()) / static_cast<double>(dims.total()), dims);
}

/// rho ⊗ sigma with concatenated subsystem layout.
inline DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(tensor_product(a.matrix(), b.matrix()), a.dims().concat(b.dims()));
}

inline PureState tensor_product(const PureState& a, const PureState& b) {
  return PureState(tensor_product(a.amplitudes(), b.amplitudes()), a.dims().concat(b.dims()));
}

enum class BellKind { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline PureState bell_state(BellKind kind) {
  const double s = 1.0 / std::sqrt(2.0);
  ComplexVector v = ComplexVector::Zero(4);
  switch (kind) {
    case BellKind::PhiPlus: v << s, 0, 0, s; break;
    case BellKind::PhiMinus: v << s, 0, 0, -s; break;
    case BellKind::PsiPlus: v << 0, s, s, 0; break;
    case BellKind::PsiMinus: v << 0, s, -s, 0; break;
  }
  return PureState(v, {2, 2});
}

/// The two-qubit singlet (|01> - |10>)/sqrt(2).
inline PureState singlet() { return bell_state(BellKind::PsiMinus); }

/// Canonical maximally entangled state (1/sqrt(d)) sum_k |kk>.
inline PureState maximally_entangled_state(std::size_t d) {
  if (d == 0) throw std::invalid_argument("maximally_entangled_state: d must be >= 1");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(d * d));
  const double a = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t k = 0; k < d; ++k) v(static_cast<Eigen::Index>(k * d + k)) = a;
  return PureState(v, {d, d});
}

/// p |Psi-><Psi-| + (1-p) I/4.
inline DensityMatrix werner_state(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("werner_state: p outside [0,1]");
  const ComplexMatrix s = projector(singlet()).matrix();
  return DensityMatrix(p * s + (1.0 - p) * identity(4) / 4.0, {2, 2});
}

namespace detail {

// Eigenvalues below this are treated as round-off when testing rank one.
inline constexpr double kRankOneTail = 1e-13;

inline void require_same_dimension(const DensityMatrix& a, const DensityMatrix& b,
                                   std::string_view what) {
  if (a.dimension() != b.dimension()) {
    throw ShapeError(std::string(what) + ": dimension mismatch " + std::to_string(a.dimension()) +
                     " vs " + std::to_string(b.dimension()));
  }
}

}  // namespace detail

/// Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2. Reduces to <psi|b|psi> when
/// a = |psi><psi|, and rank-one arguments take that path directly so that the
/// square roots of round-off eigenvalues do not leak into the result.
inline double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  detail::require_same_dimension(a, b, "fidelity");
  const EigenSystem ea = hermitian_eigendecomposition(a.matrix());
  const Eigen::Index top = ea.values.size() - 1;
  if (ea.values.sum() - ea.values(top) <= detail::kRankOneTail) {
    const ComplexVector v = ea.vectors.col(top);
    return std::clamp((v.adjoint() * b.matrix() * v)(0, 0).real(), 0.0, 1.0);
  }
  const EigenSystem eb = hermitian_eigendecomposition(b.matrix());
  const Eigen::Index topb = eb.values.size() - 1;
  if (eb.values.sum() - eb.values(topb) <= detail::kRankOneTail) {
    const ComplexVector v = eb.vectors.col(topb);
    return std::clamp((v.adjoint() * a.matrix() * v)(0, 0).real(), 0.0, 1.0);
  }
  // Trace norm of sqrt(a) sqrt(b) via singular values avoids square roots of
  // rounding-level eigenvalues.
  const auto matrix_sqrt = [](const EigenSystem& e) {
    const RealVector root = e.values.unaryExpr([](double x) { return std::sqrt(std::max(x, 0.0)); });
    return ComplexMatrix(e.vectors * root.cast<Complex>().asDiagonal() * e.vectors.adjoint());
  };
  const ComplexMatrix product = matrix_sqrt(ea) * matrix_sqrt(eb);
  const double s = Eigen::JacobiSVD<ComplexMatrix>(product).singularValues().sum();
  return std::clamp(s * s, 0.0, 1.0);
}

/// Half the trace norm of a - b.
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  detail::require_same_dimension(a, b, "trace_distance");
  const RealVector ev = hermitian_eigendecomposition(hermitian_part(a.matrix() - b.matrix())).values;
  return std::clamp(0.5 * ev.cwiseAbs().sum(), 0.0, 1.0);
}

/// First column of a Haar-random unitary.
inline PureState random_pure_state(const SystemDims& dims, Seed seed) {
  const ComplexMatrix u = haar_random_unitary(dims.total(), seed);
  return PureState::normalized(u.col(0), dims);
}

/// Reduced state of a Haar-random pure state on dims ⊗ C^env_dim.
inline DensityMatrix random_mixed_state(const SystemDims& dims, std::size_t env_dim, Seed seed) {
  if (env_dim == 0) throw std::invalid_argument("random_mixed_state: env_dim must be >= 1");
  const PureState joint = random_pure_state(dims.concat(SystemDims{env_dim}), seed);
  const ComplexVector& v = joint.amplitudes();
  std::vector<std::size_t> keep(dims.size());
  std::iota(keep.begin(), keep.end(), 0);
  return DensityMatrix::normalized(partial_trace(v * v.adjoint(), joint.dims(), keep), dims);
}

/// Bloch vector (<X>, <Y>, <Z>) of a single-qubit state.
inline Eigen::Vector3d bloch_vector(const DensityMatrix& rho) {
  if (rho.dimension() != 2) throw ShapeError("bloch_vector: not a qubit");
  const ComplexMatrix& m = rho.matrix();
  return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

}  // namespace locclab
