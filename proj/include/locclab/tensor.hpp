// Dense complex linear algebra with multipartite bookkeeping.
//
// Operators are Eigen dense complex matrices. Multipartite structure is carried
// separately by SystemDims, ordered with the first subsystem as the most
// significant digit of the composite index (the usual Kronecker convention).
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace locclab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes or subsystem layouts do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A composite dimension would exceed the configured cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// An input violates a numerical contract (Hermiticity, completeness, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::size_t kDefaultDimensionCap = 4096;
inline constexpr double kHermitianTolerance = 1e-10;

/// Maximum total Hilbert-space dimension of any operator we build.
/// Overridden by the LOCCLAB_DIM_CAP environment variable.
inline std::size_t dimension_cap() {
  if (const char* env = std::getenv("LOCCLAB_DIM_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultDimensionCap;
}

inline void check_dimension(std::size_t dim, std::string_view what) {
  const std::size_t cap = dimension_cap();
  if (dim > cap) {
    throw SizeError(std::string(what) + ": dimension " + std::to_string(dim) +
                    " exceeds cap " + std::to_string(cap));
  }
}

/// Ordered list of subsystem dimensions.
class SystemDims {
 public:
  SystemDims(std::initializer_list<std::size_t> dims) : dims_(dims) { validate(); }
  explicit SystemDims(std::vector<std::size_t> dims) : dims_(std::move(dims)) { validate(); }

  /// n copies of a d-dimensional system.
  static SystemDims uniform(std::size_t d, std::size_t n) {
    return SystemDims(std::vector<std::size_t>(n, d));
  }

  std::size_t size() const { return dims_.size(); }
  std::size_t operator[](std::size_t i) const { return dims_.at(i); }
  const std::vector<std::size_t>& values() const { return dims_; }
  auto begin() const { return dims_.begin(); }
  auto end() const { return dims_.end(); }

  std::size_t total() const {
    return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1},
                           std::multiplies<>());
  }

  SystemDims concat(const SystemDims& other) const {
    std::vector<std::size_t> v = dims_;
    v.insert(v.end(), other.dims_.begin(), other.dims_.end());
    return SystemDims(std::move(v));
  }

  SystemDims select(const std::vector<std::size_t>& indices) const {
    std::vector<std::size_t> v;
    v.reserve(indices.size());
    for (std::size_t i : indices) v.push_back(dims_.at(i));
    return SystemDims(std::move(v));
  }

  friend bool operator==(const SystemDims&, const SystemDims&) = default;

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(dims_[i]);
    }
    return s + "]";
  }

 private:
  void validate() const {
    if (dims_.empty()) throw ShapeError("SystemDims: empty dimension list");
    for (std::size_t d : dims_) {
      if (d == 0) throw ShapeError("SystemDims: zero subsystem dimension");
    }
  }

  std::vector<std::size_t> dims_;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::vector<std::size_t> strides(const SystemDims& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
  return s;
}

inline void require_square(const ComplexMatrix& m, std::string_view what) {
  if (m.rows() != m.cols()) {
    throw ShapeError(std::string(what) + ": operator is not square");
  }
}

inline void require_dims(const ComplexMatrix& m, const SystemDims& dims,
                         std::string_view what) {
  require_square(m, what);
  if (static_cast<std::size_t>(m.rows()) != dims.total()) {
    throw ShapeError(std::string(what) + ": matrix dimension " +
                     std::to_string(m.rows()) + " inconsistent with dims " +
                     dims.to_string());
  }
}

}  // namespace detail

/// Master seed. Identical seed plus identical call sequence gives identical output.
struct Seed {
  std::uint64_t master = 0;

  /// Independent, reproducible child seed for stream k.
  Seed sub(std::uint64_t k) const {
    return Seed{detail::splitmix64(detail::splitmix64(master) ^ detail::splitmix64(k + 0x632be59bd9b4e019ULL))};
  }

  std::mt19937_64 engine() const { return std::mt19937_64(detail::splitmix64(master)); }
};

inline ComplexMatrix identity(std::size_t d) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_deviation(const ComplexMatrix& m) {
  detail::require_square(m, "hermiticity_deviation");
  return max_abs(m - m.adjoint());
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return (m + m.adjoint()) * 0.5;
}

inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const auto rows = static_cast<std::size_t>(a.rows() * b.rows());
  const auto cols = static_cast<std::size_t>(a.cols() * b.cols());
  check_dimension(std::max(rows, cols), "tensor_product");
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline ComplexMatrix tensor_product(std::initializer_list<ComplexMatrix> factors) {
  if (factors.size() == 0) throw ShapeError("tensor_product: no factors");
  auto it = factors.begin();
  ComplexMatrix out = *it++;
  for (; it != factors.end(); ++it) out = tensor_product(out, *it);
  return out;
}

inline ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b) {
  check_dimension(static_cast<std::size_t>(a.size() * b.size()), "tensor_product");
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// n-fold tensor power.
inline ComplexMatrix tensor_power(const ComplexMatrix& a, std::size_t n) {
  if (n == 0) throw ShapeError("tensor_power: zero copies");
  ComplexMatrix out = a;
  for (std::size_t k = 1; k < n; ++k) out = tensor_product(out, a);
  return out;
}

/// Traces out every subsystem not listed in `keep`. Kept subsystems retain
/// their original relative order.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, const SystemDims& dims,
                                   std::vector<std::size_t> keep) {
  detail::require_dims(m, dims, "partial_trace");
  if (keep.empty()) throw ShapeError("partial_trace: empty keep set");
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw ShapeError("partial_trace: duplicate subsystem index");
  }
  if (keep.back() >= dims.size()) throw ShapeError("partial_trace: subsystem index out of range");

  const std::size_t n = dims.size();
  const std::size_t total = dims.total();
  std::vector<bool> kept(n, false);
  for (std::size_t k : keep) kept[k] = true;

  std::size_t kept_dim = 1;
  std::size_t traced_dim = 1;
  for (std::size_t k = 0; k < n; ++k) (kept[k] ? kept_dim : traced_dim) *= dims[k];

  // Split each composite index into (kept index, traced index).
  std::vector<std::size_t> kidx(total), tidx(total);
  std::vector<std::size_t> digit(n, 0);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t kv = 0, tv = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (kept[k]) kv = kv * dims[k] + digit[k];
      else tv = tv * dims[k] + digit[k];
    }
    kidx[i] = kv;
    tidx[i] = tv;
    for (std::size_t k = n; k-- > 0;) {
      if (++digit[k] < dims[k]) break;
      digit[k] = 0;
    }
  }

  std::vector<std::vector<std::size_t>> groups(traced_dim);
  for (std::size_t i = 0; i < total; ++i) groups[tidx[i]].push_back(i);

  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(kept_dim),
                                          static_cast<Eigen::Index>(kept_dim));
  for (const auto& g : groups) {
    for (std::size_t i : g) {
      for (std::size_t j : g) {
        out(static_cast<Eigen::Index>(kidx[i]), static_cast<Eigen::Index>(kidx[j])) +=
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  return out;
}

/// Complement form of partial_trace: removes the listed subsystems.
inline ComplexMatrix trace_out(const ComplexMatrix& m, const SystemDims& dims,
                               const std::vector<std::size_t>& traced) {
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (std::find(traced.begin(), traced.end(), k) == traced.end()) keep.push_back(k);
  }
  if (keep.empty()) throw ShapeError("trace_out: cannot trace out every subsystem");
  return partial_trace(m, dims, keep);
}

/// Reorders subsystems: output subsystem k is input subsystem order[k].
inline ComplexMatrix permute_subsystems(const ComplexMatrix& m, const SystemDims& dims,
                                        const std::vector<std::size_t>& order) {
  detail::require_dims(m, dims, "permute_subsystems");
  const std::size_t n = dims.size();
  if (order.size() != n) throw ShapeError("permute_subsystems: order has wrong length");
  std::vector<std::size_t> check = order;
  std::sort(check.begin(), check.end());
  for (std::size_t k = 0; k < n; ++k) {
    if (check[k] != k) throw ShapeError("permute_subsystems: not a permutation");
  }

  const SystemDims out_dims = dims.select(order);
  const auto out_strides = detail::strides(out_dims);
  // position of input subsystem k in the output
  std::vector<std::size_t> where(n);
  for (std::size_t k = 0; k < n; ++k) where[order[k]] = k;

  const std::size_t total = dims.total();
  std::vector<std::size_t> map(total);
  std::vector<std::size_t> digit(n, 0);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t o = 0;
    for (std::size_t k = 0; k < n; ++k) o += digit[k] * out_strides[where[k]];
    map[i] = o;
    for (std::size_t k = n; k-- > 0;) {
      if (++digit[k] < dims[k]) break;
      digit[k] = 0;
    }
  }

  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) {
      out(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j])) =
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

/// Transposes the listed subsystems.
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, const SystemDims& dims,
                                       const std::vector<std::size_t>& systems) {
  detail::require_dims(m, dims, "partial_transpose");
  const std::size_t n = dims.size();
  std::vector<bool> flip(n, false);
  for (std::size_t s : systems) {
    if (s >= n) throw ShapeError("partial_transpose: subsystem index out of range");
    flip[s] = true;
  }
  const auto st = detail::strides(dims);
  const std::size_t total = dims.total();

  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) {
      std::size_t oi = i, oj = j;
      for (std::size_t k = 0; k < n; ++k) {
        if (!flip[k]) continue;
        const std::size_t di = (i / st[k]) % dims[k];
        const std::size_t dj = (j / st[k]) % dims[k];
        oi = oi - di * st[k] + dj * st[k];
        oj = oj - dj * st[k] + di * st[k];
      }
      out(static_cast<Eigen::Index>(oi), static_cast<Eigen::Index>(oj)) =
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

struct EigenSystem {
  RealVector values;     // ascending
  ComplexMatrix vectors;  // columns are eigenvectors
};

/// Spectral decomposition of a Hermitian matrix. Rejects inputs whose
/// anti-Hermitian part exceeds kHermitianTolerance; callers holding
/// accumulated round-off should pass hermitian_part(m).
inline EigenSystem hermitian_eigendecomposition(const ComplexMatrix& m) {
  const double dev = hermiticity_deviation(m);
  if (dev > kHermitianTolerance) {
    throw ContractError("hermitian_eigendecomposition: matrix not Hermitian (deviation " +
                        std::to_string(dev) + ")");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw ContractError("hermitian_eigendecomposition: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// f applied to the spectrum of a Hermitian matrix.
template <class F>
ComplexMatrix hermitian_function(const ComplexMatrix& m, F&& f) {
  const EigenSystem es = hermitian_eigendecomposition(m);
  RealVector fv = es.values.unaryExpr(std::forward<F>(f));
  return es.vectors * fv.cast<Complex>().asDiagonal() * es.vectors.adjoint();
}

inline ComplexMatrix random_gaussian_matrix(std::size_t rows, std::size_t cols,
                                            std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix z(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re * s, im * s);
    }
  }
  return z;
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
/// R's diagonal folded back into Q.
inline ComplexMatrix haar_random_unitary(std::size_t dim, Seed seed) {
  if (dim == 0) throw std::invalid_argument("haar_random_unitary: dim must be >= 1");
  check_dimension(dim, "haar_random_unitary");
  auto rng = seed.engine();
  const ComplexMatrix z = random_gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const Complex d = r(k, k);
    const double a = std::abs(d);
    q.col(k) *= (a > 0.0 ? d / a : Complex(1.0));
  }
  return q;
}

inline double unitarity_deviation(const ComplexMatrix& u) {
  return max_abs(u.adjoint() * u - identity(static_cast<std::size_t>(u.cols())));
}

namespace pauli {

inline ComplexMatrix x() { return (ComplexMatrix(2, 2) << 0, 1, 1, 0).finished(); }
inline ComplexMatrix y() { return (ComplexMatrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished(); }
inline ComplexMatrix z() { return (ComplexMatrix(2, 2) << 1, 0, 0, -1).finished(); }

}  // namespace pauli

}  // namespace locclab
