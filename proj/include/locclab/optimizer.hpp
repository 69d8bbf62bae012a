// Gradient ascent over isometries for the best symmetric 1 -> 2 qubit cloner.
#pragma once

#include "locclab/channels.hpp"
#include "locclab/estimation.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace locclab {

/// Raw complex matrix d_out x d_in stored column by column as (re, im) pairs.
struct IsometryParams {
  std::vector<double> values;
  std::size_t d_in = 0;
  std::size_t d_out = 0;

  std::size_t expected_size() const { return 2 * d_in * d_out; }
};

inline constexpr double kIsometryTolerance = 1e-9;

namespace detail {

inline ComplexMatrix raw_matrix(const IsometryParams& p) {
  if (p.d_in == 0 || p.d_out < p.d_in) throw std::invalid_argument("IsometryParams: need 1 <= d_in <= d_out");
  if (p.values.size() != p.expected_size()) {
    throw std::invalid_argument("IsometryParams: expected " + std::to_string(p.expected_size()) +
                                " parameters, got " + std::to_string(p.values.size()));
  }
  const auto rows = static_cast<Eigen::Index>(p.d_out);
  const auto cols = static_cast<Eigen::Index>(p.d_in);
  ComplexMatrix m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r, k += 2) m(r, c) = Complex(p.values[k], p.values[k + 1]);
  }
  return m;
}

}  // namespace detail

/// Modified Gram-Schmidt with one re-orthogonalization pass. A column that
/// is (numerically) dependent on the previous ones is nudged towards
/// successive basis vectors until it is not; this is deterministic in p.
inline ComplexMatrix decode_isometry(const IsometryParams& p) {
  ComplexMatrix w = detail::raw_matrix(p);
  const Eigen::Index rows = w.rows();
  for (Eigen::Index c = 0; c < w.cols(); ++c) {
    ComplexVector v = w.col(c);
    const double scale = std::max(v.norm(), 1.0);
    for (Eigen::Index attempt = 0;; ++attempt) {
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index q = 0; q < c; ++q) v -= w.col(q).dot(v) * w.col(q);
      }
      if (v.norm() > 1e-10 * scale) break;
      if (attempt >= rows) throw ContractError("decode_isometry: could not complete column " + std::to_string(c));
      v(attempt % rows) += 1e-6 * scale;
    }
    w.col(c) = v / v.norm();
  }
  return w;
}

inline IsometryParams encode_isometry(const ComplexMatrix& w) {
  IsometryParams p{{}, static_cast<std::size_t>(w.cols()), static_cast<std::size_t>(w.rows())};
  p.values.reserve(p.expected_size());
  for (Eigen::Index c = 0; c < w.cols(); ++c) {
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      p.values.push_back(w(r, c).real());
      p.values.push_back(w(r, c).imag());
    }
  }
  return p;
}

inline IsometryParams random_isometry_params(std::size_t d_in, std::size_t d_out, Seed seed) {
  auto rng = seed.engine();
  return encode_isometry(decode_isometry(encode_isometry(random_gaussian_matrix(d_out, d_in, rng))));
}

/// Kraus operators (I ⊗ <a|_anc) W of the channel induced by an isometry
/// whose output ends in an ancilla of dimension `ancilla`.
inline KrausChannel induced_channel(const ComplexMatrix& w, std::size_t ancilla, const SystemDims& output_dims) {
  const auto anc = static_cast<Eigen::Index>(ancilla);
  if (ancilla == 0 || w.rows() % anc != 0) throw std::invalid_argument("induced_channel: ancilla does not divide output");
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index a = 0; a < anc; ++a) {
    ComplexMatrix k(w.rows() / anc, w.cols());
    for (Eigen::Index r = 0; r < k.rows(); ++r) k.row(r) = w.row(r * anc + a);
    ops.push_back(std::move(k));
  }
  return KrausChannel(std::move(ops), SystemDims{static_cast<std::size_t>(w.cols())}, output_dims);
}

// ---------------------------------------------------------------------------
// Quadratures

/// The 60 vertices of the truncated icosahedron, projected to the sphere.
/// As an orbit of the icosahedral group it integrates every polynomial of
/// degree <= 5 exactly against the uniform measure.
inline std::vector<Eigen::Vector3d> truncated_icosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const std::array<Eigen::Vector3d, 3> seeds = {Eigen::Vector3d(0.0, 1.0, 3.0 * phi),
                                                Eigen::Vector3d(1.0, 2.0 + phi, 2.0 * phi),
                                                Eigen::Vector3d(phi, 2.0, 2.0 * phi + 1.0)};
  std::vector<Eigen::Vector3d> out;
  for (const auto& s : seeds) {
    for (int signs = 0; signs < 8; ++signs) {
      Eigen::Vector3d v(signs & 1 ? -s.x() : s.x(), signs & 2 ? -s.y() : s.y(), signs & 4 ? -s.z() : s.z());
      // skip duplicate sign flips of a zero coordinate
      if ((s.x() == 0.0 && (signs & 1)) || (s.y() == 0.0 && (signs & 2)) || (s.z() == 0.0 && (signs & 4))) continue;
      for (int shift = 0; shift < 3; ++shift) {
        out.push_back(Eigen::Vector3d(v((0 + shift) % 3), v((1 + shift) % 3), v((2 + shift) % 3)).normalized());
      }
    }
  }
  return out;
}

struct Quadrature {
  std::vector<ComplexVector> states;

  static Quadrature from_directions(const std::vector<Eigen::Vector3d>& dirs) {
    Quadrature q;
    for (const auto& n : dirs) q.states.push_back(qubit_from_bloch(n));
    return q;
  }
  static Quadrature icosahedral() { return from_directions(truncated_icosahedron()); }
  static Quadrature fibonacci(std::size_t count) { return from_directions(fibonacci_sphere(count)); }
};

// ---------------------------------------------------------------------------
// Objective

inline constexpr std::size_t kClonerAncilla = 2;

/// Fidelities of both output qubits of a 1 -> 2 cloner W (output order
/// copy1 ⊗ copy2 ⊗ ancilla) on one input.
inline std::pair<double, double> copy_fidelities(const ComplexMatrix& w, const ComplexVector& psi) {
  const ComplexVector out = w * psi;
  const Eigen::Index anc = out.size() / 4;
  // <psi|rho_k|psi> = sum over the other indices of |<psi|_k out|^2
  double f1 = 0.0;
  double f2 = 0.0;
  const Complex c0 = std::conj(psi(0));
  const Complex c1 = std::conj(psi(1));
  for (Eigen::Index j = 0; j < 2; ++j) {
    for (Eigen::Index a = 0; a < anc; ++a) {
      f1 += std::norm(c0 * out((0 * 2 + j) * anc + a) + c1 * out((1 * 2 + j) * anc + a));
      f2 += std::norm(c0 * out((j * 2 + 0) * anc + a) + c1 * out((j * 2 + 1) * anc + a));
    }
  }
  return {f1, f2};
}

inline double cloning_objective(const ComplexMatrix& w, const Quadrature& q) {
  if (w.cols() != 2 || w.rows() % 4 != 0) {
    throw std::invalid_argument("cloning_objective: expected a 2-column isometry onto two qubits and an ancilla");
  }
  if (q.states.empty()) throw std::invalid_argument("cloning_objective: empty quadrature");
  double sum = 0.0;
  for (const auto& psi : q.states) {
    const auto [f1, f2] = copy_fidelities(w, psi);
    sum += 0.5 * (f1 + f2);
  }
  return sum / static_cast<double>(q.states.size());
}

inline double cloning_objective(const IsometryParams& p, const Quadrature& q) {
  if (p.d_in != 2 || p.d_out % 4 != 0) {
    throw std::invalid_argument("cloning_objective: d_in must be 2 and d_out a multiple of 4");
  }
  return cloning_objective(decode_isometry(p), q);
}

/// ψ -> ψ ⊗ |0> ⊗ |0>_anc.
inline ComplexMatrix trivial_cloner() {
  ComplexMatrix w = ComplexMatrix::Zero(8, 2);
  w(0, 0) = 1.0;
  w(4, 1) = 1.0;
  return w;
}

/// |k> -> |k>|k>|k>_anc: measure in the computational basis, prepare two copies.
inline ComplexMatrix measure_prepare_cloner() {
  ComplexMatrix w = ComplexMatrix::Zero(8, 2);
  w(0, 0) = 1.0;
  w(7, 1) = 1.0;
  return w;
}

/// Projector onto the symmetric subspace of two qubits.
inline ComplexMatrix symmetric_projector_2() {
  return 0.5 * (identity(4) + flip_channel(2).operators().front());
}

/// ψ -> sum_j sqrt(2/3) P_sym (ψ ⊗ |j>) ⊗ |j>_anc.
inline ComplexMatrix symmetric_cloner() {
  const ComplexMatrix p = symmetric_projector_2();
  ComplexMatrix w = ComplexMatrix::Zero(8, 2);
  for (Eigen::Index j = 0; j < 2; ++j) {
    ComplexMatrix embed = ComplexMatrix::Zero(4, 2);  // I ⊗ |j>
    embed(0 * 2 + j, 0) = 1.0;
    embed(1 * 2 + j, 1) = 1.0;
    const ComplexMatrix k = std::sqrt(2.0 / 3.0) * p * embed;
    for (Eigen::Index r = 0; r < 4; ++r) w.row(r * 2 + j) = k.row(r);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Gradient ascent

inline constexpr double kGradientStep = 1e-5;
inline constexpr double kGradientTolerance = 1e-6;
inline constexpr std::size_t kMaxIterations = 5000;
inline constexpr double kMinStep = 1e-14;

using Objective = std::function<double(const std::vector<double>&)>;

inline std::vector<double> numeric_gradient(const Objective& f, std::vector<double> x, double h = kGradientStep) {
  std::vector<double> g(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double keep = x[k];
    x[k] = keep + h;
    const double up = f(x);
    x[k] = keep - h;
    const double down = f(x);
    x[k] = keep;
    g[k] = (up - down) / (2.0 * h);
  }
  return g;
}

inline double max_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double euclidean_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

struct FiniteDifferenceCheck {
  double max_absolute_error;
  double max_relative_error;  // absolute error over the fine gradient's max norm
};

/// Optimizer gradient (h = 1e-5) against central differences at h = 1e-6.
inline FiniteDifferenceCheck finite_difference_check(const std::vector<double>& x, const Objective& f) {
  const auto coarse = numeric_gradient(f, x, kGradientStep);
  const auto fine = numeric_gradient(f, x, 1e-6);
  double abs_err = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) abs_err = std::max(abs_err, std::abs(coarse[k] - fine[k]));
  const double scale = max_norm(fine);
  return {abs_err, scale > 0.0 ? abs_err / scale : (abs_err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity())};
}

inline FiniteDifferenceCheck finite_difference_check(const IsometryParams& p, const Quadrature& q) {
  return finite_difference_check(p.values, [&](const std::vector<double>& v) {
    return cloning_objective(IsometryParams{v, p.d_in, p.d_out}, q);
  });
}

struct RestartTrace {
  std::size_t iterations = 0;
  std::vector<double> objective_values;  // one per accepted step, starting point first
  std::vector<double> gradient_norms;
  double best_objective = 0.0;
  bool converged = false;
  std::string stop_reason;
  IsometryParams params;
};

struct OptimizationTrace {
  std::vector<RestartTrace> restarts;
  std::size_t best_restart = 0;
  double final_fidelity = 0.0;  // best isometry re-evaluated on a fine mesh

  const RestartTrace& best() const { return restarts.at(best_restart); }

  nlohmann::json to_json() const {
    nlohmann::json rs = nlohmann::json::array();
    for (const auto& r : restarts) {
      rs.push_back({{"iterations", r.iterations},
                    {"best_objective", r.best_objective},
                    {"converged", r.converged},
                    {"stop_reason", r.stop_reason}});
    }
    const auto& b = best();
    return {{"iterations", b.iterations},
            {"objective_values", b.objective_values},
            {"gradient_norms", b.gradient_norms},
            {"final_fidelity", final_fidelity},
            {"best_objective", b.best_objective},
            {"best_restart", best_restart},
            {"restarts", rs}};
  }
};

struct OptimizerOptions {
  std::size_t max_iterations = kMaxIterations;
  double gradient_tolerance = kGradientTolerance;
  double initial_step = 0.1;
  std::size_t ancilla = kClonerAncilla;
  std::size_t final_mesh = 2000;
};

/// Ascent from one starting point. Each candidate is orthonormalized and
/// re-encoded; a step that does not improve the objective is halved.
inline RestartTrace ascend(IsometryParams start, const Quadrature& q, const OptimizerOptions& opt) {
  const std::size_t d_in = start.d_in;
  const std::size_t d_out = start.d_out;
  const Objective f = [&](const std::vector<double>& v) {
    return cloning_objective(IsometryParams{v, d_in, d_out}, q);
  };
  RestartTrace t;
  t.params = encode_isometry(decode_isometry(start));
  double value = f(t.params.values);
  t.objective_values.push_back(value);
  double step = opt.initial_step;
  t.stop_reason = "max_iterations";
  for (; t.iterations < opt.max_iterations; ++t.iterations) {
    const auto g = numeric_gradient(f, t.params.values);
    const double gn = euclidean_norm(g);
    t.gradient_norms.push_back(gn);
    if (gn <= opt.gradient_tolerance) {
      t.converged = true;
      t.stop_reason = "gradient_norm";
      break;
    }
    bool accepted = false;
    while (step >= kMinStep) {
      IsometryParams cand = t.params;
      for (std::size_t k = 0; k < g.size(); ++k) cand.values[k] += step * g[k];
      cand = encode_isometry(decode_isometry(cand));
      const double cv = f(cand.values);
      if (cv > value) {
        t.params = std::move(cand);
        value = cv;
        t.objective_values.push_back(value);
        step *= 2.0;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      t.stop_reason = "step_underflow";
      break;
    }
  }
  t.best_objective = value;
  return t;
}

/// Best symmetric 1 -> 2 qubit cloner found over `restarts` random starts.
inline OptimizationTrace optimize_cloner(std::size_t restarts, Seed seed, const OptimizerOptions& opt = {}) {
  if (restarts == 0) throw std::invalid_argument("optimize_cloner: restarts must be >= 1");
  const Quadrature q = Quadrature::icosahedral();
  OptimizationTrace trace;
  for (std::size_t r = 0; r < restarts; ++r) {
    trace.restarts.push_back(ascend(random_isometry_params(2, 4 * opt.ancilla, seed.sub(r)), q, opt));
    if (trace.restarts.back().best_objective > trace.restarts[trace.best_restart].best_objective) {
      trace.best_restart = r;
    }
  }
  trace.final_fidelity = cloning_objective(trace.best().params, Quadrature::fibonacci(opt.final_mesh));
  return trace;
}

}  // namespace locclab
