// Entanglement measures and the monotonicity / no-creation audits.
#pragma once

#include "locclab/channels.hpp"
#include "locclab/report.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace locclab {

enum class EntanglementMeasure { Concurrence, EntanglementOfFormation, Negativity, SingletFidelity };

inline std::string to_string(EntanglementMeasure m) {
  switch (m) {
    case EntanglementMeasure::Concurrence: return "concurrence";
    case EntanglementMeasure::EntanglementOfFormation: return "eof";
    case EntanglementMeasure::Negativity: return "negativity";
    case EntanglementMeasure::SingletFidelity: return "singlet_fidelity";
  }
  return "unknown";
}

inline std::optional<EntanglementMeasure> parse_measure(const std::string& s) {
  if (s == "concurrence") return EntanglementMeasure::Concurrence;
  if (s == "eof" || s == "entanglement_of_formation") return EntanglementMeasure::EntanglementOfFormation;
  if (s == "negativity") return EntanglementMeasure::Negativity;
  if (s == "singlet_fidelity") return EntanglementMeasure::SingletFidelity;
  return std::nullopt;
}

namespace detail {

// Spectral weight below this is treated as round-off when factoring rho = X X^dagger.
inline constexpr double kSpectralFloor = 1e-14;

inline void require_two_qubits(const DensityMatrix& rho, std::string_view what) {
  if (rho.dims() != SystemDims{2, 2}) {
    throw ShapeError(std::string(what) + ": requires a 2x2 bipartite state, got dims " + rho.dims().to_string());
  }
}

inline double binary_entropy(double x) {
  auto term = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
  return term(x) + term(1.0 - x);
}

}  // namespace detail

/// Wootters concurrence. The spin-flip eigenvalues lambda_i are computed as
/// singular values of T = X^dagger (Y⊗Y) X^* with rho = X X^dagger, which
/// keeps round-off at machine precision for rank-deficient states.
inline double concurrence(const DensityMatrix& rho) {
  detail::require_two_qubits(rho, "concurrence");
  const EigenSystem es = hermitian_eigendecomposition(rho.matrix());
  std::vector<Eigen::Index> support;
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    if (es.values(k) > detail::kSpectralFloor) support.push_back(k);
  }
  ComplexMatrix x(4, static_cast<Eigen::Index>(support.size()));
  for (std::size_t c = 0; c < support.size(); ++c) {
    x.col(static_cast<Eigen::Index>(c)) = es.vectors.col(support[c]) * std::sqrt(es.values(support[c]));
  }
  const ComplexMatrix yy = tensor_product(pauli::y(), pauli::y());
  const ComplexMatrix t = x.adjoint() * yy * x.conjugate();
  Eigen::JacobiSVD<ComplexMatrix> svd(t);
  RealVector lambda = RealVector::Zero(4);
  lambda.head(svd.singularValues().size()) = svd.singularValues();  // descending
  return std::max(0.0, lambda(0) - lambda(1) - lambda(2) - lambda(3));
}

inline double entanglement_of_formation(const DensityMatrix& rho) {
  const double c = std::min(1.0, concurrence(rho));
  return detail::binary_entropy(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))));
}

/// Sum of |negative eigenvalues| of the partial transpose over the subsystems in `cut`.
inline double negativity(const DensityMatrix& rho, const std::vector<std::size_t>& cut) {
  if (cut.empty() || cut.size() >= rho.dims().size()) {
    throw ShapeError("negativity: cut must be a proper non-empty subset of subsystems");
  }
  for (std::size_t s : cut) {
    if (s >= rho.dims().size()) throw ShapeError("negativity: cut index out of range");
  }
  const ComplexMatrix pt = partial_transpose(rho.matrix(), rho.dims(), cut);
  const RealVector ev = hermitian_eigendecomposition(hermitian_part(pt)).values;
  double s = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k) < 0.0) s -= ev(k);
  }
  return s;
}

/// Negativity across first subsystem | rest.
inline double negativity(const DensityMatrix& rho) { return negativity(rho, {0}); }

enum class SingletTarget { Canonical, Singlet };

/// <Phi|rho|Phi> for the canonical maximally entangled state on d⊗d, or the
/// two-qubit singlet when target == Singlet.
inline double singlet_fidelity(const DensityMatrix& rho, std::size_t d,
                               SingletTarget target = SingletTarget::Canonical) {
  if (rho.dims() != SystemDims{d, d}) {
    throw ShapeError("singlet_fidelity: state dims " + rho.dims().to_string() + " are not " +
                     std::to_string(d) + "x" + std::to_string(d));
  }
  if (target == SingletTarget::Singlet && d != 2) {
    throw ShapeError("singlet_fidelity: the singlet target is two-qubit only");
  }
  const PureState phi = target == SingletTarget::Singlet ? singlet() : maximally_entangled_state(d);
  const ComplexVector& v = phi.amplitudes();
  return std::clamp((v.adjoint() * rho.matrix() * v)(0, 0).real(), 0.0, 1.0);
}

/// Magic basis: a two-qubit state is maximally entangled iff its coefficients
/// in this basis are real up to a global phase.
inline ComplexMatrix magic_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  ComplexMatrix b(4, 4);
  b.col(0) << s, 0, 0, s;
  b.col(1) << i * s, 0, 0, -i * s;
  b.col(2) << 0, i * s, i * s, 0;
  b.col(3) << 0, s, -s, 0;
  return b;
}

/// Singlet fidelity maximized over all maximally entangled targets (fully
/// entangled fraction): largest eigenvalue of Re(B^dagger rho B).
inline double fully_entangled_fraction(const DensityMatrix& rho) {
  detail::require_two_qubits(rho, "fully_entangled_fraction");
  const ComplexMatrix b = magic_basis();
  const Eigen::Matrix4d re = (b.adjoint() * rho.matrix() * b).real();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(0.5 * (re + re.transpose()));
  return std::clamp(solver.eigenvalues().maxCoeff(), 0.0, 1.0);
}

/// Value of `m` on a two-qubit state. SingletFidelity evaluates the fully
/// entangled fraction, the form that is invariant under local unitaries.
inline double evaluate(EntanglementMeasure m, const DensityMatrix& rho) {
  switch (m) {
    case EntanglementMeasure::Concurrence: return concurrence(rho);
    case EntanglementMeasure::EntanglementOfFormation: return entanglement_of_formation(rho);
    case EntanglementMeasure::Negativity: detail::require_two_qubits(rho, "negativity"); return negativity(rho);
    case EntanglementMeasure::SingletFidelity: return fully_entangled_fraction(rho);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Audits

inline constexpr double kMonotonicityTolerance = 1e-7;
inline constexpr double kInvarianceTolerance = 1e-9;
inline constexpr double kNoCreationNegativityTolerance = 1e-10;
inline constexpr double kSeparableSingletCeiling = 0.5;
inline constexpr double kSingletCeilingSlack = 1e-9;

/// Random two-qubit mixed state from a Haar pure state on 4⊗k; k cycles
/// through {1, 2, 4} with the trial index.
inline DensityMatrix audit_two_qubit_state(std::size_t trial, Seed seed) {
  static constexpr std::size_t kEnv[] = {1, 2, 4};
  return random_mixed_state({2, 2}, kEnv[trial % 3], seed);
}

enum class ChannelFamily { RandomOneWay, LocalUnitary, MeasureAndDiscard };

inline std::string to_string(ChannelFamily f) {
  switch (f) {
    case ChannelFamily::RandomOneWay: return "random_one_way";
    case ChannelFamily::LocalUnitary: return "local_unitary";
    case ChannelFamily::MeasureAndDiscard: return "measure_and_discard";
  }
  return "unknown";
}

/// Two-qubit one-way LOCC channel drawn from `family`.
inline OneWayLccChannel sample_audit_channel(ChannelFamily family, Seed seed) {
  switch (family) {
    case ChannelFamily::RandomOneWay: {
      auto rng = seed.sub(0).engine();
      const std::size_t branches = 1 + rng() % 4;
      const std::size_t kraus = 1 + rng() % 3;
      return random_one_way_lcc(2, 2, branches, kraus, seed.sub(1));
    }
    case ChannelFamily::LocalUnitary: {
      Instrument alice({{"0", haar_random_unitary(2, seed.sub(0))}}, {2});
      return OneWayLccChannel(std::move(alice), {KrausChannel::unitary(haar_random_unitary(2, seed.sub(1)), {2})});
    }
    case ChannelFamily::MeasureAndDiscard: {
      // Alice measures Z and resets to |0>; Bob prepares |0> regardless.
      std::vector<InstrumentOutcome> outcomes;
      for (Eigen::Index k = 0; k < 2; ++k) {
        ComplexMatrix v = ComplexMatrix::Zero(2, 2);
        v(0, k) = 1.0;
        outcomes.push_back({std::to_string(k), v});
      }
      const KrausChannel reset = KrausChannel::replace({2}, basis_state({2}, 0));
      return OneWayLccChannel(Instrument(std::move(outcomes), {2}), {reset, reset});
    }
  }
  throw std::invalid_argument("sample_audit_channel: unknown family");
}

/// Checks sum_i p_i E(rho_i) <= E(rho) for the output ensemble of random
/// one-way LOCC channels. Negativity is audited alongside as a separate check.
inline ExperimentReport monotonicity_audit(EntanglementMeasure measure, std::size_t trials, Seed seed,
                                           ChannelFamily family = ChannelFamily::RandomOneWay) {
  if (trials == 0) throw std::invalid_argument("monotonicity_audit: trials must be >= 1");
  Stopwatch clock;
  ExperimentReport report("audit monotonicity", seed);
  report.set_parameter("measure", to_string(measure));
  report.set_parameter("trials", trials);
  report.set_parameter("family", to_string(family));

  double max_violation = -1.0, max_gap = 0.0, neg_max_violation = -1.0;
  std::size_t violations = 0, neg_violations = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const Seed s = seed.sub(t);
    const DensityMatrix rho = audit_two_qubit_state(t, s.sub(0));
    const OneWayLccChannel ch = sample_audit_channel(family, s.sub(1));
    const auto branches = branch_outcomes(ch, rho);

    const double e_in = evaluate(measure, rho);
    const double n_in = negativity(rho);
    double e_out = 0.0, n_out = 0.0;
    for (const auto& b : branches) {
      e_out += b.probability * evaluate(measure, b.state);
      n_out += b.probability * negativity(b.state);
    }
    const double v = e_out - e_in;
    max_violation = std::max(max_violation, v);
    max_gap = std::max(max_gap, std::abs(v));
    if (v > kMonotonicityTolerance) ++violations;
    neg_max_violation = std::max(neg_max_violation, n_out - n_in);
    if (n_out - n_in > kMonotonicityTolerance) ++neg_violations;
  }

  report.set_metric("max_violation", max_violation);
  report.set_metric("violations", static_cast<double>(violations));
  report.set_metric("max_abs_change", max_gap);
  report.set_metric("negativity_max_violation", neg_max_violation);
  report.set_metric("negativity_violations", static_cast<double>(neg_violations));
  report.require_at_most("max_violation", "monotonicity", kMonotonicityTolerance);
  report.require_at_most("negativity_max_violation", "negativity_monotonicity", kMonotonicityTolerance);
  if (family == ChannelFamily::LocalUnitary) {
    report.require_at_most("max_abs_change", "local_unitary_invariance", kInvarianceTolerance);
  }
  report.set_duration_ms(clock.elapsed_ms());
  return report;
}

/// Random product inputs through random separable superoperators and random
/// one-way LOCC channels; the outputs must stay PPT with singlet fidelity at
/// most the separable ceiling 1/2.
inline ExperimentReport no_creation_audit(std::size_t trials, Seed seed) {
  if (trials == 0) throw std::invalid_argument("no_creation_audit: trials must be >= 1");
  Stopwatch clock;
  ExperimentReport report("audit no-creation", seed);
  report.set_parameter("trials", trials);

  double neg_sep = 0.0, neg_lcc = 0.0, fid_sep = 0.0, fid_lcc = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const Seed s = seed.sub(t);
    auto rng = s.sub(0).engine();
    const std::size_t env_a = 1 + t % 2, env_b = 1 + (t / 2) % 2;
    const DensityMatrix input =
        tensor_product(random_mixed_state({2}, env_a, s.sub(1)), random_mixed_state({2}, env_b, s.sub(2)));
    const std::size_t branches = 1 + rng() % 3;
    const std::size_t kraus = 1 + rng() % 2;

    const DensityMatrix out_sep = apply_separable(random_separable(2, 2, branches, kraus, s.sub(3)), input);
    const DensityMatrix out_lcc = apply_one_way_lcc(random_one_way_lcc(2, 2, branches + 1, kraus, s.sub(4)), input);
    neg_sep = std::max(neg_sep, negativity(out_sep));
    neg_lcc = std::max(neg_lcc, negativity(out_lcc));
    fid_sep = std::max(fid_sep, fully_entangled_fraction(out_sep));
    fid_lcc = std::max(fid_lcc, fully_entangled_fraction(out_lcc));
  }

  report.set_metric("separable_max_negativity", neg_sep);
  report.set_metric("one_way_max_negativity", neg_lcc);
  report.set_metric("separable_max_singlet_fidelity", fid_sep);
  report.set_metric("one_way_max_singlet_fidelity", fid_lcc);
  report.require_at_most("separable_max_negativity", "negativity", kNoCreationNegativityTolerance);
  report.require_at_most("one_way_max_negativity", "negativity", kNoCreationNegativityTolerance);
  report.require_at_most("separable_max_singlet_fidelity", "singlet_fidelity_ceiling",
                         kSeparableSingletCeiling + kSingletCeilingSlack);
  report.require_at_most("one_way_max_singlet_fidelity", "singlet_fidelity_ceiling",
                         kSeparableSingletCeiling + kSingletCeilingSlack);
  report.set_duration_ms(clock.elapsed_ms());
  return report;
}

/// |E((U_A⊗U_B) rho (U_A⊗U_B)^dagger) - E(rho)| for all four measures.
inline ExperimentReport local_unitary_invariance_audit(std::size_t trials, Seed seed) {
  if (trials == 0) throw std::invalid_argument("local_unitary_invariance_audit: trials must be >= 1");
  Stopwatch clock;
  ExperimentReport report("audit unitary-invariance", seed);
  report.set_parameter("trials", trials);
  constexpr EntanglementMeasure kAll[] = {EntanglementMeasure::Concurrence, EntanglementMeasure::EntanglementOfFormation,
                                          EntanglementMeasure::Negativity, EntanglementMeasure::SingletFidelity};
  double worst[4] = {0, 0, 0, 0};
  for (std::size_t t = 0; t < trials; ++t) {
    const Seed s = seed.sub(t);
    const DensityMatrix rho = audit_two_qubit_state(t, s.sub(0));
    const ComplexMatrix u = tensor_product(haar_random_unitary(2, s.sub(1)), haar_random_unitary(2, s.sub(2)));
    const DensityMatrix rotated(hermitian_part(u * rho.matrix() * u.adjoint()), {2, 2});
    for (int k = 0; k < 4; ++k) {
      worst[k] = std::max(worst[k], std::abs(evaluate(kAll[k], rotated) - evaluate(kAll[k], rho)));
    }
  }
  for (int k = 0; k < 4; ++k) {
    const std::string name = to_string(kAll[k]) + "_max_change";
    report.set_metric(name, worst[k]);
    report.require_at_most(name, "invariance", kInvarianceTolerance);
  }
  report.set_duration_ms(clock.elapsed_ms());
  return report;
}

}  // namespace locclab
