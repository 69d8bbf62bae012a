// Teleportation and the two reductions between entanglement creation by
// one-way LOCC and cloning, plus the exact-flip entanglement swap.
#pragma once

#include "locclab/channels.hpp"
#include "locclab/entanglement.hpp"
#include "locclab/estimation.hpp"
#include "locclab/report.hpp"

#include <functional>
#include <numeric>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace locclab {

/// X|k> = |k+1 mod d>.
inline ComplexMatrix shift_operator(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix x = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) x((k + 1) % n, k) = 1.0;
  return x;
}

/// Z|k> = exp(2 pi i k / d)|k>.
inline ComplexMatrix clock_operator(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix z = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    z(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(d));
  }
  return z;
}

inline ComplexMatrix matrix_power(const ComplexMatrix& m, std::size_t e) {
  ComplexMatrix out = ComplexMatrix::Identity(m.rows(), m.cols());
  for (std::size_t k = 0; k < e; ++k) out = out * m;
  return out;
}

/// Local unitary on Bob's side taking the singlet to the canonical
/// maximally entangled state: (I ⊗ iY)|Psi-> = |Phi+>.
inline ComplexMatrix singlet_to_canonical() {
  return tensor_product(identity(2), ComplexMatrix(Complex(0, 1) * pauli::y()));
}

/// Alice (C ⊗ A) performs the generalized Bell measurement onto
/// (X^a Z^b ⊗ I)|Phi_d>; Bob (B) applies X^a Z^b on outcome (a, b).
/// With A ⊗ B in |Phi_d>, the induced map C -> B is the identity.
inline OneWayLccChannel teleportation_channel(std::size_t d) {
  if (d < 2) throw std::invalid_argument("teleportation_channel: d must be >= 2");
  const ComplexMatrix x = shift_operator(d);
  const ComplexMatrix z = clock_operator(d);
  const ComplexVector phi = maximally_entangled_state(d).amplitudes();
  std::vector<InstrumentOutcome> outcomes;
  std::vector<KrausChannel> bob;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      const ComplexMatrix u = matrix_power(x, a) * matrix_power(z, b);
      const ComplexVector bell = tensor_product(u, identity(d)) * phi;
      outcomes.push_back({"x" + std::to_string(a) + "z" + std::to_string(b), bell * bell.adjoint()});
      bob.push_back(KrausChannel::unitary(u, {d}));
    }
  }
  return OneWayLccChannel(Instrument(std::move(outcomes), {d, d}), std::move(bob));
}

/// Tr_CA of the teleportation output for P_C ⊗ resource.
inline DensityMatrix teleport(const OneWayLccChannel& tel, const DensityMatrix& p_c, const DensityMatrix& resource) {
  const DensityMatrix out = apply_one_way_lcc(tel, tensor_product(p_c, resource));
  return out.reduce({2});
}

// ---------------------------------------------------------------------------
// Entangler -> cloner

struct EntanglerBranch {
  std::string label;
  double probability;
  DensityMatrix state;  // on A ⊗ B
};

/// A hypothetical machine that leaves A ⊗ B in `state` with probability p on
/// Alice's outcome. Machines that output entanglement from product inputs
/// cannot be one-way LOCC channels; they carry realizable() == false and exist
/// to drive the reduction.
class EntanglerOracle {
 public:
  EntanglerOracle(std::vector<EntanglerBranch> branches, bool realizable)
      : branches_(std::move(branches)), realizable_(realizable) {
    if (branches_.empty()) throw ContractError("EntanglerOracle: no branches");
    const SystemDims dims = branches_.front().state.dims();
    if (dims.size() != 2 || dims[0] != dims[1]) throw ShapeError("EntanglerOracle: branch states must be d x d");
    double total = 0.0;
    for (const auto& b : branches_) {
      if (b.state.dims() != dims) throw ShapeError("EntanglerOracle: branch states on different spaces");
      if (!(b.probability >= 0.0)) throw ContractError("EntanglerOracle: negative branch probability");
      total += b.probability;
    }
    if (!(std::abs(total - 1.0) <= 1e-10)) {
      throw ContractError("EntanglerOracle: branch probabilities sum to " + std::to_string(total));
    }
  }

  /// Every branch is the canonical maximally entangled state.
  static EntanglerOracle exact(std::size_t d, std::size_t branches = 1) {
    std::vector<EntanglerBranch> out;
    const DensityMatrix phi = projector(maximally_entangled_state(d));
    for (std::size_t i = 0; i < branches; ++i) {
      out.push_back({std::to_string(i), 1.0 / static_cast<double>(branches), phi});
    }
    return EntanglerOracle(std::move(out), false);
  }

  /// Werner(p) rotated into the canonical convention:
  /// p |Phi+><Phi+| + (1 - p) I/4. Separable, hence realizable, for p <= 1/3.
  static EntanglerOracle werner(double p) {
    const ComplexMatrix u = singlet_to_canonical();
    const DensityMatrix w = werner_state(p);
    return EntanglerOracle({{"0", 1.0, DensityMatrix(hermitian_part(u * w.matrix() * u.adjoint()), {2, 2})}},
                           p <= 1.0 / 3.0);
  }

  /// Branch ensemble of a genuine one-way LOCC channel on a product input.
  static EntanglerOracle from_one_way_lcc(const OneWayLccChannel& ch, const DensityMatrix& p_a,
                                          const DensityMatrix& p_b) {
    std::vector<EntanglerBranch> out;
    for (auto& b : branch_outcomes(ch, tensor_product(p_a, p_b))) {
      out.push_back({b.label, b.probability, b.state});
    }
    double total = 0.0;
    for (const auto& b : out) total += b.probability;
    for (auto& b : out) b.probability /= total;
    return EntanglerOracle(std::move(out), true);
  }

  const std::vector<EntanglerBranch>& branches() const { return branches_; }
  bool realizable() const { return realizable_; }
  std::size_t local_dim() const { return branches_.front().state.dims()[0]; }

 private:
  std::vector<EntanglerBranch> branches_;
  bool realizable_;
};

struct ComposedBranch {
  std::string label;       // "i.j"
  double probability;      // p_i * p_{j|i}
  double conditional;      // p_{j|i}
  DensityMatrix state;     // normalized, on C ⊗ A ⊗ B
};

/// Entangler on A ⊗ B followed by teleportation of C through the result.
class EntangleThenTeleport {
 public:
  EntangleThenTeleport(EntanglerOracle entangler, OneWayLccChannel teleport)
      : entangler_(std::move(entangler)), teleport_(std::move(teleport)) {}

  const EntanglerOracle& entangler() const { return entangler_; }
  const OneWayLccChannel& teleport() const { return teleport_; }
  std::size_t dim() const { return entangler_.local_dim(); }

  /// Branches (i, j) with W^{ij} = Ṽ^j (I_C ⊗ V^i) and Bob map Λ̃^j Λ^i.
  std::vector<ComposedBranch> branches(const DensityMatrix& p_c) const {
    if (p_c.dimension() != dim()) throw ShapeError("EntangleThenTeleport: input dimension mismatch");
    std::vector<ComposedBranch> out;
    for (const auto& e : entangler_.branches()) {
      if (e.probability < kNegligibleProbability) continue;
      const ComplexMatrix input = tensor_product(p_c.matrix(), e.state.matrix());
      for (std::size_t j = 0; j < teleport_.branch_count(); ++j) {
        const ComplexMatrix sigma = hermitian_part(teleport_.branch_action(j, input));
        const double cond = sigma.trace().real();
        if (e.probability * cond < kNegligibleProbability) continue;
        out.push_back({e.label + "." + teleport_.alice().outcomes()[j].label, e.probability * cond, cond,
                       DensityMatrix(sigma / cond, {dim(), dim(), dim()})});
      }
    }
    return out;
  }

  /// Tr_CA of the branch mixture.
  DensityMatrix recovered(const DensityMatrix& p_c) const {
    const auto n = static_cast<Eigen::Index>(dim() * dim() * dim());
    ComplexMatrix mix = ComplexMatrix::Zero(n, n);
    for (const auto& b : branches(p_c)) mix += b.probability * b.state.matrix();
    return DensityMatrix::normalized(partial_trace(mix, {dim(), dim(), dim()}, {2}), {dim()});
  }

 private:
  EntanglerOracle entangler_;
  OneWayLccChannel teleport_;
};

inline EntangleThenTeleport compose_entangler_teleport(const EntanglerOracle& entangler, std::size_t d) {
  if (entangler.local_dim() != d) {
    throw ShapeError("compose_entangler_teleport: entangler acts on " + std::to_string(entangler.local_dim()) +
                     "-dimensional systems, expected " + std::to_string(d));
  }
  return EntangleThenTeleport(entangler, teleportation_channel(d));
}

struct BroadcastResult {
  DensityMatrix joint;                  // on B_1 ⊗ ... ⊗ B_n
  std::vector<DensityMatrix> marginals;  // per copy
  std::size_t branch_count;
};

/// Largest n with d^(2+n) within the dimension cap.
inline std::size_t max_broadcast_copies(std::size_t d) {
  std::size_t n = 0;
  std::size_t total = d * d * d;
  while (total <= dimension_cap()) {
    ++n;
    total *= d;
  }
  return n;
}

/// Runs the composed protocol with n fresh B systems, each receiving the
/// branch's Bob map, and returns Tr_CA of the joint output on C A B_1..B_n.
/// For an oracle branch the Bob map is represented by its output state on
/// P_B, i.e. Bob's conditional state after the teleportation correction.
inline BroadcastResult broadcast_cloner(const EntanglerOracle& entangler, std::size_t n, std::size_t d,
                                        const PureState& p_c) {
  if (n == 0) throw std::invalid_argument("broadcast_cloner: n must be >= 1");
  std::size_t total = d * d;
  for (std::size_t k = 0; k < n; ++k) {
    total *= d;
    if (total > dimension_cap()) {
      throw SizeError("broadcast_cloner: C A B^" + std::to_string(n) + " exceeds the dimension cap " +
                      std::to_string(dimension_cap()) + "; maximal feasible n is " +
                      std::to_string(max_broadcast_copies(d)));
    }
  }
  const EntangleThenTeleport protocol = compose_entangler_teleport(entangler, d);
  const auto branches = protocol.branches(projector(p_c));

  std::vector<std::size_t> layout(2 + n, d);
  const SystemDims dims(layout);
  const auto dim_total = static_cast<Eigen::Index>(total);
  ComplexMatrix joint = ComplexMatrix::Zero(dim_total, dim_total);
  for (const auto& b : branches) {
    const ComplexMatrix alice = partial_trace(b.state.matrix(), {d, d, d}, {0, 1});
    const ComplexMatrix bob = partial_trace(b.state.matrix(), {d, d, d}, {2});
    // Alice's register is projected onto a pure Bell state, so each branch factorizes.
    const double residual = max_abs(tensor_product(alice, bob) - b.state.matrix());
    if (residual > 1e-9) {
      throw ContractError("broadcast_cloner: branch '" + b.label + "' does not factorize (residual " +
                          std::to_string(residual) + ")");
    }
    joint += b.probability * tensor_product(alice, tensor_power(bob, n));
  }
  std::vector<std::size_t> keep(n);
  std::iota(keep.begin(), keep.end(), 2);
  DensityMatrix copies = DensityMatrix::normalized(partial_trace(joint, dims, keep), SystemDims::uniform(d, n));
  std::vector<DensityMatrix> marginals;
  for (std::size_t k = 0; k < n; ++k) marginals.push_back(copies.reduce({k}));
  return {std::move(copies), std::move(marginals), branches.size()};
}

struct TraceIdentityResidual {
  double first_pair;   // |Tr_12[sum A⊗B⊗B] - Tr_1[sum A⊗B]|_max
  double second_pair;  // |Tr_13[sum A⊗B⊗B] - Tr_1[sum A⊗B]|_max
  double max() const { return std::max(first_pair, second_pair); }
};

/// Both sides of Tr_12[sum_i A_i⊗B_i⊗B_i] = Tr_13[...] = Tr_1[sum_i A_i⊗B_i]
/// for operators with Tr B_i = 1.
inline TraceIdentityResidual verify_trace_identity(const std::vector<std::pair<ComplexMatrix, ComplexMatrix>>& family) {
  if (family.empty()) throw std::invalid_argument("verify_trace_identity: empty family");
  const std::size_t da = static_cast<std::size_t>(family.front().first.rows());
  const std::size_t db = static_cast<std::size_t>(family.front().second.rows());
  const auto n3 = static_cast<Eigen::Index>(da * db * db);
  const auto n2 = static_cast<Eigen::Index>(da * db);
  ComplexMatrix triple = ComplexMatrix::Zero(n3, n3);
  ComplexMatrix pair = ComplexMatrix::Zero(n2, n2);
  for (const auto& [a, b] : family) {
    detail::require_shape(a, da, da, "verify_trace_identity");
    detail::require_shape(b, db, db, "verify_trace_identity");
    const double dev = std::abs(b.trace() - Complex(1.0));
    if (dev > 1e-10) throw ContractError("verify_trace_identity: Tr B_i deviates from 1 by " + std::to_string(dev));
    triple += tensor_product(a, tensor_product(b, b));
    pair += tensor_product(a, b);
  }
  const ComplexMatrix rhs = partial_trace(pair, {da, db}, {1});
  return {max_abs(partial_trace(triple, {da, db, db}, {2}) - rhs),
          max_abs(partial_trace(triple, {da, db, db}, {1}) - rhs)};
}

// ---------------------------------------------------------------------------
// Cloner -> flipper

/// State-level N-copy cloner: psi -> a state on the N-copy symmetric subspace
/// (Dicke basis). The perfect cloner psi -> psi^{⊗N} is not a linear map and is
/// only evaluated on pure inputs.
class ClonerOracle {
 public:
  using Action = std::function<ComplexVector(const ComplexVector&)>;

  ClonerOracle(std::size_t copies, Action action, std::string name)
      : copies_(copies), action_(std::move(action)), name_(std::move(name)) {
    if (copies_ == 0) throw std::invalid_argument("ClonerOracle: copies must be >= 1");
  }

  static ClonerOracle perfect(std::size_t copies) {
    return ClonerOracle(copies, [copies](const ComplexVector& psi) { return symmetric_power(psi, copies); },
                        "perfect");
  }

  std::size_t copies() const { return copies_; }
  const std::string& name() const { return name_; }

  PureState clone(const PureState& psi) const {
    if (psi.dimension() != 2) throw ShapeError("ClonerOracle: input is not a qubit");
    return PureState(action_(psi.amplitudes()), {copies_ + 1});
  }

  /// Mean over copies of F(copy_k, psi).
  double per_copy_fidelity(const PureState& psi) const {
    const ComplexVector full = symmetric_embedding(copies_) * clone(psi).amplitudes();
    const DensityMatrix joint(full * full.adjoint(), SystemDims::uniform(2, copies_));
    const DensityMatrix target = projector(psi);
    double f = 0.0;
    for (std::size_t k = 0; k < copies_; ++k) f += fidelity(joint.reduce({k}), target);
    return f / static_cast<double>(copies_);
  }

 private:
  std::size_t copies_;
  Action action_;
  std::string name_;
};

/// Clone-then-measure on Alice's side, prepare-the-guess on Bob's side.
/// `channel` is a genuine one-way LOCC channel whose Alice input is the
/// N-copy symmetric register produced by the cloner.
struct Flipper {
  ClonerOracle cloner;
  OneWayLccChannel channel;

  /// Tr_A of the output on psi ⊗ P_B.
  DensityMatrix bob_output(const PureState& psi, const DensityMatrix& p_b) const {
    const ComplexVector w = cloner.clone(psi).amplitudes();
    return bob_marginal(channel, w * w.adjoint(), p_b);
  }

  /// Full output on (Alice register) ⊗ B.
  DensityMatrix apply(const PureState& psi, const DensityMatrix& p_b) const {
    return apply_one_way_lcc(channel, tensor_product(projector(cloner.clone(psi)), p_b));
  }
};

inline Flipper flipper_from_cloner(const ClonerOracle& cloner, const EstimationPovm& povm) {
  if (cloner.copies() != povm.copies()) {
    throw std::invalid_argument("flipper_from_cloner: cloner produces " + std::to_string(cloner.copies()) +
                                " copies but the POVM measures " + std::to_string(povm.copies()));
  }
  const SystemDims alice_dims{povm.copies() + 1};
  std::vector<InstrumentOutcome> outcomes;
  std::vector<KrausChannel> bob;
  for (const auto& e : povm.elements()) {
    outcomes.push_back({e.label, hermitian_function(hermitian_part(e.op), [](double x) { return std::sqrt(std::max(x, 0.0)); })});
    bob.push_back(KrausChannel::replace({2}, e.guess));
  }
  return {cloner, OneWayLccChannel(Instrument(std::move(outcomes), alice_dims), std::move(bob))};
}

namespace detail {

template <class BobOutput>
double mean_flip_fidelity(BobOutput&& bob_output, std::size_t trials, Seed seed) {
  if (trials == 0) throw std::invalid_argument("flip_fidelity: trials must be >= 1");
  const DensityMatrix p_b = projector(basis_state({2}, 0));
  double sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const PureState psi = random_pure_state({2}, seed.sub(t));
    sum += fidelity(projector(psi), bob_output(psi, p_b));
  }
  return sum / static_cast<double>(trials);
}

}  // namespace detail

/// Mean over Haar-random P_A of F(Tr_A[Λ(P_A ⊗ |0><0|)], P_A) for a map on two qubits.
inline double flip_fidelity(const KrausChannel& ch, std::size_t trials, Seed seed) {
  if (ch.input_dims().total() != 4 || ch.output_dims().total() != 4) {
    throw ShapeError("flip_fidelity: channel must act on two qubits");
  }
  return detail::mean_flip_fidelity(
      [&](const PureState& psi, const DensityMatrix& p_b) {
        const ComplexMatrix out = ch.apply(tensor_product(projector(psi).matrix(), p_b.matrix()));
        return DensityMatrix::normalized(partial_trace(out, {2, 2}, {1}), {2});
      },
      trials, seed);
}

inline double flip_fidelity(const OneWayLccChannel& ch, std::size_t trials, Seed seed) {
  if (ch.alice_input_dims().total() != 2 || ch.bob_input_dims().total() != 2 || ch.bob_output_dims().total() != 2) {
    throw ShapeError("flip_fidelity: channel must act on qubits");
  }
  return detail::mean_flip_fidelity(
      [&](const PureState& psi, const DensityMatrix& p_b) {
        return bob_marginal(ch, projector(psi).matrix(), p_b);
      },
      trials, seed);
}

inline double flip_fidelity(const Flipper& f, std::size_t trials, Seed seed) {
  return detail::mean_flip_fidelity(
      [&](const PureState& psi, const DensityMatrix& p_b) { return f.bob_output(psi, p_b); }, trials, seed);
}

// ---------------------------------------------------------------------------
// Exact flip and entanglement swap

inline constexpr double kExactFlipTolerance = 1e-10;
inline constexpr double kSwapTolerance = 1e-9;

/// max_{ij} |Tr_A[Λ(|i><j| ⊗ P_B)] - |i><j||_max for a map on d ⊗ d.
inline double flip_residual(const KrausChannel& ch, const DensityMatrix& p_b) {
  const std::size_t d = p_b.dimension();
  if (ch.input_dims().total() != d * d || ch.output_dims().total() != d * d) {
    throw ShapeError("flip_residual: channel does not act on d x d");
  }
  const auto n = static_cast<Eigen::Index>(d);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      ComplexMatrix e = ComplexMatrix::Zero(n, n);
      e(i, j) = 1.0;
      const ComplexMatrix out = partial_trace(ch.apply(tensor_product(e, p_b.matrix())), {d, d}, {1});
      worst = std::max(worst, max_abs(out - e));
    }
  }
  return worst;
}

/// Applies Λ_A(ρ) = Tr[Λ_V Λ_AB(ρ ⊗ P_B)] to the A half of `ent` on A ⊗ C and
/// compares with `ent`. Requires Λ_AB to flip every input exactly.
inline ExperimentReport entanglement_swap_check(const KrausChannel& ch, const DensityMatrix& p_b, const PureState& ent) {
  Stopwatch clock;
  const double residual = flip_residual(ch, p_b);
  if (!(residual <= kExactFlipTolerance)) {
    throw ContractError("entanglement_swap_check: channel is not an exact flip (flip residual " +
                        std::to_string(residual) + ")");
  }
  const std::size_t d = p_b.dimension();
  if (ent.dims().size() != 2 || ent.dims()[0] != d) throw ShapeError("entanglement_swap_check: ent must live on A ⊗ C");
  const std::size_t dc = ent.dims()[1];

  // A C B -> A B C
  const DensityMatrix ent_rho = projector(ent);
  const ComplexMatrix acb = tensor_product(ent_rho.matrix(), p_b.matrix());
  const ComplexMatrix abc = permute_subsystems(acb, {d, dc, d}, {0, 2, 1});
  const KrausChannel idle = KrausChannel::identity({dc});
  const KrausChannel step = compose(tensor_product(flip_channel(d), idle), tensor_product(ch, idle));
  const ComplexMatrix out = step.apply(abc);
  const DensityMatrix result = DensityMatrix::normalized(partial_trace(out, {d, d, dc}, {0, 2}), {d, dc});

  ExperimentReport report("verify swap", Seed{0});
  report.set_metric("flip_residual", residual);
  report.set_metric("trace_distance", trace_distance(result, ent_rho));
  report.require_at_most("trace_distance", "swap", kSwapTolerance);
  if (d == 2 && dc == 2) {
    const double before = concurrence(ent_rho);
    const double after = concurrence(result);
    report.set_metric("concurrence_before", before);
    report.set_metric("concurrence_after", after);
    report.set_metric("concurrence_change", std::abs(after - before));
    report.require_at_most("concurrence_change", "swap", kSwapTolerance);
  }
  report.set_duration_ms(clock.elapsed_ms());
  return report;
}

/// Linear extension of cloning on the computational basis: |k> -> |k>^{⊗N},
/// i.e. |0> -> Dicke |N,0> and |1> -> Dicke |N,N>.
inline ComplexMatrix basis_copying_isometry(std::size_t copies) {
  ComplexMatrix l = ComplexMatrix::Zero(static_cast<Eigen::Index>(copies + 1), 2);
  l(0, 0) = 1.0;
  l(static_cast<Eigen::Index>(copies), 1) = 1.0;
  return l;
}

/// Concurrence between Bob's output and the reference C when the flipper acts
/// on the A half of a singlet on A ⊗ C. Alice's register receives A through
/// basis_copying_isometry.
inline double flipper_output_concurrence(const Flipper& f) {
  const std::size_t reg = f.cloner.copies() + 1;
  const ComplexMatrix lift = tensor_product(basis_copying_isometry(f.cloner.copies()), identity(2));
  const ComplexVector ac = lift * singlet().amplitudes();
  const ComplexMatrix rcb = tensor_product(ComplexMatrix(ac * ac.adjoint()), projector(basis_state({2}, 0)).matrix());
  const ComplexMatrix rbc = permute_subsystems(rcb, {reg, 2, 2}, {0, 2, 1});
  const KrausChannel step = tensor_product(to_kraus(f.channel), KrausChannel::identity({2}));
  const ComplexMatrix out = step.apply(rbc);
  return concurrence(DensityMatrix::normalized(partial_trace(out, {reg, 2, 2}, {1, 2}), {2, 2}));
}

}  // namespace locclab
