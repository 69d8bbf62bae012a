// Completely positive trace-preserving maps: Kraus channels, Stinespring
// dilations, instruments, one-way LOCC channels and separable superoperators.
#pragma once

#include "locclab/states.hpp"

#include <optional>
#include <string>
#include <vector>

namespace locclab {

inline constexpr double kCompletenessTolerance = 1e-9;
// Branches with smaller probability are dropped from branch ensembles.
inline constexpr double kNegligibleProbability = 1e-14;

namespace detail {

inline double completeness_residual(const std::vector<ComplexMatrix>& ops) {
  ComplexMatrix sum = ComplexMatrix::Zero(ops.front().cols(), ops.front().cols());
  for (const auto& v : ops) sum.noalias() += v.adjoint() * v;
  return max_abs(sum - ComplexMatrix::Identity(sum.rows(), sum.cols()));
}

inline void require_shape(const ComplexMatrix& m, std::size_t rows, std::size_t cols,
                          std::string_view what) {
  if (static_cast<std::size_t>(m.rows()) != rows || static_cast<std::size_t>(m.cols()) != cols) {
    throw ShapeError(std::string(what) + ": expected " + std::to_string(rows) + "x" +
                     std::to_string(cols) + " operator, got " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()));
  }
}

/// Extends orthonormal columns to a square unitary. Candidates are standard
/// basis vectors, taken greedily by largest residual after projection.
inline ComplexMatrix complete_to_unitary(const ComplexMatrix& isometry) {
  const Eigen::Index n = isometry.rows();
  const Eigen::Index k = isometry.cols();
  ComplexMatrix u(n, n);
  u.leftCols(k) = isometry;
  for (Eigen::Index filled = k; filled < n; ++filled) {
    const auto basis = u.leftCols(filled);
    ComplexMatrix residual = ComplexMatrix::Identity(n, n) - basis * basis.adjoint();
    Eigen::Index best = 0;
    residual.colwise().norm().maxCoeff(&best);
    ComplexVector v = residual.col(best);
    v -= basis * (basis.adjoint() * v);  // second pass for orthogonality
    u.col(filled) = v / v.norm();
  }
  return u;
}

}  // namespace detail

/// CPTP map rho -> sum_i V_i rho V_i^dagger with sum_i V_i^dagger V_i = I.
class KrausChannel {
 public:
  KrausChannel(std::vector<ComplexMatrix> operators, SystemDims input_dims, SystemDims output_dims)
      : ops_(std::move(operators)), in_(std::move(input_dims)), out_(std::move(output_dims)) {
    if (ops_.empty()) throw ContractError("KrausChannel: no Kraus operators");
    for (const auto& v : ops_) detail::require_shape(v, out_.total(), in_.total(), "KrausChannel");
    const double res = detail::completeness_residual(ops_);
    if (!(res <= kCompletenessTolerance)) {
      throw ContractError("KrausChannel: completeness residual " + std::to_string(res));
    }
  }

  KrausChannel(std::vector<ComplexMatrix> operators, SystemDims dims)
      : KrausChannel(std::move(operators), dims, dims) {}

  static KrausChannel identity(const SystemDims& dims) {
    return KrausChannel({locclab::identity(dims.total())}, dims);
  }

  static KrausChannel unitary(const ComplexMatrix& u, const SystemDims& dims) {
    return KrausChannel({u}, dims);
  }

  /// Discards the input and prepares `state`.
  static KrausChannel replace(const SystemDims& input_dims, const PureState& state) {
    std::vector<ComplexMatrix> ops;
    const std::size_t din = input_dims.total();
    for (std::size_t j = 0; j < din; ++j) {
      ComplexMatrix k = ComplexMatrix::Zero(static_cast<Eigen::Index>(state.dimension()),
                                            static_cast<Eigen::Index>(din));
      k.col(static_cast<Eigen::Index>(j)) = state.amplitudes();
      ops.push_back(std::move(k));
    }
    return KrausChannel(std::move(ops), input_dims, state.dims());
  }

  const std::vector<ComplexMatrix>& operators() const { return ops_; }
  const SystemDims& input_dims() const { return in_; }
  const SystemDims& output_dims() const { return out_; }

  double completeness_residual() const { return detail::completeness_residual(ops_); }

  /// Linear action on an arbitrary operator.
  ComplexMatrix apply(const ComplexMatrix& m) const {
    detail::require_shape(m, in_.total(), in_.total(), "KrausChannel::apply");
    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(out_.total()),
                                            static_cast<Eigen::Index>(out_.total()));
    for (const auto& v : ops_) out.noalias() += v * m * v.adjoint();
    return out;
  }

 private:
  std::vector<ComplexMatrix> ops_;
  SystemDims in_;
  SystemDims out_;
};

inline DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho) {
  if (rho.dimension() != ch.input_dims().total()) {
    throw ShapeError("apply_channel: state dimension " + std::to_string(rho.dimension()) +
                     " does not match channel input " + ch.input_dims().to_string());
  }
  return DensityMatrix(hermitian_part(ch.apply(rho.matrix())), ch.output_dims());
}

/// second ∘ first.
inline KrausChannel compose(const KrausChannel& second, const KrausChannel& first) {
  if (second.input_dims().total() != first.output_dims().total()) {
    throw ShapeError("compose: output of first does not feed input of second");
  }
  std::vector<ComplexMatrix> ops;
  for (const auto& b : second.operators()) {
    for (const auto& a : first.operators()) ops.push_back(b * a);
  }
  return KrausChannel(std::move(ops), first.input_dims(), second.output_dims());
}

/// a ⊗ b acting on concatenated subsystems.
inline KrausChannel tensor_product(const KrausChannel& a, const KrausChannel& b) {
  std::vector<ComplexMatrix> ops;
  for (const auto& x : a.operators()) {
    for (const auto& y : b.operators()) ops.push_back(tensor_product(x, y));
  }
  return KrausChannel(std::move(ops), a.input_dims().concat(b.input_dims()),
                      a.output_dims().concat(b.output_dims()));
}

/// Swap of two d-dimensional systems: P ⊗ Q -> Q ⊗ P.
inline KrausChannel flip_channel(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("flip_channel: dim must be >= 1");
  const auto d = static_cast<Eigen::Index>(dim);
  ComplexMatrix swap = ComplexMatrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) swap(j * d + i, i * d + j) = 1.0;
  }
  return KrausChannel::unitary(swap, {dim, dim});
}

// ---------------------------------------------------------------------------
// Stinespring dilation

/// Unitary U on system ⊗ ancilla and ancilla state omega such that
/// Tr_anc[U (rho ⊗ omega) U^dagger] reproduces the channel.
struct StinespringDilation {
  ComplexMatrix unitary;
  DensityMatrix ancilla_state;
  SystemDims system_dims;
  SystemDims ancilla_dims;

  ComplexMatrix apply(const ComplexMatrix& m) const {
    detail::require_shape(m, system_dims.total(), system_dims.total(), "StinespringDilation::apply");
    const ComplexMatrix joint = tensor_product(m, ancilla_state.matrix());
    std::vector<std::size_t> keep(system_dims.size());
    std::iota(keep.begin(), keep.end(), 0);
    return partial_trace(unitary * joint * unitary.adjoint(), system_dims.concat(ancilla_dims), keep);
  }
};

/// Ancilla of dimension k = number of Kraus operators, prepared in |0>; the
/// isometry |psi> -> sum_i V_i|psi> ⊗ |i> fills the columns U(· ⊗ |0>).
/// Only channels with identical input and output spaces can be dilated this way.
inline StinespringDilation stinespring_dilate(const KrausChannel& ch) {
  if (ch.input_dims().total() != ch.output_dims().total()) {
    throw ShapeError("stinespring_dilate: input and output dimensions differ");
  }
  const auto d = static_cast<Eigen::Index>(ch.input_dims().total());
  const auto k = static_cast<Eigen::Index>(ch.operators().size());
  check_dimension(static_cast<std::size_t>(d * k), "stinespring_dilate");

  ComplexMatrix w(d * k, d);
  for (Eigen::Index i = 0; i < k; ++i) {
    const ComplexMatrix& v = ch.operators()[static_cast<std::size_t>(i)];
    for (Eigen::Index s = 0; s < d; ++s) w.row(s * k + i) = v.row(s);
  }
  // Orthonormal extension of the columns at positions (a, 0).
  const ComplexMatrix completed = detail::complete_to_unitary(w);
  ComplexMatrix u(d * k, d * k);
  Eigen::Index spare = d;
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index c = 0; c < k; ++c) {
      u.col(a * k + c) = (c == 0) ? completed.col(a) : completed.col(spare++);
    }
  }
  const SystemDims anc{static_cast<std::size_t>(k)};
  return {u, projector(basis_state(anc, 0)), ch.input_dims(), anc};
}

/// Max entry deviation between channel and dilation over all matrix units |i><j|.
inline double dilation_residual(const KrausChannel& ch, const StinespringDilation& dil) {
  const auto d = static_cast<Eigen::Index>(ch.input_dims().total());
  double worst = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      e(i, j) = 1.0;
      worst = std::max(worst, max_abs(ch.apply(e) - dil.apply(e)));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Instruments and one-way LOCC

struct InstrumentOutcome {
  std::string label;
  ComplexMatrix op;
};

/// Outcome-labelled partition of unity sum_i V_i^dagger V_i = I.
class Instrument {
 public:
  Instrument(std::vector<InstrumentOutcome> outcomes, SystemDims input_dims, SystemDims output_dims)
      : outcomes_(std::move(outcomes)), in_(std::move(input_dims)), out_(std::move(output_dims)) {
    if (outcomes_.empty()) throw ContractError("Instrument: no outcomes");
    std::vector<ComplexMatrix> ops;
    for (const auto& o : outcomes_) {
      detail::require_shape(o.op, out_.total(), in_.total(), "Instrument");
      ops.push_back(o.op);
    }
    const double res = detail::completeness_residual(ops);
    if (!(res <= kCompletenessTolerance)) {
      throw ContractError("Instrument: completeness residual " + std::to_string(res));
    }
  }

  Instrument(std::vector<InstrumentOutcome> outcomes, SystemDims dims)
      : Instrument(std::move(outcomes), dims, dims) {}

  static Instrument trivial(const SystemDims& dims) {
    return Instrument({{"0", locclab::identity(dims.total())}}, dims);
  }

  /// Projective measurement in the computational basis, post-measurement state kept.
  static Instrument computational_basis(const SystemDims& dims) {
    std::vector<InstrumentOutcome> out;
    const auto d = static_cast<Eigen::Index>(dims.total());
    for (Eigen::Index k = 0; k < d; ++k) {
      ComplexMatrix p = ComplexMatrix::Zero(d, d);
      p(k, k) = 1.0;
      out.push_back({std::to_string(k), p});
    }
    return Instrument(std::move(out), dims);
  }

  const std::vector<InstrumentOutcome>& outcomes() const { return outcomes_; }
  std::size_t size() const { return outcomes_.size(); }
  const SystemDims& input_dims() const { return in_; }
  const SystemDims& output_dims() const { return out_; }

  double completeness_residual() const {
    std::vector<ComplexMatrix> ops;
    for (const auto& o : outcomes_) ops.push_back(o.op);
    return detail::completeness_residual(ops);
  }

 private:
  std::vector<InstrumentOutcome> outcomes_;
  SystemDims in_;
  SystemDims out_;
};

/// `first` followed by `second`; outcome (i, j) has operator V2_j V1_i and label "i.j".
inline Instrument compose(const Instrument& second, const Instrument& first) {
  if (second.input_dims().total() != first.output_dims().total()) {
    throw ShapeError("compose: instrument dimensions do not chain");
  }
  std::vector<InstrumentOutcome> out;
  for (const auto& a : first.outcomes()) {
    for (const auto& b : second.outcomes()) out.push_back({a.label + "." + b.label, b.op * a.op});
  }
  return Instrument(std::move(out), first.input_dims(), second.output_dims());
}

/// Alice measures with an instrument, announces the outcome, Bob applies the
/// matching channel: rho -> sum_i (Î_A ⊗ Λ_B^i)((V_i ⊗ I) rho (V_i ⊗ I)^dagger).
/// An optional per-branch unitary on Alice's post-measurement system is
/// supported; it defaults to identity.
class OneWayLccChannel {
 public:
  OneWayLccChannel(Instrument alice, std::vector<KrausChannel> bob,
                   std::vector<std::optional<ComplexMatrix>> alice_post = {})
      : alice_(std::move(alice)), bob_(std::move(bob)), alice_post_(std::move(alice_post)) {
    if (bob_.size() != alice_.size()) {
      throw ContractError("OneWayLccChannel: " + std::to_string(bob_.size()) + " Bob branches for " +
                          std::to_string(alice_.size()) + " outcomes");
    }
    for (const auto& b : bob_) {
      if (b.input_dims().total() != bob_.front().input_dims().total() ||
          b.output_dims().total() != bob_.front().output_dims().total()) {
        throw ShapeError("OneWayLccChannel: Bob branches act on different spaces");
      }
    }
    if (alice_post_.empty()) alice_post_.resize(alice_.size());
    if (alice_post_.size() != alice_.size()) {
      throw ContractError("OneWayLccChannel: per-branch Alice unitaries do not match outcomes");
    }
    for (const auto& u : alice_post_) {
      if (!u) continue;
      detail::require_shape(*u, alice_.output_dims().total(), alice_.output_dims().total(),
                            "OneWayLccChannel");
      if (unitarity_deviation(*u) > kCompletenessTolerance) {
        throw ContractError("OneWayLccChannel: Alice post-processing is not unitary");
      }
    }
  }

  const Instrument& alice() const { return alice_; }
  const std::vector<KrausChannel>& bob() const { return bob_; }
  std::size_t branch_count() const { return bob_.size(); }

  const SystemDims& alice_input_dims() const { return alice_.input_dims(); }
  const SystemDims& alice_output_dims() const { return alice_.output_dims(); }
  const SystemDims& bob_input_dims() const { return bob_.front().input_dims(); }
  const SystemDims& bob_output_dims() const { return bob_.front().output_dims(); }
  SystemDims input_dims() const { return alice_input_dims().concat(bob_input_dims()); }
  SystemDims output_dims() const { return alice_output_dims().concat(bob_output_dims()); }

  /// Alice's effective operator on branch i, including post-processing.
  ComplexMatrix alice_operator(std::size_t i) const {
    const ComplexMatrix& v = alice_.outcomes().at(i).op;
    return alice_post_[i] ? ComplexMatrix(*alice_post_[i] * v) : v;
  }

  /// Unnormalized output of branch i.
  ComplexMatrix branch_action(std::size_t i, const ComplexMatrix& rho) const {
    const ComplexMatrix a = alice_operator(i);
    const auto dim = static_cast<Eigen::Index>(output_dims().total());
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    for (const auto& k : bob_[i].operators()) {
      const ComplexMatrix op = tensor_product(a, k);
      out.noalias() += op * rho * op.adjoint();
    }
    return out;
  }

 private:
  Instrument alice_;
  std::vector<KrausChannel> bob_;
  std::vector<std::optional<ComplexMatrix>> alice_post_;
};

namespace detail {

inline void require_input(const OneWayLccChannel& ch, const DensityMatrix& rho, std::string_view what) {
  if (rho.dimension() != ch.input_dims().total()) {
    throw ShapeError(std::string(what) + ": state dimension " + std::to_string(rho.dimension()) +
                     " does not match channel input " + ch.input_dims().to_string());
  }
}

}  // namespace detail

inline DensityMatrix apply_one_way_lcc(const OneWayLccChannel& ch, const DensityMatrix& rho) {
  detail::require_input(ch, rho, "apply_one_way_lcc");
  const auto dim = static_cast<Eigen::Index>(ch.output_dims().total());
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < ch.branch_count(); ++i) out += ch.branch_action(i, rho.matrix());
  return DensityMatrix(hermitian_part(out), ch.output_dims());
}

struct BranchOutcome {
  std::string label;
  double probability;
  DensityMatrix state;
};

/// Ensemble {p_i, rho_i} produced by a one-way LOCC channel. Branches with
/// p_i < kNegligibleProbability are omitted.
inline std::vector<BranchOutcome> branch_outcomes(const OneWayLccChannel& ch, const DensityMatrix& rho) {
  detail::require_input(ch, rho, "branch_outcomes");
  std::vector<BranchOutcome> out;
  for (std::size_t i = 0; i < ch.branch_count(); ++i) {
    const ComplexMatrix sigma = hermitian_part(ch.branch_action(i, rho.matrix()));
    const double p = sigma.trace().real();
    if (p < kNegligibleProbability) continue;
    out.push_back({ch.alice().outcomes()[i].label, p, DensityMatrix(sigma / p, ch.output_dims())});
  }
  return out;
}

/// Tr_A of the output for a product input rho_A ⊗ rho_B:
/// sum_i Tr[V_i rho_A V_i^dagger] Λ_B^i(rho_B).
inline DensityMatrix bob_marginal(const OneWayLccChannel& ch, const ComplexMatrix& rho_a,
                                  const DensityMatrix& rho_b) {
  detail::require_shape(rho_a, ch.alice_input_dims().total(), ch.alice_input_dims().total(),
                        "bob_marginal");
  if (rho_b.dimension() != ch.bob_input_dims().total()) throw ShapeError("bob_marginal: Bob state dimension");
  const auto dim = static_cast<Eigen::Index>(ch.bob_output_dims().total());
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < ch.branch_count(); ++i) {
    const ComplexMatrix& v = ch.alice().outcomes()[i].op;
    const double p = (v * rho_a * v.adjoint()).trace().real();
    if (p == 0.0) continue;
    out += p * ch.bob()[i].apply(rho_b.matrix());
  }
  return DensityMatrix(hermitian_part(out), ch.bob_output_dims());
}

/// rho -> sum_i (A_i ⊗ B_i) rho (A_i ⊗ B_i)^dagger.
class SeparableSuperoperator {
 public:
  struct Pair {
    ComplexMatrix a;
    ComplexMatrix b;
  };

  SeparableSuperoperator(std::vector<Pair> pairs, SystemDims a_in, SystemDims a_out, SystemDims b_in,
                         SystemDims b_out)
      : pairs_(std::move(pairs)),
        a_in_(std::move(a_in)),
        a_out_(std::move(a_out)),
        b_in_(std::move(b_in)),
        b_out_(std::move(b_out)) {
    if (pairs_.empty()) throw ContractError("SeparableSuperoperator: no operator pairs");
    const auto din = static_cast<Eigen::Index>(a_in_.total() * b_in_.total());
    ComplexMatrix sum = ComplexMatrix::Zero(din, din);
    for (const auto& p : pairs_) {
      detail::require_shape(p.a, a_out_.total(), a_in_.total(), "SeparableSuperoperator");
      detail::require_shape(p.b, b_out_.total(), b_in_.total(), "SeparableSuperoperator");
      sum += tensor_product(ComplexMatrix(p.a.adjoint() * p.a), ComplexMatrix(p.b.adjoint() * p.b));
    }
    const double res = max_abs(sum - ComplexMatrix::Identity(din, din));
    if (!(res <= kCompletenessTolerance)) {
      throw ContractError("SeparableSuperoperator: completeness residual " + std::to_string(res));
    }
  }

  SeparableSuperoperator(std::vector<Pair> pairs, SystemDims a, SystemDims b)
      : SeparableSuperoperator(std::move(pairs), a, a, b, b) {}

  const std::vector<Pair>& pairs() const { return pairs_; }
  const SystemDims& a_input_dims() const { return a_in_; }
  const SystemDims& a_output_dims() const { return a_out_; }
  const SystemDims& b_input_dims() const { return b_in_; }
  const SystemDims& b_output_dims() const { return b_out_; }
  SystemDims input_dims() const { return a_in_.concat(b_in_); }
  SystemDims output_dims() const { return a_out_.concat(b_out_); }

 private:
  std::vector<Pair> pairs_;
  SystemDims a_in_, a_out_, b_in_, b_out_;
};

inline DensityMatrix apply_separable(const SeparableSuperoperator& s, const DensityMatrix& rho) {
  if (rho.dimension() != s.input_dims().total()) {
    throw ShapeError("apply_separable: state dimension " + std::to_string(rho.dimension()) +
                     " does not match " + s.input_dims().to_string());
  }
  const auto dim = static_cast<Eigen::Index>(s.output_dims().total());
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (const auto& p : s.pairs()) {
    const ComplexMatrix op = tensor_product(p.a, p.b);
    out.noalias() += op * rho.matrix() * op.adjoint();
  }
  return DensityMatrix(hermitian_part(out), s.output_dims());
}

/// Distributes Bob's Kraus operators over Alice's outcomes.
inline SeparableSuperoperator to_separable(const OneWayLccChannel& ch) {
  std::vector<SeparableSuperoperator::Pair> pairs;
  for (std::size_t i = 0; i < ch.branch_count(); ++i) {
    const ComplexMatrix a = ch.alice_operator(i);
    for (const auto& k : ch.bob()[i].operators()) pairs.push_back({a, k});
  }
  return SeparableSuperoperator(std::move(pairs), ch.alice_input_dims(), ch.alice_output_dims(),
                                ch.bob_input_dims(), ch.bob_output_dims());
}

/// The same map as a single Kraus channel on A ⊗ B.
inline KrausChannel to_kraus(const OneWayLccChannel& ch) {
  std::vector<ComplexMatrix> ops;
  for (std::size_t i = 0; i < ch.branch_count(); ++i) {
    const ComplexMatrix a = ch.alice_operator(i);
    for (const auto& k : ch.bob()[i].operators()) ops.push_back(tensor_product(a, k));
  }
  return KrausChannel(std::move(ops), ch.input_dims(), ch.output_dims());
}

// ---------------------------------------------------------------------------
// Random sampling

/// Row blocks of the first `cols` columns of a Haar unitary: `blocks` operators
/// of shape rows x cols whose V^dagger V sum to the identity.
inline std::vector<ComplexMatrix> random_isometry_blocks(std::size_t rows, std::size_t cols,
                                                         std::size_t blocks, Seed seed) {
  if (blocks == 0) throw std::invalid_argument("random_isometry_blocks: need at least one block");
  if (rows * blocks < cols) {
    throw std::invalid_argument("random_isometry_blocks: too few output dimensions for an isometry");
  }
  const ComplexMatrix u = haar_random_unitary(rows * blocks, seed);
  std::vector<ComplexMatrix> out;
  const auto r = static_cast<Eigen::Index>(rows);
  for (std::size_t b = 0; b < blocks; ++b) {
    out.push_back(u.block(static_cast<Eigen::Index>(b) * r, 0, r, static_cast<Eigen::Index>(cols)));
  }
  return out;
}

inline Instrument random_instrument(std::size_t dim, std::size_t branches, Seed seed) {
  if (branches == 0) throw std::invalid_argument("random_instrument: branches must be >= 1");
  auto blocks = random_isometry_blocks(dim, dim, branches, seed);
  std::vector<InstrumentOutcome> out;
  for (std::size_t i = 0; i < blocks.size(); ++i) out.push_back({std::to_string(i), std::move(blocks[i])});
  return Instrument(std::move(out), {dim});
}

inline KrausChannel random_channel(std::size_t d_in, std::size_t d_out, std::size_t kraus, Seed seed) {
  return KrausChannel(random_isometry_blocks(d_out, d_in, kraus, seed), {d_in}, {d_out});
}

inline KrausChannel random_channel(std::size_t dim, std::size_t kraus, Seed seed) {
  return random_channel(dim, dim, kraus, seed);
}

/// Random Alice instrument with `branches` outcomes and an independent random
/// Bob channel with `kraus` operators per outcome.
inline OneWayLccChannel random_one_way_lcc(std::size_t d_a, std::size_t d_b, std::size_t branches,
                                           std::size_t kraus, Seed seed) {
  Instrument alice = random_instrument(d_a, branches, seed.sub(0));
  std::vector<KrausChannel> bob;
  for (std::size_t i = 0; i < branches; ++i) bob.push_back(random_channel(d_b, kraus, seed.sub(1 + i)));
  return OneWayLccChannel(std::move(alice), std::move(bob));
}

/// Random separable superoperator realised as a two-round LOCC protocol:
/// Alice measures {A_i}, Bob measures {B_ij} given i, Alice applies a channel
/// {C_ijk} given (i, j). Pairs are (C_ijk A_i, B_ij). This reaches maps
/// outside the one-way class.
inline SeparableSuperoperator random_separable(std::size_t d_a, std::size_t d_b, std::size_t branches,
                                               std::size_t kraus, Seed seed) {
  const Instrument first = random_instrument(d_a, branches, seed.sub(0));
  std::vector<SeparableSuperoperator::Pair> pairs;
  for (std::size_t i = 0; i < branches; ++i) {
    const Instrument bob = random_instrument(d_b, branches, seed.sub(1000 + i));
    for (std::size_t j = 0; j < branches; ++j) {
      const KrausChannel alice = random_channel(d_a, kraus, seed.sub(2000 + i * branches + j));
      for (const auto& c : alice.operators()) {
        pairs.push_back({c * first.outcomes()[i].op, bob.outcomes()[j].op});
      }
    }
  }
  return SeparableSuperoperator(std::move(pairs), {d_a}, {d_b});
}

}  // namespace locclab
