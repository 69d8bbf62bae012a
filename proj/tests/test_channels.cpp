#include "locclab/channels.hpp"
#include "locclab/entanglement.hpp"

#include <gtest/gtest.h>

using namespace locclab;

namespace {

KrausChannel depolarizing() {
  const double w = std::sqrt(0.25);
  return KrausChannel({w * identity(2), w * pauli::x(), w * pauli::y(), w * pauli::z()}, {2});
}

KrausChannel amplitude_damping(double g) {
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2), k1 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - g);
  k1(0, 1) = std::sqrt(g);
  return KrausChannel({k0, k1}, {2});
}

KrausChannel dephasing() { return KrausChannel({std::sqrt(0.5) * identity(2), std::sqrt(0.5) * pauli::z()}, {2}); }

}  // namespace

TEST(KrausChannelTest, RejectsIncompleteSet) {
  EXPECT_THROW(KrausChannel({0.5 * identity(2)}, {2}), ContractError);
  EXPECT_THROW(KrausChannel({identity(3)}, {2}), ShapeError);
  EXPECT_THROW(KrausChannel(std::vector<ComplexMatrix>{}, {2}), ContractError);
}

TEST(ApplyChannel, IdentityLeavesStateUnchanged) {
  const DensityMatrix rho = random_mixed_state({2}, 2, Seed{1});
  EXPECT_LE(max_abs(apply_channel(KrausChannel::identity({2}), rho).matrix() - rho.matrix()), 1e-15);
}

TEST(ApplyChannel, FullDepolarizationGivesMaximallyMixed) {
  // Weights 1/4 on the Paulis: I/2 for every input.
  for (std::uint64_t s = 0; s < 10; ++s) {
    const DensityMatrix out = apply_channel(depolarizing(), random_mixed_state({2}, 1 + s % 2, Seed{s}));
    EXPECT_LE(max_abs(out.matrix() - 0.5 * identity(2)), 1e-15);
  }
}

TEST(ApplyChannel, AmplitudeDampingPreservesTrace) {
  const KrausChannel ch = amplitude_damping(0.3);
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const DensityMatrix rho = random_mixed_state({2}, 1 + s % 3, Seed{s});
    const ComplexMatrix out = ch.apply(rho.matrix());
    EXPECT_NEAR(out.trace().real(), 1.0, 1e-12);
    EXPECT_LE(hermiticity_deviation(out), 1e-15);
  }
}

TEST(ApplyChannel, DimensionMismatch) {
  EXPECT_THROW(apply_channel(depolarizing(), maximally_mixed({3})), ShapeError);
}

TEST(Stinespring, IdentityChannel) {
  const KrausChannel id = KrausChannel::identity({2});
  const StinespringDilation dil = stinespring_dilate(id);
  EXPECT_EQ(dil.ancilla_dims.total(), 1u);
  EXPECT_LE(dilation_residual(id, dil), 1e-12);
}

TEST(Stinespring, DephasingRoundTrip) {
  const KrausChannel ch = dephasing();
  const StinespringDilation dil = stinespring_dilate(ch);
  EXPECT_GE(dil.ancilla_dims.total(), 2u);
  EXPECT_LE(unitarity_deviation(dil.unitary), 1e-9);
  EXPECT_LE(dilation_residual(ch, dil), 1e-8);
}

TEST(Stinespring, RandomThreeOperatorChannel) {
  const KrausChannel ch = random_channel(2, 3, Seed{5});
  const StinespringDilation dil = stinespring_dilate(ch);
  EXPECT_EQ(dil.ancilla_dims.total(), 3u);
  EXPECT_LE(dilation_residual(ch, dil), 1e-8);
  EXPECT_NEAR(dil.ancilla_state.purity(), 1.0, 1e-12);
}

TEST(Stinespring, MultipartiteSystem) {
  const KrausChannel ch = random_channel(4, 2, Seed{6});
  const KrausChannel split(ch.operators(), {2, 2});
  EXPECT_LE(dilation_residual(split, stinespring_dilate(split)), 1e-8);
}

TEST(Stinespring, RectangularChannelIsRejected) {
  EXPECT_THROW(stinespring_dilate(random_channel(2, 3, 2, Seed{1})), ShapeError);
}

TEST(InstrumentTest, RandomCompletenessAndDeterminism) {
  for (std::size_t b = 1; b <= 5; ++b) {
    const Instrument ins = random_instrument(3, b, Seed{b});
    EXPECT_EQ(ins.size(), b);
    EXPECT_LE(ins.completeness_residual(), 1e-10);
    EXPECT_EQ(max_abs(ins.outcomes()[0].op - random_instrument(3, b, Seed{b}).outcomes()[0].op), 0.0);
  }
}

TEST(InstrumentTest, SingleBranchIsUnitary) {
  EXPECT_LE(unitarity_deviation(random_instrument(4, 1, Seed{2}).outcomes()[0].op), 1e-10);
}

TEST(InstrumentTest, IsometrySlicingOracle) {
  // Blocks of a Haar isometry stacked vertically satisfy sum V^dagger V = I.
  const auto blocks = random_isometry_blocks(2, 2, 3, Seed{7});
  ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
  for (const auto& v : blocks) sum += v.adjoint() * v;
  EXPECT_LE(max_abs(sum - identity(2)), 1e-12);
}

TEST(InstrumentTest, ComposeLabelsAndCompleteness) {
  const Instrument a = random_instrument(2, 2, Seed{1});
  const Instrument b = random_instrument(2, 3, Seed{2});
  const Instrument c = compose(b, a);
  ASSERT_EQ(c.size(), 6u);
  EXPECT_EQ(c.outcomes()[0].label, "0.0");
  EXPECT_EQ(c.outcomes()[5].label, "1.2");
  EXPECT_LE(c.completeness_residual(), 1e-10);
  EXPECT_LE(max_abs(c.outcomes()[4].op - b.outcomes()[1].op * a.outcomes()[1].op), 1e-15);
}

TEST(OneWay, TrivialInstrumentLeavesStateUnchanged) {
  const OneWayLccChannel ch(Instrument::trivial({2}), {KrausChannel::identity({2})});
  const DensityMatrix rho = random_mixed_state({2, 2}, 3, Seed{3});
  EXPECT_LE(max_abs(apply_one_way_lcc(ch, rho).matrix() - rho.matrix()), 1e-15);
  const auto branches = branch_outcomes(ch, rho);
  ASSERT_EQ(branches.size(), 1u);
  EXPECT_NEAR(branches[0].probability, 1.0, 1e-12);
}

TEST(OneWay, ComputationalMeasurementDephasesAlice) {
  const OneWayLccChannel ch(Instrument::computational_basis({2}),
                            {KrausChannel::identity({2}), KrausChannel::identity({2})});
  ComplexVector plus(2);
  plus << 1.0, 1.0;
  const DensityMatrix rho_b = random_mixed_state({2}, 2, Seed{4});
  const DensityMatrix out = apply_one_way_lcc(ch, tensor_product(projector(PureState::normalized(plus, {2})), rho_b));
  EXPECT_LE(max_abs(out.reduce({0}).matrix() - 0.5 * identity(2)), 1e-15);
  EXPECT_LE(max_abs(out.reduce({1}).matrix() - rho_b.matrix()), 1e-15);
}

TEST(OneWay, MaximallyMixedAliceGivesEqualBranches) {
  const OneWayLccChannel ch(Instrument::computational_basis({2}),
                            {KrausChannel::identity({2}), KrausChannel::identity({2})});
  const auto branches = branch_outcomes(ch, tensor_product(maximally_mixed({2}), random_mixed_state({2}, 2, Seed{5})));
  ASSERT_EQ(branches.size(), 2u);
  EXPECT_NEAR(branches[0].probability, 0.5, 1e-15);
  EXPECT_NEAR(branches[1].probability, 0.5, 1e-15);
}

TEST(OneWay, ZeroProbabilityBranchesOmitted) {
  const OneWayLccChannel ch(Instrument::computational_basis({2}),
                            {KrausChannel::identity({2}), KrausChannel::identity({2})});
  const auto branches = branch_outcomes(ch, tensor_product(projector(basis_state({2}, 1)), maximally_mixed({2})));
  ASSERT_EQ(branches.size(), 1u);
  EXPECT_EQ(branches[0].label, "1");
}

TEST(OneWay, BranchMixtureReconstructsOutput) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const OneWayLccChannel ch = random_one_way_lcc(2, 3, 1 + s % 4, 1 + s % 3, Seed{s});
    const DensityMatrix rho = random_mixed_state({2, 3}, 1 + s % 5, Seed{s + 500});
    const DensityMatrix out = apply_one_way_lcc(ch, rho);
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-10);
    ComplexMatrix mix = ComplexMatrix::Zero(6, 6);
    double total = 0.0;
    for (const auto& b : branch_outcomes(ch, rho)) {
      EXPECT_GE(b.probability, 0.0);
      total += b.probability;
      mix += b.probability * b.state.matrix();
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
    EXPECT_LE(max_abs(mix - out.matrix()), 1e-10);
  }
}

TEST(OneWay, AgreesWithSeparableForm) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const OneWayLccChannel ch = random_one_way_lcc(2, 2, 1 + s % 3, 1 + s % 2, Seed{s});
    const DensityMatrix rho = random_mixed_state({2, 2}, 1 + s % 4, Seed{s + 77});
    EXPECT_LE(max_abs(apply_one_way_lcc(ch, rho).matrix() - apply_separable(to_separable(ch), rho).matrix()), 1e-10);
    EXPECT_LE(max_abs(apply_one_way_lcc(ch, rho).matrix() - to_kraus(ch).apply(rho.matrix())), 1e-10);
  }
}

TEST(OneWay, AliceUnitaryPostProcessing) {
  const ComplexMatrix u = haar_random_unitary(2, Seed{3});
  const OneWayLccChannel ch(Instrument::computational_basis({2}),
                            {KrausChannel::identity({2}), KrausChannel::identity({2})}, {std::nullopt, u});
  const DensityMatrix rho = tensor_product(projector(basis_state({2}, 1)), maximally_mixed({2}));
  const DensityMatrix out = apply_one_way_lcc(ch, rho);
  const ComplexVector rotated = u.col(1);
  EXPECT_LE(max_abs(out.reduce({0}).matrix() - rotated * rotated.adjoint()), 1e-12);
}

TEST(OneWay, ProductInputsStayPpt) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const OneWayLccChannel ch = random_one_way_lcc(2, 2, 1 + s % 4, 1 + s % 3, Seed{s});
    const DensityMatrix in = tensor_product(random_mixed_state({2}, 1 + s % 2, Seed{s + 1}),
                                            random_mixed_state({2}, 1, Seed{s + 2}));
    EXPECT_LE(negativity(apply_one_way_lcc(ch, in)), 1e-10);
  }
}

TEST(OneWay, NegativityDoesNotIncrease) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const OneWayLccChannel ch = random_one_way_lcc(2, 2, 1 + s % 4, 1 + s % 3, Seed{s});
    const DensityMatrix rho = random_mixed_state({2, 2}, 1 + s % 3, Seed{s + 9});
    EXPECT_LE(negativity(apply_one_way_lcc(ch, rho)), negativity(rho) + 1e-9);
  }
}

TEST(OneWay, BobMarginalMatchesFullSimulation) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const OneWayLccChannel ch = random_one_way_lcc(3, 2, 1 + s % 4, 1 + s % 3, Seed{s});
    const DensityMatrix a = random_mixed_state({3}, 2, Seed{s + 10});
    const DensityMatrix b = random_mixed_state({2}, 2, Seed{s + 20});
    const DensityMatrix full = apply_one_way_lcc(ch, tensor_product(a, b));
    EXPECT_LE(max_abs(bob_marginal(ch, a.matrix(), b).matrix() - full.reduce({1}).matrix()), 1e-12);
  }
}

TEST(OneWay, StructuralErrors) {
  EXPECT_THROW(OneWayLccChannel(Instrument::computational_basis({2}), {KrausChannel::identity({2})}), ContractError);
  EXPECT_THROW(OneWayLccChannel(Instrument::computational_basis({2}),
                                {KrausChannel::identity({2}), KrausChannel::identity({3})}),
               ShapeError);
  const OneWayLccChannel ok(Instrument::trivial({2}), {KrausChannel::identity({2})});
  EXPECT_THROW(apply_one_way_lcc(ok, maximally_mixed({2, 3})), ShapeError);
}

TEST(Separable, IdentityPair) {
  const SeparableSuperoperator s({{identity(2), identity(2)}}, {2}, {2});
  const DensityMatrix rho = random_mixed_state({2, 2}, 2, Seed{1});
  EXPECT_LE(max_abs(apply_separable(s, rho).matrix() - rho.matrix()), 1e-15);
}

TEST(Separable, LocalUnitariesKeepMeasures) {
  const SeparableSuperoperator s({{haar_random_unitary(2, Seed{1}), haar_random_unitary(2, Seed{2})}}, {2}, {2});
  const DensityMatrix rho = random_mixed_state({2, 2}, 2, Seed{3});
  const DensityMatrix out = apply_separable(s, rho);
  EXPECT_NEAR(concurrence(out), concurrence(rho), 1e-9);
  EXPECT_NEAR(negativity(out), negativity(rho), 1e-9);
}

TEST(Separable, ProductInputsStayPpt) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto sep = random_separable(2, 2, 1 + s % 3, 1 + s % 2, Seed{s});
    const DensityMatrix in = tensor_product(random_mixed_state({2}, 1 + s % 2, Seed{s + 1}),
                                            random_mixed_state({2}, 1 + (s / 2) % 2, Seed{s + 2}));
    const DensityMatrix out = apply_separable(sep, in);
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-10);
    EXPECT_LE(negativity(out), 1e-10);
  }
}

TEST(Separable, IncompletePairsRejected) {
  EXPECT_THROW(SeparableSuperoperator({{identity(2), 0.5 * identity(2)}}, {2}, {2}), ContractError);
}

TEST(Flip, SwapsFactors) {
  const KrausChannel f = flip_channel(2);
  const DensityMatrix in = tensor_product(projector(basis_state({2}, 0)), projector(basis_state({2}, 1)));
  const DensityMatrix expected = tensor_product(projector(basis_state({2}, 1)), projector(basis_state({2}, 0)));
  EXPECT_EQ(max_abs(apply_channel(f, in).matrix() - expected.matrix()), 0.0);
}

TEST(Flip, SymmetricStatesFixed) {
  const DensityMatrix t = projector(bell_state(BellKind::PsiPlus));
  EXPECT_EQ(max_abs(apply_channel(flip_channel(2), t).matrix() - t.matrix()), 0.0);
}

TEST(Flip, InvolutionOnRandomStates) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const std::size_t d = 2 + s % 2;
    const DensityMatrix rho = random_mixed_state({d, d}, 2, Seed{s});
    const KrausChannel f = flip_channel(d);
    EXPECT_LE(max_abs(f.apply(f.apply(rho.matrix())) - rho.matrix()), 1e-12);
  }
}

TEST(Flip, ProductOfRandomStates) {
  const DensityMatrix p = random_mixed_state({3}, 2, Seed{1}), q = random_mixed_state({3}, 3, Seed{2});
  EXPECT_LE(max_abs(flip_channel(3).apply(tensor_product(p, q).matrix()) - tensor_product(q, p).matrix()), 1e-15);
}
