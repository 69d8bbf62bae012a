#include "locclab/entanglement.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace locclab;

namespace {

DensityMatrix product_state(std::uint64_t s) {
  return tensor_product(random_mixed_state({2}, 1 + s % 2, Seed{s}), random_mixed_state({2}, 1 + (s / 2) % 2, Seed{s + 7}));
}

}  // namespace

TEST(Concurrence, SingletIsOne) { EXPECT_NEAR(concurrence(projector(singlet())), 1.0, 1e-12); }

TEST(Concurrence, ProductStatesAreZero) {
  for (std::uint64_t s = 0; s < 100; ++s) EXPECT_LE(concurrence(product_state(s)), 1e-10);
  EXPECT_EQ(concurrence(projector(basis_state({2, 2}, 0))), 0.0);
}

TEST(Concurrence, WernerClosedForm) {
  for (double p = 0.0; p <= 1.0; p += 0.05) {
    EXPECT_NEAR(concurrence(werner_state(p)), oracle::werner_concurrence(p), 1e-10) << p;
  }
}

TEST(Concurrence, MatchesSpinFlipEigenvalues) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const DensityMatrix rho = random_mixed_state({2, 2}, 2 + s % 3, Seed{s});
    EXPECT_NEAR(concurrence(rho), oracle::concurrence_spin_flip(rho.matrix()), 1e-7);
  }
}

TEST(Concurrence, PureStateFormula) {
  // C(cos t|00> + sin t|11>) = |sin 2t|
  for (double t : {0.1, 0.3, 0.7, 1.2}) {
    ComplexVector v = ComplexVector::Zero(4);
    v(0) = std::cos(t);
    v(3) = std::sin(t);
    EXPECT_NEAR(concurrence(projector(PureState(v, {2, 2}))), std::abs(std::sin(2 * t)), 1e-12);
  }
}

TEST(Concurrence, WrongDims) {
  EXPECT_THROW(concurrence(maximally_mixed({4})), ShapeError);
  EXPECT_THROW(concurrence(maximally_mixed({2, 3})), ShapeError);
  EXPECT_THROW(entanglement_of_formation(maximally_mixed({3, 3})), ShapeError);
}

TEST(EntanglementOfFormation, Examples) {
  EXPECT_NEAR(entanglement_of_formation(projector(singlet())), 1.0, 1e-12);
  EXPECT_EQ(entanglement_of_formation(projector(basis_state({2, 2}, 1))), 0.0);
  // Pure state with C = 1/2: sin 2t = 1/2.
  const double t = std::asin(0.5) / 2.0;
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = std::cos(t);
  v(3) = std::sin(t);
  const double x = 0.5 * (1.0 + std::sqrt(3.0) / 2.0);
  const double h = -x * std::log2(x) - (1 - x) * std::log2(1 - x);
  EXPECT_NEAR(entanglement_of_formation(projector(PureState(v, {2, 2}))), h, 1e-12);
  EXPECT_NEAR(h, 0.3546, 1e-4);
}

TEST(EntanglementOfFormation, OrderedLikeConcurrence) {
  std::vector<std::pair<double, double>> pairs;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const DensityMatrix rho = random_mixed_state({2, 2}, 1 + s % 3, Seed{s});
    pairs.emplace_back(concurrence(rho), entanglement_of_formation(rho));
  }
  for (const auto& a : pairs) {
    for (const auto& b : pairs) {
      if (a.first < b.first - 1e-12) EXPECT_LE(a.second, b.second + 1e-12);
    }
  }
}

TEST(Negativity, Examples) {
  EXPECT_LE(negativity(product_state(3)), 1e-12);
  EXPECT_NEAR(negativity(projector(singlet())), 0.5, 1e-12);
  for (double p = 0.0; p <= 1.0; p += 0.05) {
    EXPECT_NEAR(negativity(werner_state(p)), oracle::werner_negativity(p), 1e-12) << p;
  }
}

TEST(Negativity, CutErrors) {
  EXPECT_THROW(negativity(projector(singlet()), {}), ShapeError);
  EXPECT_THROW(negativity(projector(singlet()), {0, 1}), ShapeError);
  EXPECT_THROW(negativity(projector(singlet()), {3}), ShapeError);
}

TEST(Negativity, EitherSideOfTheCut) {
  const DensityMatrix rho = random_mixed_state({2, 3}, 2, Seed{4});
  EXPECT_NEAR(negativity(rho, {0}), negativity(rho, {1}), 1e-12);
}

TEST(SingletFidelity, Examples) {
  for (std::size_t d = 2; d <= 4; ++d) {
    EXPECT_NEAR(singlet_fidelity(projector(maximally_entangled_state(d)), d), 1.0, 1e-12);
    EXPECT_NEAR(singlet_fidelity(maximally_mixed({d, d}), d), 1.0 / static_cast<double>(d * d), 1e-12);
  }
  for (double p : {0.0, 0.25, 0.6, 1.0}) {
    EXPECT_NEAR(singlet_fidelity(werner_state(p), 2, SingletTarget::Singlet), (1 + 3 * p) / 4, 1e-12);
  }
  EXPECT_THROW(singlet_fidelity(maximally_mixed({2, 3}), 2), ShapeError);
}

TEST(FullyEntangledFraction, MatchesBestMaximallyEntangledTarget) {
  EXPECT_NEAR(fully_entangled_fraction(projector(singlet())), 1.0, 1e-12);
  EXPECT_NEAR(fully_entangled_fraction(projector(bell_state(BellKind::PhiMinus))), 1.0, 1e-12);
  for (double p : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(fully_entangled_fraction(werner_state(p)), std::max(0.25 * (1 + 3 * p), 0.25 * (1 - p)), 1e-12);
  }
}

TEST(FullyEntangledFraction, SeparableCeilingIsHalf) {
  // Independent estimate of max <Phi|rho_prod|Phi> over product pure states.
  const double sampled = oracle::sampled_product_singlet_overlap(200000, 5);
  EXPECT_LE(sampled, 0.5 + 1e-12);
  EXPECT_GE(sampled, 0.499);
  for (std::uint64_t s = 0; s < 200; ++s) EXPECT_LE(fully_entangled_fraction(product_state(s)), 0.5 + 1e-9);
}

TEST(Measures, VanishOnProductStates) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const DensityMatrix rho = product_state(s);
    EXPECT_LE(concurrence(rho), 1e-10);
    EXPECT_LE(entanglement_of_formation(rho), 1e-10);
    EXPECT_LE(negativity(rho), 1e-10);
  }
}

TEST(Measures, ParseAndName) {
  EXPECT_EQ(parse_measure("eof"), EntanglementMeasure::EntanglementOfFormation);
  EXPECT_EQ(parse_measure("concurrence"), EntanglementMeasure::Concurrence);
  EXPECT_EQ(parse_measure("negativity"), EntanglementMeasure::Negativity);
  EXPECT_EQ(parse_measure("singlet_fidelity"), EntanglementMeasure::SingletFidelity);
  EXPECT_FALSE(parse_measure("entropy").has_value());
  EXPECT_EQ(to_string(EntanglementMeasure::EntanglementOfFormation), "eof");
}

TEST(Audit, LocalUnitaryChannelsLeaveMeasuresUnchanged) {
  const ExperimentReport r = monotonicity_audit(EntanglementMeasure::EntanglementOfFormation, 200, Seed{1},
                                                ChannelFamily::LocalUnitary);
  EXPECT_TRUE(r.pass());
  EXPECT_LE(r.metric("max_abs_change"), 1e-9);
}

TEST(Audit, MeasureAndDiscardKillsEntanglement) {
  const ExperimentReport r = monotonicity_audit(EntanglementMeasure::Concurrence, 100, Seed{2},
                                                ChannelFamily::MeasureAndDiscard);
  EXPECT_TRUE(r.pass());
  EXPECT_LE(r.metric("max_violation"), 0.0);
}

TEST(Audit, RandomOneWayChannelsAllMeasures) {
  for (auto m : {EntanglementMeasure::EntanglementOfFormation, EntanglementMeasure::Concurrence,
                 EntanglementMeasure::Negativity}) {
    const ExperimentReport r = monotonicity_audit(m, 300, Seed{3});
    EXPECT_TRUE(r.pass()) << to_string(m);
    EXPECT_EQ(r.metric("violations"), 0.0);
  }
}

TEST(Audit, MonotonicityReportIsReproducible) {
  const auto a = monotonicity_audit(EntanglementMeasure::EntanglementOfFormation, 50, Seed{9}).to_json();
  const auto b = monotonicity_audit(EntanglementMeasure::EntanglementOfFormation, 50, Seed{9}).to_json();
  EXPECT_EQ(a["metrics"].dump(), b["metrics"].dump());
  EXPECT_EQ(a["seed"], 9u);
}

TEST(Audit, NoCreation) {
  const ExperimentReport r = no_creation_audit(300, Seed{4});
  EXPECT_TRUE(r.pass());
  EXPECT_LE(r.metric("one_way_max_negativity"), 1e-10);
  EXPECT_LE(r.metric("separable_max_singlet_fidelity"), 0.5 + 1e-9);
}

TEST(Audit, IdentityOnProductHasZeroNegativity) {
  const OneWayLccChannel id(Instrument::trivial({2}), {KrausChannel::identity({2})});
  EXPECT_LE(negativity(apply_one_way_lcc(id, product_state(1))), 1e-12);
}

TEST(Audit, InvarianceOfAllMeasures) {
  const ExperimentReport r = local_unitary_invariance_audit(200, Seed{5});
  EXPECT_TRUE(r.pass());
  for (const auto& [k, v] : r.metrics()) EXPECT_LE(v, 1e-9) << k;
}

TEST(Audit, ZeroTrialsRejected) {
  EXPECT_THROW(monotonicity_audit(EntanglementMeasure::Concurrence, 0, Seed{1}), std::invalid_argument);
  EXPECT_THROW(no_creation_audit(0, Seed{1}), std::invalid_argument);
}
