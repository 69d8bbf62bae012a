#include "locclab/experiments.hpp"
#include "locclab/io.hpp"

#include <gtest/gtest.h>

using namespace locclab;

TEST(MatrixJson, RowMajorRoundTrip) {
  ComplexMatrix m(2, 3);
  m << Complex(1, 2), 3, 4, 5, Complex(0, -6), 7;
  const auto j = io::to_json(m);
  EXPECT_EQ(j["rows"], 2);
  EXPECT_EQ(j["cols"], 3);
  EXPECT_EQ(j["entries"][1][0], 3.0);
  EXPECT_EQ(j["entries"][4][1], -6.0);
  EXPECT_EQ(max_abs(io::matrix_from_json(j) - m), 0.0);
}

TEST(MatrixJson, RejectsMalformed) {
  EXPECT_THROW(io::matrix_from_json({{"rows", 2}, {"cols", 2}, {"entries", {{1, 0}}}}), io::FormatError);
  EXPECT_THROW(io::matrix_from_json({{"rows", 1}, {"cols", 1}, {"entries", {{1}}}}), io::FormatError);
  EXPECT_THROW(io::matrix_from_json({{"rows", 1}}), io::FormatError);
}

TEST(StateJson, RoundTripKeepsDims) {
  const DensityMatrix rho = random_mixed_state({2, 3}, 2, Seed{1});
  const DensityMatrix back = io::density_from_json(io::to_json(rho));
  EXPECT_EQ(back.dims(), rho.dims());
  EXPECT_EQ(max_abs(back.matrix() - rho.matrix()), 0.0);
}

TEST(ChannelJson, AllKindsRoundTrip) {
  const DensityMatrix rho = random_mixed_state({2, 2}, 2, Seed{2});
  const KrausChannel k = random_channel(4, 3, Seed{3});
  EXPECT_LE(max_abs(io::kraus_from_json(io::to_json(k)).apply(rho.matrix()) - k.apply(rho.matrix())), 1e-15);

  const OneWayLccChannel o = random_one_way_lcc(2, 2, 3, 2, Seed{4});
  const auto oj = io::to_json(o);
  EXPECT_EQ(oj["kind"], "one_way_lcc");
  EXPECT_LE(max_abs(apply_one_way_lcc(io::one_way_from_json(oj), rho).matrix() - apply_one_way_lcc(o, rho).matrix()),
            1e-15);

  const SeparableSuperoperator s = random_separable(2, 2, 2, 2, Seed{5});
  EXPECT_LE(max_abs(apply_separable(io::separable_from_json(io::to_json(s)), rho).matrix() -
                    apply_separable(s, rho).matrix()),
            1e-15);
}

TEST(ChannelJson, InvalidChannelRejected) {
  auto j = io::to_json(KrausChannel::identity({2}));
  j["operators"][0]["entries"][0][0] = 0.5;
  EXPECT_THROW(io::kraus_from_json(j), ContractError);
}

TEST(EntanglerJson, CarriesRealizableFlag) {
  const auto j = io::to_json(EntanglerOracle::werner(0.2));
  EXPECT_EQ(j["realizable"], true);
  const EntanglerOracle back = io::entangler_from_json(j);
  EXPECT_TRUE(back.realizable());
  EXPECT_FALSE(io::entangler_from_json(io::to_json(EntanglerOracle::exact(2))).realizable());
}

TEST(Report, PassIsDerivedFromMetricsAndTolerances) {
  ExperimentReport r("test", Seed{1});
  r.set_metric("err", 0.5);
  r.require_at_most("err", "tol", 1.0);
  EXPECT_TRUE(r.pass());
  r.set_metric("err", 2.0);
  EXPECT_FALSE(r.pass());
  EXPECT_EQ(r.failed_checks(), std::vector<std::string>{"err"});
  r.set_metric("err", std::nan(""));
  EXPECT_FALSE(r.pass());
}

TEST(Report, AtLeastAndMissingMetric) {
  ExperimentReport r("test", Seed{1});
  r.require_at_least("fid", "floor", 0.9);
  EXPECT_FALSE(r.pass());
  r.set_metric("fid", 0.95);
  EXPECT_TRUE(r.pass());
}

TEST(Report, JsonSchema) {
  const auto j = verify_swap(0.3).to_json();
  for (const char* key : {"command", "seed", "parameters", "metrics", "tolerances", "checks", "pass", "duration_ms",
                          "artifact_version"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["artifact_version"], kArtifactVersion);
  EXPECT_EQ(j["tolerances"]["swap"], kSwapTolerance);
}

TEST(Report, ReproducibleMetrics) {
  EXPECT_EQ(verify_teleport(2, 20, Seed{7}).to_json()["metrics"].dump(),
            verify_teleport(2, 20, Seed{7}).to_json()["metrics"].dump());
  EXPECT_EQ(run_estimate(2, 100, 50, Seed{3}).to_json()["metrics"].dump(),
            run_estimate(2, 100, 50, Seed{3}).to_json()["metrics"].dump());
}

TEST(Report, OptimizerSection) {
  const auto j = run_optimize_cloner(1, Seed{2}).to_json();
  ASSERT_TRUE(j.contains("optimizer"));
  EXPECT_TRUE(j["optimizer"].contains("objective_values"));
  EXPECT_TRUE(j["optimizer"].contains("gradient_norms"));
  EXPECT_TRUE(j["optimizer"].contains("final_fidelity"));
  EXPECT_TRUE(j["optimizer"].contains("restarts"));
}

TEST(Report, ReverseFailsOnCoarseMesh) {
  const ExperimentReport r = verify_reverse(6, 8, 500, Seed{1});
  EXPECT_FALSE(r.pass());
}
