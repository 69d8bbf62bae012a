// Seeded verification runs behind the command-line tool. Each returns a
// report whose pass flag follows from its own metrics and tolerances.
#pragma once

#include "locclab/entanglement.hpp"
#include "locclab/estimation.hpp"
#include "locclab/optimizer.hpp"
#include "locclab/protocols.hpp"
#include "locclab/report.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace locclab {

inline constexpr double kTeleportTolerance = 1e-10;
inline constexpr double kForwardTolerance = 1e-8;
inline constexpr double kFidelityOracleTolerance = 0.01;
inline constexpr double kDichotomyTolerance = 1e-10;
inline constexpr double kClonerOracleTolerance = 0.005;
inline constexpr double kNoCloningGap = 0.15;
inline constexpr double kClonerExcessTolerance = 0.002;

/// (N+1)/(N+2): mean fidelity of optimal estimation from N copies of a qubit.
inline double estimation_oracle(std::size_t copies) {
  return static_cast<double>(copies + 1) / static_cast<double>(copies + 2);
}

inline ExperimentReport verify_teleport(std::size_t d, std::size_t trials, Seed seed) {
  if (trials == 0) throw std::invalid_argument("verify teleport: trials must be >= 1");
  Stopwatch clock;
  ExperimentReport report("verify teleport", seed);
  report.set_parameter("dim", d);
  report.set_parameter("trials", trials);
  const OneWayLccChannel tel = teleportation_channel(d);
  const DensityMatrix resource = projector(maximally_entangled_state(d));
  const double uniform = 1.0 / static_cast<double>(d * d);
  double worst = 0.0, min_fid = 1.0, prob_dev = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const DensityMatrix p_c = projector(random_pure_state({d}, seed.sub(t)));
    const DensityMatrix input = tensor_product(p_c, resource);
    const DensityMatrix out = apply_one_way_lcc(tel, input);
    const DensityMatrix recovered = out.reduce({2});
    worst = std::max(worst, trace_distance(recovered, p_c));
    min_fid = std::min(min_fid, fidelity(recovered, p_c));
    for (std::size_t i = 0; i < tel.branch_count(); ++i) {
      const double p = tel.branch_action(i, input.matrix()).trace().real();
      prob_dev = std::max(prob_dev, std::abs(p - uniform));
    }
  }
  report.set_metric("max_trace_distance", worst);
  report.set_metric("min_fidelity", min_fid);
  report.set_metric("max_outcome_probability_deviation", prob_dev);
  report.require_at_most("max_trace_distance", "teleport", kTeleportTolerance);
  report.require_at_most("max_outcome_probability_deviation", "teleport", kTeleportTolerance);
  report.set_duration_ms(clock.elapsed_ms());
  return report;
}

/// Entangler -> cloner. noise = 0 uses branch-exact maximally entangled
/// branches; otherwise each branch is Werner(1 - noise).
inline ExperimentReport verify_forward(std::size_t copies, double noise, std::size_t trials, Seed seed) {
  if (trials == 0) throw std::invalid_argument("verify forward: trials must be >= 1");
  if (!(noise >= 0.0 && noise <= 1.0)) throw std::invalid_argument("verify forward: noise must lie in [0, 1]");
  Stopwatch clock;
  ExperimentReport report("verify forward", seed);
  report.set_parameter("copies", copies);
  report.set_parameter("noise", noise);
  report.set_parameter("trials", trials);
  const EntanglerOracle entangler = noise == 0.0 ? EntanglerOracle::exact(2) : EntanglerOracle::werner(1.0 - noise);
  report.set_parameter("realizable", entangler.realizable());

  const OneWayLccChannel tel = teleportation_channel(2);
  double min_joint = 1.0, min_copy = 1.0, mean_joint = 0.0, mean_copy = 0.0;
  double marginal_spread = 0.0, oracle_dev = 0.0, product_gap = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const PureState psi = random_pure_state({2}, seed.sub(t));
    const DensityMatrix target = projector(psi);
    const BroadcastResult out = broadcast_cloner(entangler, copies, 2, psi);
    const double joint = fidelity(out.joint, projector(PureState(symmetric_embedding(copies) *
                                                                     symmetric_power(psi.amplitudes(), copies),
                                                                 SystemDims::uniform(2, copies))));
    std::vector<double> per;
    for (const auto& m : out.marginals) per.push_back(fidelity(m, target));
    const double f1 = per.front();
    for (double f : per) marginal_spread = std::max(marginal_spread, std::abs(f - f1));

    // Oracle: teleport directly through the averaged resource state.
    ComplexMatrix avg = ComplexMatrix::Zero(4, 4);
    for (const auto& b : entangler.branches()) avg += b.probability * b.state.matrix();
    const double direct = fidelity(teleport(tel, target, DensityMatrix(avg, {2, 2})), target);
    oracle_dev = std::max(oracle_dev, std::abs(f1 - direct));
    product_gap = std::max(product_gap, std::abs(joint - std::pow(f1, static_cast<double>(copies))));

    min_joint = std::min(min_joint, joint);
    min_copy = std::min(min_copy, f1);
    mean_joint += joint / static_cast<double>(trials);
    mean_copy += f1 / static_cast<double>(trials);
  }
  report.set_metric("min_joint_fidelity", min_joint);
  report.set_metric("min_per_copy_fidelity", min_copy);
  report.set_metric("mean_joint_fidelity", mean_joint);
  report.set_metric("mean_per_copy_fidelity", mean_copy);
  report.set_metric("max_copy_spread", marginal_spread);
  report.set_metric("max_direct_teleport_deviation", oracle_dev);
  report.set_metric("max_joint_vs_product_gap", product_gap);
  report.require_at_most("max_copy_spread", "forward_consistency", 1e-9);
  report.require_at_most("max_direct_teleport_deviation", "forward_consistency", 1e-9);
  if (noise == 0.0) {
    report.require_at_least("min_joint_fidelity", "forward_joint_fidelity", 1.0 - kForwardTolerance);
  }
  report.set_duration_ms(clock.elapsed_ms());
  return report;
}

/// Cloner -> flipper: flip fidelity against (N+1)/(N+2) and zero output
/// entanglement on half a singlet.
inline ExperimentReport verify_reverse(std::size_t copies, std::size_t mesh, std::size_t trials, Seed seed) {
  Stopwatch clock;
  ExperimentReport report("verify reverse", seed);
  report.set_parameter("copies", copies);
  report.set_parameter("mesh", mesh);
  report.set_parameter("trials", trials);
  const EstimationPovm povm = covariant_estimation_povm(copies, mesh);
  const Flipper f = flipper_from_cloner(ClonerOracle::perfect(copies), povm);
  const double flip = flip_fidelity(f, trials, seed);
  const double oracle = estimation_oracle(copies);
  report.set_metric("flip_fidelity", flip);
  report.set_metric("oracle_fidelity", oracle);
  report.set_metric("oracle_deviation", std::abs(flip - oracle));
  report.set_metric("completeness_residual", f.channel.alice().completeness_residual());
  report.set_metric("output_concurrence", flipper_output_concurrence(f));
  report.require_at_most("oracle_deviation", "fidelity_oracle", kFidelityOracleTolerance);
  report.require_at_most("completeness_residual", "completeness", 1e-8);
  report.require_at_most("output_concurrence", "dichotomy", kDichotomyTolerance);
  report.set_duration_ms(clock.elapsed_ms());
  return report;
}

inline PureState cos_sin_state(double theta) {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = std::cos(theta);
  v(3) = std::sin(theta);
  return PureState::normalized(v, {2, 2});
}

/// Exact flip (the swap) applied to half of cos θ|00> + sin θ|11>.
inline ExperimentReport verify_swap(double theta) {
  ExperimentReport report = entanglement_swap_check(flip_channel(2), projector(basis_state({2}, 0)), cos_sin_state(theta));
  report.set_parameter("theta", theta);
  return report;
}

/// Every finite-N flipper leaves half a singlet disentangled while the exact
/// flip keeps it maximally entangled.
inline ExperimentReport dichotomy_check(const std::vector<std::size_t>& copies, std::size_t mesh) {
  Stopwatch clock;
  ExperimentReport report("verify dichotomy", Seed{0});
  report.set_parameter("copies", copies);
  report.set_parameter("mesh", mesh);
  double worst = 0.0;
  for (std::size_t n : copies) {
    const double c = flipper_output_concurrence(flipper_from_cloner(ClonerOracle::perfect(n), covariant_estimation_povm(n, mesh)));
    report.set_metric("concurrence_N" + std::to_string(n), c);
    worst = std::max(worst, c);
  }
  report.set_metric("max_finite_concurrence", worst);
  report.require_at_most("max_finite_concurrence", "dichotomy", kDichotomyTolerance);
  const ExperimentReport exact = entanglement_swap_check(flip_channel(2), projector(basis_state({2}, 0)), singlet());
  report.set_metric("exact_flip_concurrence", exact.metric("concurrence_after"));
  report.require_at_least("exact_flip_concurrence", "exact_flip_concurrence", 1.0 - kSwapTolerance);
  report.set_duration_ms(clock.elapsed_ms());
  return report;
}

inline ExperimentReport run_estimate(std::size_t copies, std::size_t mesh, std::size_t trials, Seed seed) {
  Stopwatch clock;
  ExperimentReport report("estimate", seed);
  report.set_parameter("copies", copies);
  report.set_parameter("mesh", mesh);
  report.set_parameter("trials", trials);
  const EstimationPovm povm = covariant_estimation_povm(copies, mesh);
  const double f = mean_estimation_fidelity(povm, trials, seed);
  report.set_metric("mean_fidelity", f);
  report.set_metric("oracle_fidelity", estimation_oracle(copies));
  report.set_metric("oracle_deviation", std::abs(f - estimation_oracle(copies)));
  report.set_metric("completeness_residual", povm.completeness_residual());
  report.set_metric("elements", static_cast<double>(povm.size()));
  report.require_at_most("oracle_deviation", "fidelity_oracle", kFidelityOracleTolerance);
  report.require_at_most("completeness_residual", "completeness", kPovmCompletenessTolerance);
  report.set_duration_ms(clock.elapsed_ms());
  return report;
}

inline ExperimentReport run_optimize_cloner(std::size_t restarts, Seed seed) {
  Stopwatch clock;
  ExperimentReport report("optimize cloner", seed);
  report.set_parameter("restarts", restarts);
  report.set_parameter("ancilla", kClonerAncilla);
  report.set_parameter("quadrature", "truncated_icosahedron_60");
  const OptimizationTrace trace = optimize_cloner(restarts, seed);
  const double oracle = cloning_objective(symmetric_cloner(), Quadrature::fibonacci(2000));

  double worst_step = 0.0;
  for (const auto& r : trace.restarts) {
    for (std::size_t k = 1; k < r.objective_values.size(); ++k) {
      worst_step = std::min(worst_step, r.objective_values[k] - r.objective_values[k - 1]);
    }
  }
  const ComplexMatrix w = decode_isometry(trace.best().params);
  report.set_metric("best_objective", trace.best().best_objective);
  report.set_metric("final_fidelity", trace.final_fidelity);
  report.set_metric("oracle_fidelity", oracle);
  report.set_metric("oracle_deviation", std::abs(trace.final_fidelity - oracle));
  report.set_metric("oracle_excess", trace.final_fidelity - oracle);
  report.set_metric("no_cloning_gap", 1.0 - trace.final_fidelity);
  report.set_metric("min_accepted_step_change", worst_step);
  report.set_metric("completeness_residual",
                    induced_channel(w, kClonerAncilla, {2, 2}).completeness_residual());
  report.require_at_most("oracle_deviation", "cloner_oracle", kClonerOracleTolerance);
  report.require_at_most("oracle_excess", "cloner_excess", kClonerExcessTolerance);
  report.require_at_least("no_cloning_gap", "no_cloning_gap", kNoCloningGap);
  report.require_at_least("min_accepted_step_change", "monotone_steps", 0.0);
  report.require_at_most("completeness_residual", "completeness", kIsometryTolerance);
  report.set_section("optimizer", trace.to_json());
  report.set_duration_ms(clock.elapsed_ms());
  return report;
}

}  // namespace locclab
