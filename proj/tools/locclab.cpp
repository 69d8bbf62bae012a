// locclab: seeded verification runs, one JSON report on stdout.
// Exit status: 0 pass, 1 a check failed, 2 bad arguments or input.
#include "locclab/experiments.hpp"
#include "locclab/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace locclab;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInvalid = 2;

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io::FormatError("cannot open " + path);
  return nlohmann::json::parse(in);
}

int emit(const ExperimentReport& r) {
  std::cout << r.to_json().dump(2) << "\n";
  for (const auto& f : r.failed_checks()) std::cerr << "check failed: " << f << "\n";
  return r.pass() ? kExitPass : kExitFail;
}

/// `apply`: pushes a state through a channel file and prints the output state.
int run_apply(const std::string& channel_path, const std::string& state_path) {
  const auto ch = read_json(channel_path);
  const DensityMatrix rho = io::density_from_json(read_json(state_path));
  const std::string kind = ch.at("kind").get<std::string>();
  std::optional<DensityMatrix> out;
  if (kind == "kraus") {
    out = apply_channel(io::kraus_from_json(ch), rho);
  } else if (kind == "one_way_lcc") {
    out = apply_one_way_lcc(io::one_way_from_json(ch), rho);
  } else if (kind == "separable") {
    out = apply_separable(io::separable_from_json(ch), rho);
  } else {
    throw io::FormatError("unknown channel kind '" + kind + "'");
  }
  std::cout << io::to_json(*out).dump(2) << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-dimensional LOCC and cloning verification runs"};
  app.set_version_flag("--version", std::string(kArtifactVersion));
  app.require_subcommand(1);

  std::size_t dim = 2, copies = 1, mesh = 200, restarts = 8;
  std::size_t t_teleport = 100, t_forward = 100, t_reverse = 10000, t_mono = 1000, t_nocreate = 1000,
              t_invariance = 1000, t_estimate = 10000;
  std::uint64_t seed = 0;
  double noise = 0.0, theta = 0.0;
  std::string measure = "eof", channel_path, state_path;
  std::optional<int> code;

  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", seed, "master seed"); };
  auto add_trials = [](CLI::App* c, std::size_t& trials) {
    c->add_option("--trials", trials, "Monte-Carlo trials")->capture_default_str()->check(CLI::PositiveNumber);
  };

  auto* verify = app.add_subcommand("verify", "protocol checks")->require_subcommand(1);

  auto* teleport = verify->add_subcommand("teleport", "exact teleportation through the maximally entangled state");
  teleport->add_option("--dim", dim, "local dimension")->check(CLI::Range(2, 16));
  add_trials(teleport, t_teleport);
  add_seed(teleport);
  teleport->callback([&] { code = emit(verify_teleport(dim, t_teleport, Seed{seed})); });

  auto* forward = verify->add_subcommand("forward", "entangler -> cloner");
  forward->add_option("--copies", copies, "number of copies n")->check(CLI::PositiveNumber);
  forward->add_option("--noise", noise, "0 = exact branches, else Werner(1 - noise)")->check(CLI::Range(0.0, 1.0));
  add_trials(forward, t_forward);
  add_seed(forward);
  forward->callback([&] { code = emit(verify_forward(copies, noise, t_forward, Seed{seed})); });

  auto* reverse = verify->add_subcommand("reverse", "cloner -> flipper");
  reverse->add_option("--copies", copies, "copies N fed to the estimator")->check(CLI::PositiveNumber);
  reverse->add_option("--mesh", mesh, "measurement directions")->check(CLI::PositiveNumber);
  add_trials(reverse, t_reverse);
  add_seed(reverse);
  reverse->callback([&] { code = emit(verify_reverse(copies, mesh, t_reverse, Seed{seed})); });

  auto* swap = verify->add_subcommand("swap", "exact flip on half of cos(theta)|00> + sin(theta)|11>");
  swap->add_option("--theta", theta, "angle in radians");
  swap->callback([&] { code = emit(verify_swap(theta)); });

  std::vector<std::size_t> dich_copies = {1, 2, 3, 4, 5, 6};
  auto* dich = verify->add_subcommand("dichotomy", "finite flippers versus the exact flip on half a singlet");
  dich->add_option("--copies", dich_copies, "copy counts")->check(CLI::PositiveNumber);
  dich->add_option("--mesh", mesh, "measurement directions")->check(CLI::PositiveNumber);
  dich->callback([&] { code = emit(dichotomy_check(dich_copies, mesh)); });

  auto* audit = app.add_subcommand("audit", "entanglement audits")->require_subcommand(1);
  auto* mono = audit->add_subcommand("monotonicity", "average output entanglement never exceeds the input");
  mono->add_option("--measure", measure, "eof | concurrence | negativity | singlet_fidelity");
  add_trials(mono, t_mono);
  add_seed(mono);
  mono->callback([&] {
    const auto m = parse_measure(measure);
    if (!m) throw CLI::ValidationError("--measure", "unknown measure '" + measure + "'");
    code = emit(monotonicity_audit(*m, t_mono, Seed{seed}));
  });

  auto* nocreate = audit->add_subcommand("no-creation", "product inputs stay unentangled");
  add_trials(nocreate, t_nocreate);
  add_seed(nocreate);
  nocreate->callback([&] { code = emit(no_creation_audit(t_nocreate, Seed{seed})); });

  auto* invariance = audit->add_subcommand("invariance", "measures under local unitaries");
  add_trials(invariance, t_invariance);
  add_seed(invariance);
  invariance->callback([&] { code = emit(local_unitary_invariance_audit(t_invariance, Seed{seed})); });

  auto* estimate = app.add_subcommand("estimate", "mean fidelity of the covariant estimator");
  estimate->add_option("--copies", copies, "copies N")->check(CLI::PositiveNumber);
  estimate->add_option("--mesh", mesh, "measurement directions")->check(CLI::PositiveNumber);
  add_trials(estimate, t_estimate);
  add_seed(estimate);
  estimate->callback([&] { code = emit(run_estimate(copies, mesh, t_estimate, Seed{seed})); });

  auto* optimize = app.add_subcommand("optimize", "variational searches")->require_subcommand(1);
  auto* cloner = optimize->add_subcommand("cloner", "best symmetric 1 -> 2 qubit cloner");
  cloner->add_option("--restarts", restarts, "random starts")->check(CLI::PositiveNumber);
  add_seed(cloner);
  cloner->callback([&] { code = emit(run_optimize_cloner(restarts, Seed{seed})); });

  auto* apply = app.add_subcommand("apply", "apply a channel file to a state file");
  apply->add_option("--channel", channel_path, "channel JSON")->required()->check(CLI::ExistingFile);
  apply->add_option("--state", state_path, "state JSON")->required()->check(CLI::ExistingFile);
  apply->callback([&] { code = run_apply(channel_path, state_path); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    app.exit(e);
    return kExitInvalid;
  } catch (const locclab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return code.value_or(kExitInvalid);
}
