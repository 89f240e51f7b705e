// Command-line front end: simulation, solving, sweeps and plot-data export.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "lanm/harness.hpp"
#include "lanm/io_json.hpp"
#include "lanm/pipeline.hpp"
#include "lanm/rng.hpp"

namespace {

using namespace lanm;

double now_s() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

struct CommonFlags {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string dictionary = "hadamard";
  int qam = 4;
  double snr_db = std::numeric_limits<double>::infinity();
  std::string snr_ref = "signal";
  std::string sigma_convention = "norm";
  int oversample = 0;
  int trials = 20;
  std::string solver_path = "auto";
  double solver_tol = 0.0;
  int max_iters = 0;
};

void add_seed(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "Base seed (required for stochastic commands)")->required();
}

SolverConfig solver_config(const CommonFlags& flags) {
  SolverConfig cfg;
  if (flags.solver_path == "ipm") cfg.path = SolverConfig::Path::Ipm;
  else if (flags.solver_path == "first-order") cfg.path = SolverConfig::Path::FirstOrder;
  else cfg.path = SolverConfig::Path::Auto;
  cfg.tol = flags.solver_tol;
  cfg.max_iters = flags.max_iters;
  return cfg;
}

DictionaryKind dictionary_kind(const CommonFlags& flags) {
  const auto kind = dictionary_kind_from_name(flags.dictionary);
  if (!kind) throw CLI::ValidationError("--dictionary", "unknown dictionary kind " + flags.dictionary);
  return *kind;
}

SnrReference snr_reference(const CommonFlags& flags) {
  return flags.snr_ref == "unit" ? SnrReference::Unit : SnrReference::Signal;
}

// Manifest first, results after, manifest finalized with the wall time.
class ManifestWriter {
 public:
  ManifestWriter(std::string command, const json& plan, std::uint64_t seed,
                 std::vector<std::string> outputs, std::string path)
      : path_(std::move(path)), start_(now_s()) {
    manifest_ = make_manifest(std::move(command), plan, seed, std::move(outputs));
    write_text(path_, manifest_.dump(2) + "\n");
  }
  void finalize() {
    manifest_["wall_time_s"] = now_s() - start_;
    write_text(path_, manifest_.dump(2) + "\n");
  }

 private:
  std::string path_;
  json manifest_;
  double start_;
};

// Rebuild the observation bundle deterministically from a scene file plus the
// command-line knobs.
ObservationFile simulate_observation(const CommonFlags& flags) {
  const json scene_json = json::parse(read_text(flags.config));
  const SceneFile sf = scene_from_json(scene_json);
  const std::uint64_t seed = flags.seed_set ? flags.seed : sf.seed;

  ObservationFile obs;
  obs.qam_order = flags.qam;
  obs.seed = seed;
  obs.snr_db = flags.snr_db;
  obs.snr_ref = snr_reference(flags);

  if (sf.targets.empty()) {
    obs.truth = generate_scene(sf.spec, sf.num_targets, sf.subspace_dim, flags.qam, mix_seed(seed, 1));
  } else {
    obs.truth.scene.config = SceneConfig{sf.spec, sf.num_targets, sf.subspace_dim};
    obs.truth.scene.targets = sf.targets;
    for (int k = 0; k < sf.num_targets; ++k) {
      obs.truth.streams.push_back(encode(flags.qam, sf.subspace_dim, mix_seed(seed, 0xabc0 + k)));
      obs.truth.scene.symbols.push_back(obs.truth.streams.back().h);
    }
    obs.truth.scene.validate();
  }

  obs.dictionary = gen_dictionary(dictionary_kind(flags), sf.spec.delay_len(), sf.subspace_dim,
                                  mix_seed(seed, 2));
  MeasurementEnsemble ensemble(sf.spec, obs.dictionary);
  const Eigen::VectorXcd clean = ensemble.forward(build_lifted(obs.truth.scene));
  const NoisyObservation noisy = add_awgn(clean, flags.snr_db, obs.snr_ref, mix_seed(seed, 3));
  obs.y = noisy.y;
  obs.sigma = flags.sigma_convention == "squared" ? std::sqrt(noisy.sigma) : noisy.sigma;
  return obs;
}

int cmd_simulate(const CommonFlags& flags) {
  const ObservationFile obs = simulate_observation(flags);
  ManifestWriter manifest("simulate", scene_to_json(obs.truth.scene, obs.seed), obs.seed,
                          {flags.out}, flags.out + ".manifest.json");
  write_text(flags.out, observation_to_json(obs).dump(2) + "\n");
  manifest.finalize();
  std::cout << "wrote " << flags.out << " (" << obs.y.size() << " observations)\n";
  return 0;
}

int cmd_solve(const CommonFlags& flags) {
  const ObservationFile obs = observation_from_json(json::parse(read_text(flags.config)));
  MeasurementEnsemble ensemble(obs.truth.scene.config.spec, obs.dictionary);
  DetectConfig detect;
  detect.oversample = flags.oversample;
  ManifestWriter manifest("solve", json{{"input", flags.config}}, obs.seed, {flags.out},
                          flags.out + ".manifest.json");
  const PipelineResult result = run_pipeline(obs.truth, ensemble, obs.y, obs.sigma,
                                             solver_config(flags), detect, obs.qam_order);
  write_text(flags.out, solution_to_json(result).dump(2) + "\n");
  manifest.finalize();
  const TrialMetrics& m = result.metrics;
  std::printf("status=%s objective=%.9g k_hat=%d nmse=%.6g ser=%.6g lift=%.6g success=%d\n",
              solve_status_name(result.solution.status), result.solution.objective, m.k_hat,
              m.nmse, m.ser, m.lift_rel_error, m.success ? 1 : 0);
  return result.solution.status == SolveStatus::Failed ? 1 : 0;
}

int cmd_dual_surface(const CommonFlags& flags) {
  const ObservationFile obs = observation_from_json(json::parse(read_text(flags.config)));
  MeasurementEnsemble ensemble(obs.truth.scene.config.spec, obs.dictionary);
  ManifestWriter manifest("dual-surface", json{{"input", flags.config}}, obs.seed, {flags.out},
                          flags.out + ".manifest.json");
  const SdrProblem problem = obs.sigma > 0.0 ? build_noisy_sdr(obs.y, ensemble, obs.sigma)
                                             : build_noiseless_sdr(obs.y, ensemble);
  const DualSolution sol = solve(problem, solver_config(flags));
  DualPolynomial poly{sol.F, ensemble.spec()};
  const int oversample = flags.oversample > 0 ? flags.oversample
                                              : default_oversample(ensemble.spec());
  const NormGrid grid = eval_grid(poly, oversample);
  write_text(flags.out, grid_to_csv(grid));
  manifest.finalize();
  std::printf("status=%s objective=%.9g grid_max=%.9g\n", solve_status_name(sol.status),
              sol.objective, grid.max_value());
  return 0;
}

int cmd_check_adjoint(const std::string& dims_arg, int subspace, const CommonFlags& flags) {
  std::vector<Dim> dims;
  std::stringstream ss(dims_arg);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--dims", "use name:size,...");
    const auto axis = axis_from_name(part.substr(0, colon));
    if (!axis) throw CLI::ValidationError("--dims", "unknown axis " + part.substr(0, colon));
    dims.push_back({*axis, std::stoi(part.substr(colon + 1))});
  }
  const DimensionSpec spec{dims};
  const Dictionary dict = gen_dictionary(dictionary_kind(flags), spec.delay_len(), subspace,
                                         mix_seed(flags.seed, 2));
  MeasurementEnsemble ensemble(spec, dict);
  Rng rng(mix_seed(flags.seed, 4));
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    Eigen::MatrixXcd u(subspace, spec.atom_len());
    for (int i = 0; i < u.rows(); ++i)
      for (int j = 0; j < u.cols(); ++j) u(i, j) = rng.cnormal();
    Eigen::VectorXcd q(ensemble.observation_count());
    for (int i = 0; i < q.size(); ++i) q[i] = rng.cnormal();
    const std::complex<double> lhs = (ensemble.forward(u).adjoint() * q)(0);
    const std::complex<double> rhs = (u.conjugate().array() * ensemble.adjoint(q).array()).sum();
    worst = std::max(worst, std::abs(lhs - rhs) / (u.norm() * q.norm()));
  }
  std::printf("max adjoint residual: %.3e\n", worst);
  return worst <= 1e-10 ? 0 : 1;
}

int cmd_sweep_snr(const CommonFlags& flags) {
  const json plan_doc = json::parse(read_text(flags.config));
  SnrSweepPlan plan;
  for (const json& d : plan_doc.at("dims"))
    plan.dims.push_back({*axis_from_name(d.at("name").get<std::string>()), d.at("size").get<int>()});
  plan.num_targets = plan_doc.at("K").get<int>();
  plan.subspace_dim = plan_doc.at("T").get<int>();
  plan.qam_order = plan_doc.value("qam", flags.qam);
  plan.snr_db = plan_doc.at("snr_db").get<std::vector<double>>();
  plan.snr_ref = plan_doc.value("snr_ref", flags.snr_ref) == "unit" ? SnrReference::Unit
                                                                    : SnrReference::Signal;
  for (const json& k : plan_doc.at("dictionaries"))
    plan.dictionaries.push_back(*dictionary_kind_from_name(k.get<std::string>()));
  plan.trials = plan_doc.value("trials", flags.trials);
  plan.seed = flags.seed_set ? flags.seed : plan_doc.value("seed", std::uint64_t{1});
  plan.solver = solver_config(flags);
  if (plan_doc.contains("solver")) {
    const json& s = plan_doc["solver"];
    plan.solver.tol = s.value("tol", plan.solver.tol);
    plan.solver.max_iters = s.value("max_iters", plan.solver.max_iters);
    if (s.contains("path")) {
      const std::string p = s["path"].get<std::string>();
      plan.solver.path = p == "ipm" ? SolverConfig::Path::Ipm
                        : p == "first-order" ? SolverConfig::Path::FirstOrder
                                             : SolverConfig::Path::Auto;
    }
  }
  ManifestWriter manifest("sweep-snr", plan_doc, plan.seed, {flags.out}, flags.out + ".manifest.json");
  const auto rows = snr_sweep(plan);
  write_text(flags.out, snr_rows_to_csv(rows));
  manifest.finalize();
  std::cout << "wrote " << flags.out << " (" << rows.size() << " rows)\n";
  return 0;
}

int cmd_phase_transition(const CommonFlags& flags) {
  const json plan_doc = json::parse(read_text(flags.config));
  PhaseTransitionPlan plan;
  plan.observation_lengths = plan_doc.at("observations").get<std::vector<int>>();
  plan.target_counts = plan_doc.at("K").get<std::vector<int>>();
  plan.subspace_dims = plan_doc.at("T").get<std::vector<int>>();
  plan.qam_order = plan_doc.value("qam", flags.qam);
  for (const json& k : plan_doc.at("dictionaries"))
    plan.dictionaries.push_back(*dictionary_kind_from_name(k.get<std::string>()));
  plan.trials = plan_doc.value("trials", flags.trials);
  plan.seed = flags.seed_set ? flags.seed : plan_doc.value("seed", std::uint64_t{1});
  plan.solver = solver_config(flags);
  ManifestWriter manifest("phase-transition", plan_doc, plan.seed, {flags.out},
                          flags.out + ".manifest.json");
  const auto rows = phase_transition(plan);
  write_text(flags.out, phase_rows_to_csv(rows));
  manifest.finalize();
  std::cout << "wrote " << flags.out << " (" << rows.size() << " rows)\n";
  return 0;
}

int cmd_theorem_probe(const CommonFlags& flags) {
  const json plan_doc = json::parse(read_text(flags.config));
  TheoremProbePlan plan;
  for (const json& kt : plan_doc.at("kt_pairs"))
    plan.kt_pairs.emplace_back(kt.at(0).get<int>(), kt.at(1).get<int>());
  for (const json& k : plan_doc.at("dictionaries"))
    plan.dictionaries.push_back(*dictionary_kind_from_name(k.get<std::string>()));
  plan.qam_order = plan_doc.value("qam", flags.qam);
  plan.min_length = plan_doc.value("min_observations", 5);
  plan.max_length = plan_doc.value("max_observations", 65);
  plan.target_rate = plan_doc.value("target_rate", 0.9);
  plan.trials = plan_doc.value("trials", flags.trials);
  plan.seed = flags.seed_set ? flags.seed : plan_doc.value("seed", std::uint64_t{1});
  plan.solver = solver_config(flags);
  ManifestWriter manifest("theorem-probe", plan_doc, plan.seed, {flags.out},
                          flags.out + ".manifest.json");
  const auto rows = theorem_scaling_probe(plan);
  write_text(flags.out, probe_rows_to_csv(rows));
  manifest.finalize();
  std::cout << "wrote " << flags.out << " (" << rows.size() << " rows)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifted atomic norm receiver toolkit for joint radar parameter estimation and symbol decoding"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string dims_arg;
  int subspace = 4;

  auto add_common = [&](CLI::App* cmd, bool needs_config, bool needs_out) {
    if (needs_config) cmd->add_option("--config", flags.config, "Input JSON file")->required();
    if (needs_out) cmd->add_option("--out", flags.out, "Output path")->required();
    cmd->add_option("--dictionary", flags.dictionary, "gaussian|hadamard|dft|fourier");
    cmd->add_option("--qam", flags.qam, "QAM order (4, 16, 64)");
    cmd->add_option("--snr", flags.snr_db, "SNR in dB (omit for noiseless)");
    cmd->add_option("--snr-ref", flags.snr_ref, "unit|signal noise power reference");
    cmd->add_option("--sigma-convention", flags.sigma_convention,
                    "norm|squared reading of the noise bound");
    cmd->add_option("--oversample", flags.oversample, "Grid oversampling per dimension");
    cmd->add_option("--trials", flags.trials, "Monte Carlo trials per cell");
    cmd->add_option("--solver-path", flags.solver_path, "auto|ipm|first-order");
    cmd->add_option("--solver-tol", flags.solver_tol, "Solver tolerance (0 = default)");
    cmd->add_option("--max-iters", flags.max_iters, "Solver iteration budget (0 = default)");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "Generate a deterministic observation dump");
  add_common(simulate, true, true);
  add_seed(simulate, flags);

  CLI::App* solve_cmd = app.add_subcommand("solve", "Run the receiver pipeline on an observation dump");
  add_common(solve_cmd, true, true);

  CLI::App* sweep = app.add_subcommand("sweep-snr", "NMSE/SER curves over an SNR grid");
  add_common(sweep, true, true);
  add_seed(sweep, flags);

  CLI::App* phase = app.add_subcommand("phase-transition", "Success-rate grid over (K, T, observations)");
  add_common(phase, true, true);
  add_seed(phase, flags);

  CLI::App* surface = app.add_subcommand("dual-surface", "Dual polynomial norm grid as CSV");
  add_common(surface, true, true);

  CLI::App* adjoint = app.add_subcommand("check-adjoint", "Verify the measurement adjoint identity");
  adjoint->add_option("--dims", dims_arg, "Active dimensions, e.g. delay:65 or delay:15,doppler:15")
      ->required();
  adjoint->add_option("--T", subspace, "Subspace dimension");
  adjoint->add_option("--dictionary", flags.dictionary, "gaussian|hadamard|dft|fourier");
  add_seed(adjoint, flags);

  CLI::App* probe = app.add_subcommand("theorem-probe", "Minimal observation count for target success rate");
  add_common(probe, true, true);
  add_seed(probe, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors exit 2, help exits 0
  }

  flags.seed_set = simulate->count("--seed") || sweep->count("--seed") || phase->count("--seed") ||
                   adjoint->count("--seed") || probe->count("--seed");

  try {
    if (simulate->parsed()) return cmd_simulate(flags);
    if (solve_cmd->parsed()) return cmd_solve(flags);
    if (sweep->parsed()) return cmd_sweep_snr(flags);
    if (phase->parsed()) return cmd_phase_transition(flags);
    if (surface->parsed()) return cmd_dual_surface(flags);
    if (adjoint->parsed()) return cmd_check_adjoint(dims_arg, subspace, flags);
    if (probe->parsed()) return cmd_theorem_probe(flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
