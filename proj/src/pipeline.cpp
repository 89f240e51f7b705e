#include "lanm/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "lanm/rng.hpp"

namespace lanm {

namespace {

double clampd(double x, double lo, double hi) { return std::min(hi, std::max(lo, x)); }

}  // namespace

SceneDraw generate_scene(const DimensionSpec& spec, int num_targets, int subspace_dim,
                         int qam_order, std::uint64_t seed) {
  if (num_targets < 0) throw std::invalid_argument("generate_scene: K must be nonnegative");
  const double min_sep = spec.separation_threshold();
  Rng rng(mix_seed(seed, 0x5ce9e));

  SceneDraw draw{TargetScene{SceneConfig{spec, num_targets, subspace_dim}, {}, {}}, {}};

  bool placed = false;
  for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
    draw.scene.targets.clear();
    for (int k = 0; k < num_targets; ++k) {
      TargetParams tgt;
      tgt.tau.resize(spec.ndim());
      for (int d = 0; d < spec.ndim(); ++d) tgt.tau[d] = rng.uniform01();
      tgt.alpha = 1.0;  // filled below
      draw.scene.targets.push_back(std::move(tgt));
    }
    placed = num_targets < 2 || draw.scene.min_separation() >= min_sep;
  }
  if (!placed)
    throw std::runtime_error("generate_scene: separation infeasible for requested K at this aperture");

  for (int k = 0; k < num_targets; ++k) {
    std::complex<double> a = rng.cnormal();
    while (std::abs(a) < 0.3 || std::abs(a) > 3.0) a = rng.cnormal();
    draw.scene.targets[k].alpha = a;
  }
  for (int k = 0; k < num_targets; ++k) {
    draw.streams.push_back(encode(qam_order, subspace_dim, mix_seed(seed, 0xabc0 + k)));
    draw.scene.symbols.push_back(draw.streams.back().h);
  }
  draw.scene.validate();
  return draw;
}

int default_oversample(const DimensionSpec& spec) { return spec.ndim() >= 4 ? 8 : 16; }

double detection_threshold(double sigma_rel) {
  return clampd((1.0 - 1e-2) * (1.0 - sigma_rel), 0.55, 1.0 - 1e-2);
}

double revalidation_threshold(double sigma_rel) {
  return clampd((1.0 - 1e-4) * (1.0 - sigma_rel), 0.55, 1.0 - 1e-4);
}

PipelineResult run_pipeline(const SceneDraw& truth, const MeasurementEnsemble& ensemble,
                            const Eigen::VectorXcd& y_observed, double sigma,
                            const SolverConfig& solver_cfg, const DetectConfig& detect,
                            int qam_order) {
  const DimensionSpec& spec = ensemble.spec();
  const auto t0 = std::chrono::steady_clock::now();

  PipelineResult out;
  const SdrProblem problem = sigma > 0.0 ? build_noisy_sdr(y_observed, ensemble, sigma)
                                         : build_noiseless_sdr(y_observed, ensemble);
  SdrProblem with_degrees = problem;
  with_degrees.degrees = solver_cfg.degrees;
  const double sigma_rel = y_observed.norm() > 0.0 ? sigma / y_observed.norm() : 0.0;
  SolverConfig effective = solver_cfg;
  if (effective.tol == 0.0 && sigma_rel > 0.0) {
    // Solving a noisy instance far below its noise floor buys nothing; the
    // residual target scales with the relative noise bound.
    effective.tol = std::min(1e-3, std::max(1e-5, 3e-3 * sigma_rel * sigma_rel));
  }
  out.solution = solve(with_degrees, effective);

  const double threshold =
      detect.threshold > 0.0 ? detect.threshold : detection_threshold(sigma_rel);
  const double revalidate =
      detect.revalidate > 0.0 ? detect.revalidate : revalidation_threshold(sigma_rel);
  const double merge_radius =
      detect.merge_radius > 0.0 ? detect.merge_radius : spec.separation_threshold() / 2.0;
  const int oversample = detect.oversample > 0 ? detect.oversample : default_oversample(spec);

  DualPolynomial poly{out.solution.F, spec};
  const NormGrid grid = eval_grid(poly, oversample);
  const PeakSet coarse = find_peaks(grid, threshold, merge_radius);

  // Refine every candidate, then re-validate and re-merge.
  PeakSet refined;
  for (const Peak& p : coarse.peaks) {
    Peak r = refine_peak(poly, p.tau);
    if (r.height < revalidate) continue;
    bool merged = false;
    for (Peak& kept : refined.peaks)
      if (wrap_max_dist(kept.tau, r.tau) < merge_radius) {
        if (r.height > kept.height) kept = r;
        merged = true;
        break;
      }
    if (!merged) refined.peaks.push_back(std::move(r));
  }
  const int t_dim = truth.scene.config.subspace_dim;
  int max_targets = ensemble.observation_count() / t_dim;
  if (detect.max_detect > 0)
    max_targets = std::min(max_targets, detect.max_detect);
  else if (detect.max_detect == 0)
    max_targets = std::min(max_targets, truth.scene.config.num_targets);
  std::sort(refined.peaks.begin(), refined.peaks.end(),
            [](const Peak& a, const Peak& b) { return a.height > b.height; });
  if (refined.count() > max_targets) refined.peaks.resize(std::max(max_targets, 0));
  out.peaks = refined;

  out.lifted_hat = Eigen::MatrixXcd::Zero(t_dim, spec.atom_len());
  while (refined.count() > 0) {
    std::vector<std::vector<double>> tau_hat;
    for (const Peak& p : refined.peaks) tau_hat.push_back(p.tau);
    try {
      out.decode = ls_decode(y_observed, ensemble, tau_hat, qam_order);
    } catch (const std::exception&) {
      // Near-collided shifts make the design rank deficient; drop the weakest
      // peak and retry.
      refined.peaks.pop_back();
      out.peaks = refined;
      continue;
    }
    for (const DecodedTarget& tgt : out.decode.targets)
      out.lifted_hat.noalias() += tgt.g * steering_vector(spec, tgt.tau).adjoint();
    break;
  }

  std::vector<std::vector<double>> truth_taus;
  for (const TargetParams& t : truth.scene.targets) truth_taus.push_back(t.tau);
  out.match = match_targets(truth_taus, refined);

  TrialMetrics& m = out.metrics;
  m.k_hat = refined.count();
  m.nmse = nmse(truth.scene, out.decode.targets);
  m.ser = evaluate_ser(out.decode, truth.streams, out.match);
  m.lift_rel_error = lift_error(build_lifted(truth.scene), out.lifted_hat);
  m.success = m.lift_rel_error <= kSuccessThreshold;
  m.solver_converged = out.solution.status == SolveStatus::Optimal;
  m.objective = out.solution.objective;
  m.max_shift_error =
      out.match.pairs.empty() || !out.match.missed.empty() || !out.match.false_alarms.empty()
          ? 1.0
          : out.match.max_error;
  m.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

TrialArtifacts run_trial_full(const TrialConfig& config, std::uint64_t seed) {
  TrialArtifacts art;
  art.truth = generate_scene(config.spec, config.num_targets, config.subspace_dim,
                             config.qam_order, mix_seed(seed, 1));
  art.dictionary = gen_dictionary(config.dictionary, config.spec.delay_len(), config.subspace_dim,
                                  mix_seed(seed, 2));
  MeasurementEnsemble ensemble(config.spec, art.dictionary);
  art.y_clean = ensemble.forward(build_lifted(art.truth.scene));
  const NoisyObservation noisy = add_awgn(art.y_clean, config.snr_db, config.snr_ref, mix_seed(seed, 3));
  art.y_observed = noisy.y;
  art.sigma = noisy.sigma;
  art.pipeline = run_pipeline(art.truth, ensemble, art.y_observed, art.sigma, config.solver,
                              config.detect, config.qam_order);
  return art;
}

TrialMetrics run_trial(const TrialConfig& config, std::uint64_t seed) {
  try {
    TrialArtifacts art = run_trial_full(config, seed);
    return art.pipeline.metrics;
  } catch (const std::exception& e) {
    TrialMetrics failed;
    failed.failure = e.what();
    return failed;
  }
}

}  // namespace lanm
