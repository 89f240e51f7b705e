#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "lanm/decode.hpp"
#include "lanm/dictionary.hpp"
#include "lanm/dual_poly.hpp"
#include "lanm/metrics.hpp"
#include "lanm/qam.hpp"
#include "lanm/scene.hpp"
#include "lanm/solver.hpp"

namespace lanm {

struct DetectConfig {
  int oversample = 0;        // 0: 16 per dimension, capped at 8 in 4D
  double threshold = 0.0;    // 0: noise-adaptive policy
  double revalidate = 0.0;   // 0: noise-adaptive policy
  double merge_radius = 0.0; // 0: half the separation threshold
  // 0: keep the K strongest validated peaks (the receiver dimensions the
  // scene); negative: keep everything the thresholds admit.
  int max_detect = 0;
};

struct TrialConfig {
  explicit TrialConfig(DimensionSpec s) : spec(std::move(s)) {}

  DimensionSpec spec;
  int num_targets = 1;
  int subspace_dim = 2;
  DictionaryKind dictionary = DictionaryKind::HadamardSubsampled;
  int qam_order = 4;
  double snr_db = std::numeric_limits<double>::infinity();
  SnrReference snr_ref = SnrReference::Signal;
  SolverConfig solver;
  DetectConfig detect;
};

struct SceneDraw {
  TargetScene scene;
  std::vector<SymbolStream> streams;
};

// Rejection sampling under the Assumption-3 separation guard (up to 1000
// attempts); amplitudes are complex Gaussian with magnitude kept inside
// [0.3, 3] so a vanishing target cannot dominate the error metrics.
SceneDraw generate_scene(const DimensionSpec& spec, int num_targets, int subspace_dim,
                         int qam_order, std::uint64_t seed);

int default_oversample(const DimensionSpec& spec);

// Noise-adaptive peak thresholds: the spec defaults 1-1e-2 / 1-1e-4 shrink
// with the relative noise bound sigma/||y||.
double detection_threshold(double sigma_rel);
double revalidation_threshold(double sigma_rel);

struct PipelineResult {
  DualSolution solution;
  PeakSet peaks;              // refined, validated
  DecodeResult decode;        // empty targets when nothing was detected
  Eigen::MatrixXcd lifted_hat;
  MatchResult match;
  TrialMetrics metrics;
};

// Estimator pipeline on a ready observation: solve the dual SDR, localize the
// unit-norm peaks of the dual polynomial, recover amplitudes/symbols by least
// squares, compare against the truth.
PipelineResult run_pipeline(const SceneDraw& truth, const MeasurementEnsemble& ensemble,
                            const Eigen::VectorXcd& y_observed, double sigma,
                            const SolverConfig& solver_cfg, const DetectConfig& detect,
                            int qam_order);

// Full trial: scene -> dictionary -> modulate -> observe -> noise -> pipeline.
// Failures land in metrics.failure instead of propagating.
TrialMetrics run_trial(const TrialConfig& config, std::uint64_t seed);

// Same, but returning the heavyweight artifacts (CLI use).
struct TrialArtifacts {
  SceneDraw truth;
  Dictionary dictionary;
  Eigen::VectorXcd y_clean;
  Eigen::VectorXcd y_observed;
  double sigma = 0.0;
  PipelineResult pipeline;
};
TrialArtifacts run_trial_full(const TrialConfig& config, std::uint64_t seed);

}  // namespace lanm
