#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lanm/pipeline.hpp"

namespace lanm {

// Bounded worker pool; results must be written by task index so the merge
// order never depends on scheduling. Worker count comes from LANM_WORKERS,
// defaulting to the hardware concurrency.
void parallel_for(int num_tasks, const std::function<void(int)>& body);
int worker_count();

struct SnrSweepPlan {
  std::vector<Dim> dims;
  int num_targets = 2;
  int subspace_dim = 4;
  int qam_order = 4;
  std::vector<double> snr_db;
  SnrReference snr_ref = SnrReference::Signal;
  std::vector<DictionaryKind> dictionaries;
  int trials = 20;
  std::uint64_t seed = 1;
  SolverConfig solver;
};

struct SnrSweepRow {
  DictionaryKind dictionary;
  double snr_db;
  int qam_order;
  int trials;
  double mean_nmse;
  double mean_ser;
  double success_rate;
  int failures;
};

std::vector<SnrSweepRow> snr_sweep(const SnrSweepPlan& plan);

struct PhaseTransitionPlan {
  Axis axis = Axis::Delay;                 // 1D sweeps over this axis length
  std::vector<int> observation_lengths;    // odd atom lengths L
  std::vector<int> target_counts;          // K values
  std::vector<int> subspace_dims;          // T values
  int qam_order = 4;
  std::vector<DictionaryKind> dictionaries;
  int trials = 20;
  std::uint64_t seed = 1;
  SolverConfig solver;
};

struct PhaseRow {
  DictionaryKind dictionary;
  int observations;
  int num_targets;
  int subspace_dim;
  int trials;
  double success_rate;
  double mean_lift_error;
  int failures;
};

std::vector<PhaseRow> phase_transition(const PhaseTransitionPlan& plan);

struct TheoremProbePlan {
  std::vector<std::pair<int, int>> kt_pairs;  // (K, T)
  std::vector<DictionaryKind> dictionaries;
  int qam_order = 4;
  int min_length = 5;    // odd bisection bounds on the 1D atom length
  int max_length = 65;
  double target_rate = 0.9;
  int trials = 20;
  std::uint64_t seed = 1;
  SolverConfig solver;
};

struct ProbeRow {
  DictionaryKind dictionary;
  int num_targets;
  int subspace_dim;
  int minimal_observations;  // -1 when the target rate is never reached
  double achieved_rate;
};

std::vector<ProbeRow> theorem_scaling_probe(const TheoremProbePlan& plan);

// Per-trial metrics of one sweep cell, deterministic in (seed, cell, trial).
std::vector<TrialMetrics> run_cell(const TrialConfig& config, int trials, std::uint64_t cell_seed);

}  // namespace lanm
