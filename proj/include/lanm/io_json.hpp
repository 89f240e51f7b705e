#pragma once

#include <json.hpp>
#include <string>

#include "lanm/dictionary.hpp"
#include "lanm/harness.hpp"
#include "lanm/pipeline.hpp"
#include "lanm/scene.hpp"

namespace lanm {

using nlohmann::json;

// Complex numbers serialize as [re, im] pairs everywhere.
json to_json(const std::complex<double>& z);
std::complex<double> complex_from_json(const json& j);

json scene_to_json(const TargetScene& scene, std::uint64_t seed);
// Scene file: {dims, K, T, seed, targets:[{tau, alpha}]}; symbol vectors are
// regenerated from the seed so files stay small.
struct SceneFile {
  DimensionSpec spec;
  int num_targets;
  int subspace_dim;
  std::uint64_t seed;
  std::vector<TargetParams> targets;  // may be empty: draw from seed
};
SceneFile scene_from_json(const json& j);

json dictionary_to_json(const Dictionary& dict, bool include_matrix = false);
Dictionary dictionary_from_json(const json& j);

// Observation bundle: everything `solve` needs to reproduce the in-process
// pipeline bit for bit.
struct ObservationFile {
  SceneDraw truth;
  Dictionary dictionary;
  int qam_order;
  double snr_db;
  SnrReference snr_ref;
  double sigma;
  std::uint64_t seed;
  Eigen::VectorXcd y;
};
json observation_to_json(const ObservationFile& obs);
ObservationFile observation_from_json(const json& j);

json solution_to_json(const PipelineResult& result, bool include_q = true);

// Full-precision scientific formatting (17 significant digits).
std::string format_full(double v);

std::string snr_rows_to_csv(const std::vector<SnrSweepRow>& rows);
std::string phase_rows_to_csv(const std::vector<PhaseRow>& rows);
std::string probe_rows_to_csv(const std::vector<ProbeRow>& rows);
std::string trial_metrics_to_csv(const std::vector<TrialMetrics>& rows,
                                 const std::string& dims_label, int num_targets, int subspace_dim,
                                 int observations, DictionaryKind kind, double snr_db,
                                 std::uint64_t seed);
std::string grid_to_csv(const NormGrid& grid);

// Manifest written before the results file, then finalized with the wall time.
json make_manifest(const std::string& command, const json& plan, std::uint64_t seed,
                   const std::vector<std::string>& outputs);
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace lanm
