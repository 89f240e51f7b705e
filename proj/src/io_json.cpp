#include "lanm/io_json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lanm {

namespace {

json vector_to_json(const Eigen::VectorXcd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back({v[i].real(), v[i].imag()});
  return arr;
}

Eigen::VectorXcd vector_from_json(const json& arr) {
  Eigen::VectorXcd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v[i] = complex_from_json(arr[i]);
  return v;
}

DimensionSpec dims_from_json(const json& arr) {
  std::vector<Dim> dims;
  for (const json& d : arr) {
    const auto axis = axis_from_name(d.at("name").get<std::string>());
    if (!axis) throw std::invalid_argument("unknown dimension name: " + d.at("name").get<std::string>());
    dims.push_back({*axis, d.at("size").get<int>()});
  }
  return DimensionSpec{dims};
}

json dims_to_json(const DimensionSpec& spec) {
  json arr = json::array();
  for (const Dim& d : spec.dims()) arr.push_back({{"name", axis_name(d.axis)}, {"size", d.size}});
  return arr;
}

}  // namespace

json to_json(const std::complex<double>& z) { return json::array({z.real(), z.imag()}); }

std::complex<double> complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("complex values are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json scene_to_json(const TargetScene& scene, std::uint64_t seed) {
  json targets = json::array();
  for (const TargetParams& t : scene.targets)
    targets.push_back({{"tau", t.tau}, {"alpha", to_json(t.alpha)}});
  return json{{"dims", dims_to_json(scene.config.spec)},
              {"K", scene.config.num_targets},
              {"T", scene.config.subspace_dim},
              {"seed", seed},
              {"targets", targets}};
}

SceneFile scene_from_json(const json& j) {
  SceneFile f{dims_from_json(j.at("dims")), j.at("K").get<int>(), j.at("T").get<int>(),
              j.at("seed").get<std::uint64_t>(), {}};
  if (j.contains("targets"))
    for (const json& t : j.at("targets")) {
      TargetParams p;
      p.tau = t.at("tau").get<std::vector<double>>();
      p.alpha = complex_from_json(t.at("alpha"));
      f.targets.push_back(std::move(p));
    }
  return f;
}

json dictionary_to_json(const Dictionary& dict, bool include_matrix) {
  json j{{"kind", dictionary_kind_name(dict.kind)},
         {"rows", dict.rows()},
         {"cols", dict.cols()},
         {"seed", dict.seed},
         {"mu", dict.mu}};
  if (include_matrix) {
    json rows = json::array();
    for (int r = 0; r < dict.rows(); ++r) rows.push_back(vector_to_json(dict.matrix.row(r)));
    j["matrix"] = rows;
  }
  return j;
}

Dictionary dictionary_from_json(const json& j) {
  const auto kind = dictionary_kind_from_name(j.at("kind").get<std::string>());
  if (!kind) throw std::invalid_argument("unknown dictionary kind");
  return gen_dictionary(*kind, j.at("rows").get<int>(), j.at("cols").get<int>(),
                        j.at("seed").get<std::uint64_t>());
}

json observation_to_json(const ObservationFile& obs) {
  json streams = json::array();
  for (const SymbolStream& s : obs.truth.streams)
    streams.push_back({{"order", s.order}, {"pilot_index", s.pilot_index}, {"indices", s.indices}});
  return json{{"scene", scene_to_json(obs.truth.scene, obs.seed)},
              {"streams", streams},
              {"dictionary", dictionary_to_json(obs.dictionary)},
              {"qam", obs.qam_order},
              {"snr_db", std::isfinite(obs.snr_db) ? json(obs.snr_db) : json(nullptr)},
              {"snr_ref", snr_reference_name(obs.snr_ref)},
              {"sigma", obs.sigma},
              {"seed", obs.seed},
              {"y", vector_to_json(obs.y)}};
}

ObservationFile observation_from_json(const json& j) {
  ObservationFile obs;
  const SceneFile sf = scene_from_json(j.at("scene"));
  obs.qam_order = j.at("qam").get<int>();
  obs.seed = j.at("seed").get<std::uint64_t>();
  obs.snr_db = j.at("snr_db").is_null() ? std::numeric_limits<double>::infinity()
                                        : j.at("snr_db").get<double>();
  obs.snr_ref = j.at("snr_ref").get<std::string>() == "unit" ? SnrReference::Unit
                                                             : SnrReference::Signal;
  obs.sigma = j.at("sigma").get<double>();
  obs.dictionary = dictionary_from_json(j.at("dictionary"));
  obs.y = vector_from_json(j.at("y"));

  obs.truth.scene.config = SceneConfig{sf.spec, sf.num_targets, sf.subspace_dim};
  obs.truth.scene.targets = sf.targets;
  for (const json& s : j.at("streams")) {
    SymbolStream stream;
    stream.order = s.at("order").get<int>();
    stream.pilot_index = s.at("pilot_index").get<int>();
    stream.indices = s.at("indices").get<std::vector<int>>();
    const Constellation& c = qam_constellation(stream.order);
    stream.raw.resize(static_cast<Eigen::Index>(stream.indices.size()));
    for (std::size_t t = 0; t < stream.indices.size(); ++t)
      stream.raw[static_cast<Eigen::Index>(t)] = c.points[stream.indices[t]];
    stream.h = stream.raw / stream.raw.norm();
    obs.truth.streams.push_back(std::move(stream));
    obs.truth.scene.symbols.push_back(obs.truth.streams.back().h);
  }
  obs.truth.scene.validate();
  return obs;
}

json solution_to_json(const PipelineResult& result, bool include_q) {
  json peaks = json::array();
  for (const Peak& p : result.peaks.peaks)
    peaks.push_back({{"tau", p.tau}, {"height", p.height}, {"converged", p.refined_converged}});
  json decode = json::array();
  for (const DecodedTarget& t : result.decode.targets)
    decode.push_back({{"tau", t.tau},
                      {"alpha_hat", to_json(t.alpha_hat)},
                      {"symbols", t.symbols}});
  json j{{"objective", result.solution.objective},
         {"status", solve_status_name(result.solution.status)},
         {"path", result.solution.path_used},
         {"iterations", result.solution.iterations},
         {"kkt",
          {{"primal", result.solution.kkt.primal},
           {"dual", result.solution.kkt.dual},
           {"gap", result.solution.kkt.gap}}},
         {"certificate_sup", result.solution.certificate_sup},
         {"peaks", peaks},
         {"decode", decode},
         {"ls_residual", result.decode.residual},
         {"design_condition", result.decode.design_condition},
         {"metrics",
          {{"nmse", result.metrics.nmse},
           {"ser", result.metrics.ser},
           {"lift_rel_error", result.metrics.lift_rel_error},
           {"success", result.metrics.success},
           {"k_hat", result.metrics.k_hat},
           {"max_shift_error", result.metrics.max_shift_error}}}};
  if (include_q) j["q"] = vector_to_json(result.solution.q);
  return j;
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

std::string snr_rows_to_csv(const std::vector<SnrSweepRow>& rows) {
  std::ostringstream out;
  out << "dictionary,snr_db,qam,trials,mean_nmse,mean_ser,success_rate,failures\n";
  for (const SnrSweepRow& r : rows)
    out << dictionary_kind_name(r.dictionary) << ',' << format_full(r.snr_db) << ',' << r.qam_order
        << ',' << r.trials << ',' << format_full(r.mean_nmse) << ',' << format_full(r.mean_ser)
        << ',' << format_full(r.success_rate) << ',' << r.failures << '\n';
  return out.str();
}

std::string phase_rows_to_csv(const std::vector<PhaseRow>& rows) {
  std::ostringstream out;
  out << "dictionary,observations,K,T,trials,success_rate,mean_lift_error,failures\n";
  for (const PhaseRow& r : rows)
    out << dictionary_kind_name(r.dictionary) << ',' << r.observations << ',' << r.num_targets
        << ',' << r.subspace_dim << ',' << r.trials << ',' << format_full(r.success_rate) << ','
        << format_full(r.mean_lift_error) << ',' << r.failures << '\n';
  return out.str();
}

std::string probe_rows_to_csv(const std::vector<ProbeRow>& rows) {
  std::ostringstream out;
  out << "dictionary,K,T,minimal_observations,achieved_rate\n";
  for (const ProbeRow& r : rows)
    out << dictionary_kind_name(r.dictionary) << ',' << r.num_targets << ',' << r.subspace_dim
        << ',' << r.minimal_observations << ',' << format_full(r.achieved_rate) << '\n';
  return out.str();
}

std::string trial_metrics_to_csv(const std::vector<TrialMetrics>& rows,
                                 const std::string& dims_label, int num_targets, int subspace_dim,
                                 int observations, DictionaryKind kind, double snr_db,
                                 std::uint64_t seed) {
  std::ostringstream out;
  out << "trial,seed,dims,K,T,L_obs,dictionary,snr_db,nmse,ser,lift_rel_error,success,k_hat\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const TrialMetrics& m = rows[i];
    out << i << ',' << seed << ',' << dims_label << ',' << num_targets << ',' << subspace_dim
        << ',' << observations << ',' << dictionary_kind_name(kind) << ',' << format_full(snr_db)
        << ',' << format_full(m.nmse) << ',' << format_full(m.ser) << ','
        << format_full(m.lift_rel_error) << ',' << (m.success ? 1 : 0) << ',' << m.k_hat << '\n';
  }
  return out.str();
}

std::string grid_to_csv(const NormGrid& grid) {
  std::ostringstream out;
  for (std::size_t d = 0; d < grid.sizes.size(); ++d) out << "tau" << d << ',';
  out << "norm\n";
  for (int flat = 0; flat < grid.total(); ++flat) {
    const std::vector<double> tau = grid.tau_at(flat);
    for (double t : tau) out << format_full(t) << ',';
    out << format_full(grid.values[flat]) << '\n';
  }
  return out.str();
}

json make_manifest(const std::string& command, const json& plan, std::uint64_t seed,
                   const std::vector<std::string>& outputs) {
  // FNV-1a over the canonical plan dump.
  const std::string dump = plan.dump();
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : dump) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char hex[20];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
  return json{{"command", command},
              {"plan_hash", hex},
              {"seed", seed},
              {"artifact_version", "0.1.0"},
              {"wall_time_s", nullptr},
              {"outputs", outputs}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace lanm
