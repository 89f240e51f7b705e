#include "lanm/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "lanm/model.hpp"
#include "lanm/rng.hpp"

namespace lanm {

const char* snr_reference_name(SnrReference ref) {
  return ref == SnrReference::Unit ? "unit" : "signal";
}

NoisyObservation add_awgn(const Eigen::VectorXcd& y, double snr_db, SnrReference ref,
                          std::uint64_t seed) {
  NoisyObservation out{y, 0.0, 0.0};
  if (!std::isfinite(snr_db)) return out;

  const double base = ref == SnrReference::Unit ? 1.0 : y.squaredNorm();
  const double total_power = base * std::pow(10.0, -snr_db / 10.0);
  const double per_sample = total_power / static_cast<double>(y.size());
  const double scale = std::sqrt(per_sample);

  Rng rng(splitmix64(seed));
  Eigen::VectorXcd w(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) w[i] = scale * rng.cnormal();

  out.y = y + w;
  out.noise_norm = w.norm();
  out.sigma = 1.1 * out.noise_norm;  // the bound handed to the sigma/4 penalty
  return out;
}

double nmse(const TargetScene& truth, const std::vector<DecodedTarget>& est) {
  const DimensionSpec& spec = truth.config.spec;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(spec.atom_len());
  for (int k = 0; k < truth.config.num_targets; ++k)
    v += truth.targets[k].alpha * steering_vector(spec, truth.targets[k].tau).conjugate();
  if (v.norm() == 0.0) throw std::invalid_argument("nmse: zero truth vector");

  Eigen::VectorXcd v_hat = Eigen::VectorXcd::Zero(spec.atom_len());
  for (const DecodedTarget& t : est)
    v_hat += t.alpha_hat * steering_vector(spec, t.tau).conjugate();
  return (v - v_hat).norm() / v.norm();
}

double lift_error(const Eigen::MatrixXcd& truth, const Eigen::MatrixXcd& est) {
  if (truth.rows() != est.rows() || truth.cols() != est.cols())
    throw std::invalid_argument("lift_error: shape mismatch");
  const double denom = truth.norm();
  if (denom == 0.0) throw std::invalid_argument("lift_error: zero truth matrix");
  return (truth - est).norm() / denom;
}

}  // namespace lanm
