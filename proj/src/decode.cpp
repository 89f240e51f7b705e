#include "lanm/decode.hpp"

#include <stdexcept>

namespace lanm {

DecodeResult ls_decode(const Eigen::VectorXcd& y, const MeasurementEnsemble& ensemble,
                       const std::vector<std::vector<double>>& tau_hat, int qam_order,
                       int pilot_index) {
  const int k_hat = static_cast<int>(tau_hat.size());
  if (k_hat < 1) throw std::invalid_argument("ls_decode: need at least one shift estimate");
  const int l_obs = ensemble.observation_count();
  const int t_dim = static_cast<int>(ensemble.matrix(0).rows());
  if (y.size() != l_obs) throw std::invalid_argument("ls_decode: observation length mismatch");
  if (k_hat * t_dim > l_obs)
    throw std::invalid_argument("ls_decode: design is underdetermined (K T > observations)");

  // Column (k, t) = X(e_t a(tau_k)^H); entry m is conj((M_m a)_t).
  Eigen::MatrixXcd design(l_obs, k_hat * t_dim);
  for (int k = 0; k < k_hat; ++k) {
    const Eigen::VectorXcd a = steering_vector(ensemble.spec(), tau_hat[k]);
    for (int m = 0; m < l_obs; ++m) {
      const Eigen::VectorXcd col = (ensemble.matrix(m) * a).conjugate();
      design.block(m, k * t_dim, 1, t_dim) = col.transpose();
    }
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(design);
  if (qr.rank() < design.cols())
    throw std::runtime_error("ls_decode: rank-deficient design (shifts too close or K T too large)");
  const Eigen::VectorXcd g = qr.solve(y);

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(design);
  const double cond = svd.singularValues()(0) / svd.singularValues().tail<1>()(0);

  DecodeResult out;
  out.residual = (y - design * g).norm();
  out.design_condition = cond;
  out.targets.resize(k_hat);
  const Constellation& constellation = qam_constellation(qam_order);
  for (int k = 0; k < k_hat; ++k) {
    DecodedTarget& tgt = out.targets[k];
    tgt.tau = tau_hat[k];
    tgt.g = g.segment(k * t_dim, t_dim);
    const double mag = tgt.g.norm();
    if (mag == 0.0) {
      tgt.alpha_hat = 0.0;
      tgt.h_hat = Eigen::VectorXcd::Zero(t_dim);
      tgt.symbols.assign(t_dim, -1);
      continue;
    }
    Eigen::VectorXcd direction = tgt.g / mag;
    // The pilot entry pins the phase split between amplitude and symbols.
    const std::complex<double> pilot = direction[pilot_index];
    std::complex<double> rotation = 1.0;
    if (std::abs(pilot) > 1e-12) {
      const std::complex<double> ref = constellation.points[constellation.reference_index];
      rotation = (ref / pilot) / std::abs(ref / pilot);
    }
    tgt.h_hat = direction * rotation;
    tgt.alpha_hat = mag * std::conj(rotation);
    tgt.symbols = demap(tgt.h_hat, qam_order, pilot_index);
  }
  return out;
}

double evaluate_ser(const DecodeResult& decoded, const std::vector<SymbolStream>& truth,
                    const MatchResult& match) {
  if (truth.empty() && decoded.targets.empty()) return 0.0;
  const int t_dim = truth.empty() ? static_cast<int>(decoded.targets.front().symbols.size())
                                  : static_cast<int>(truth.front().indices.size());
  long errors = 0;
  long units = 0;
  for (const auto& [ti, ei] : match.pairs) {
    units += t_dim;
    const std::vector<int>& want = truth[ti].indices;
    const std::vector<int>& got = decoded.targets[ei].symbols;
    for (int t = 0; t < t_dim; ++t)
      if (want[t] != got[t]) ++errors;
  }
  const long unmatched = static_cast<long>(match.missed.size() + match.false_alarms.size());
  errors += unmatched * t_dim;
  units += unmatched * t_dim;
  return units == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(units);
}

}  // namespace lanm
