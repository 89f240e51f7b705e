#include "lanm/scene.hpp"

#include <limits>
#include <stdexcept>

namespace lanm {

double TargetScene::min_separation() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < targets.size(); ++i)
    for (std::size_t j = i + 1; j < targets.size(); ++j)
      best = std::min(best, wrap_max_dist(targets[i].tau, targets[j].tau));
  return best;
}

void TargetScene::validate() const {
  const int ndim = config.spec.ndim();
  if (static_cast<int>(targets.size()) != config.num_targets)
    throw std::invalid_argument("TargetScene: target count does not match K");
  if (static_cast<int>(symbols.size()) != config.num_targets)
    throw std::invalid_argument("TargetScene: symbol vector count does not match K");
  for (const TargetParams& t : targets) {
    if (static_cast<int>(t.tau.size()) != ndim)
      throw std::invalid_argument("TargetScene: shift rank does not match active dimensions");
    for (double x : t.tau)
      if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("TargetScene: shifts must lie in [0,1)");
    if (std::abs(t.alpha) == 0.0) throw std::invalid_argument("TargetScene: live target needs alpha != 0");
  }
  for (const Eigen::VectorXcd& h : symbols) {
    if (h.size() != config.subspace_dim)
      throw std::invalid_argument("TargetScene: symbol vector length does not match T");
    if (std::abs(h.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("TargetScene: symbol vectors must have unit norm");
  }
}

}  // namespace lanm
