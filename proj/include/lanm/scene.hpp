#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "lanm/dims.hpp"

namespace lanm {

// One target: normalized shift coordinates on the torus, one per active
// dimension in canonical order, plus a complex amplitude. The global phase of
// the reflection is absorbed into alpha.
struct TargetParams {
  std::vector<double> tau;
  std::complex<double> alpha;
};

struct SceneConfig {
  DimensionSpec spec;
  int num_targets;   // K
  int subspace_dim;  // T
};

struct TargetScene {
  SceneConfig config;
  std::vector<TargetParams> targets;
  std::vector<Eigen::VectorXcd> symbols;  // unit-norm h_k, one per target

  // Min over target pairs of the max-over-coordinates wrap-around distance.
  // +inf for fewer than two targets.
  double min_separation() const;

  // Shift ranges, alpha != 0, unit symbol norms, rank agreement.
  void validate() const;
};

}  // namespace lanm
