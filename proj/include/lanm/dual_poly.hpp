#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lanm/dims.hpp"

namespace lanm {

// Vector-valued trigonometric polynomial f(tau) = F a(tau). A valid dual
// certificate has ||f(tau)||_2 <= 1 everywhere with equality at the targets.
struct DualPolynomial {
  Eigen::MatrixXcd coeff;  // T x M
  DimensionSpec spec;

  Eigen::VectorXcd value(const std::vector<double>& tau) const;
  double norm_at(const std::vector<double>& tau) const;
};

// ||f|| evaluated on the uniform grid with oversample * size points per
// dimension, via zero-padded fast transforms of the coefficient rows.
// Values are laid out row-major in canonical dimension order.
struct NormGrid {
  std::vector<int> sizes;
  std::vector<double> values;

  int total() const;
  double max_value() const;
  std::vector<double> tau_at(int flat) const;
};

NormGrid eval_grid(const DualPolynomial& poly, int oversample);

struct Peak {
  std::vector<double> tau;
  double height;
  bool refined_converged = true;
};

struct PeakSet {
  std::vector<Peak> peaks;
  int count() const { return static_cast<int>(peaks.size()); }
};

// Local maxima of the grid above threshold, greedily merged within
// merge_radius (max-coordinate wrap-around metric), highest kept.
PeakSet find_peaks(const NormGrid& grid, double threshold, double merge_radius);

// Damped Newton ascent of ||f(tau)||^2 on the torus; never decreases the
// objective, falls back to gradient steps when the Hessian is not negative
// definite.
Peak refine_peak(const DualPolynomial& poly, const std::vector<double>& tau0);

}  // namespace lanm
