#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lanm/dictionary.hpp"
#include "lanm/dims.hpp"
#include "lanm/scene.hpp"

namespace lanm {

// Normalized Dirichlet kernel D_N(t) = sin((2N+1) pi t) / ((2N+1) sin(pi t)),
// total on [0,1) with D_N(0) = 1.
double dirichlet_kernel(double t, int n_half);

// Atom vector a(tau): Kronecker product of per-dimension exponential factors
// in canonical order. Angle axes contribute e^{+i2pi k tau}, delay

// e^{-i2pi j tau}, doppler e^{+i2pi p tau}; all entries unit modulus.
Eigen::VectorXcd steering_vector(const DimensionSpec& spec, const std::vector<double>& tau);

// U = sum_k alpha_k h_k a(tau_k)^H, the lifted unknown.
Eigen::MatrixXcd build_lifted(const TargetScene& scene);

// Explicit realization of the linear map y = X(U) as a list of T x M matrices
// with y_m = tr(M_m^H U). One observation per (receive antenna, transmit slot,
// slow-time period, fast-time sample) combination over the active dimensions,
// so the observation count equals the atom length.
//
// Delay-only mode observes the frequency coefficients directly
// (y_j = sum_k alpha_k e^{-i2pi j tau_k} d_j^H h_k). Modes with doppler or
// angle axes observe time-domain samples; the delay axis then enters through
// the fast-time DFT kernel.
class MeasurementEnsemble {
 public:
  MeasurementEnsemble(DimensionSpec spec, Dictionary dict);

  int observation_count() const { return static_cast<int>(mats_.size()); }
  const DimensionSpec& spec() const { return spec_; }
  const Dictionary& dictionary() const { return dict_; }
  const Eigen::MatrixXcd& matrix(int m) const { return mats_[m]; }

  Eigen::VectorXcd forward(const Eigen::MatrixXcd& lifted) const;
  Eigen::MatrixXcd adjoint(const Eigen::VectorXcd& q) const;

  // Gram matrix G_{mm'} = <M_m, M_m'>, cached after the first request.
  const Eigen::MatrixXcd& gram() const;

 private:
  DimensionSpec spec_;
  Dictionary dict_;
  std::vector<Eigen::MatrixXcd> mats_;
  mutable Eigen::MatrixXcd gram_;
  mutable bool gram_ready_ = false;
};

MeasurementEnsemble build_measurement_ensemble(const DimensionSpec& spec, const Dictionary& dict);

// Time samples of each target's transmit waveform: column k holds
// x_k[u] = sum_j (D h_k)_j e^{+i2pi j u / L}, u = 0..L-1.
Eigen::MatrixXcd waveform_time_samples(const Dictionary& dict, const std::vector<Eigen::VectorXcd>& symbols);

// Direct time-domain evaluation of the received samples: circular delays via
// Dirichlet-kernel interpolation of the waveform samples, per-period doppler
// modulation and per-antenna/per-slot angle phases. Serves as the independent
// oracle for forward(build_lifted(scene)); the delay-only mode applies the
// receiver DFT so the two observation vectors agree entry by entry.
Eigen::VectorXcd simulate_time_domain(const TargetScene& scene, const Eigen::MatrixXcd& waveform_samples);

}  // namespace lanm
