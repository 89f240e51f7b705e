#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "lanm/decode.hpp"
#include "lanm/scene.hpp"

namespace lanm {

enum class SnrReference { Unit, Signal };
const char* snr_reference_name(SnrReference ref);

struct NoisyObservation {
  Eigen::VectorXcd y;
  double sigma;          // 1.1x the realized noise norm, handed to the solver
  double noise_norm;     // actual ||w||_2
};

// AWGN with total power set by snr_db under the chosen reference convention.
// A non-finite snr_db means noiseless.
NoisyObservation add_awgn(const Eigen::VectorXcd& y, double snr_db, SnrReference ref,
                          std::uint64_t seed);

// Relative error of the reconstructed radar vector v = sum_k alpha_k a(tau_k)^H.
double nmse(const TargetScene& truth, const std::vector<DecodedTarget>& est);

// Relative Frobenius error of the lifted matrix; success at <= 1e-3.
double lift_error(const Eigen::MatrixXcd& truth, const Eigen::MatrixXcd& est);

inline constexpr double kSuccessThreshold = 1e-3;

struct TrialMetrics {
  double nmse = 1.0;
  double ser = 1.0;
  double lift_rel_error = 1.0;
  bool success = false;
  int k_hat = 0;
  double runtime_s = 0.0;
  bool solver_converged = false;
  double max_shift_error = 1.0;
  double objective = 0.0;
  std::string failure;  // nonempty when the trial aborted
};

}  // namespace lanm
