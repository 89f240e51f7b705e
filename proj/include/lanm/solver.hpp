#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "lanm/model.hpp"
#include "lanm/toeplitz.hpp"

namespace lanm {

struct SolverConfig {
  enum class Path { Auto, Ipm, FirstOrder };
  Path path = Path::Auto;
  // 0 selects the path default: 1e-8 duality gap for the interior-point path,
  // 1e-6 scaled residuals for the first-order path.
  double tol = 0.0;
  int max_iters = 0;  // 0 selects the path default
  std::vector<int> degrees;
  // Auto path switches to the first-order method above this relaxation size.
  int ipm_max_dim = 128;
};

const char* solver_path_name(SolverConfig::Path path);

enum class SolveStatus { Optimal, MaxIters, Failed };
const char* solve_status_name(SolveStatus status);

struct KktResiduals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

// Dual SDR: maximize <q, y>_R - (sigma/4) ||q||_2 subject to
//   [[Q, F^H], [F, I_T]] >= 0 with F = X*(q),
//   multilevel diagonal sums of Q equal to the Dirac at the zero offset.
struct SdrProblem {
  const MeasurementEnsemble* ensemble = nullptr;
  Eigen::VectorXcd y;
  double sigma = 0.0;
  std::vector<int> degrees;  // empty = minimal relaxation
};

SdrProblem build_noiseless_sdr(const Eigen::VectorXcd& y, const MeasurementEnsemble& ensemble);
SdrProblem build_noisy_sdr(const Eigen::VectorXcd& y, const MeasurementEnsemble& ensemble, double sigma);

struct DualSolution {
  Eigen::VectorXcd q;
  Eigen::MatrixXcd Q;  // relaxation grid, unscaled
  Eigen::MatrixXcd F;  // X*(q) on the atom grid (T x M)
  double objective = 0.0;
  SolveStatus status = SolveStatus::Failed;
  KktResiduals kkt;
  int iterations = 0;
  std::string path_used;
  // sup of ||F a(tau)||_2 over the 16x-oversampled grid after the final
  // feasibility rescale.
  double certificate_sup = 0.0;
};

DualSolution solve(const SdrProblem& problem, const SolverConfig& config = {});

}  // namespace lanm
