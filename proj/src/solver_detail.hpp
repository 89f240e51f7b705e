#pragma once

// Shared machinery for the two SDR solver paths. Internal header.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "lanm/solver.hpp"
#include "lanm/toeplitz.hpp"

namespace lanm::detail {

// Scaled working form of the SDR. The LMI block is preconditioned by the
// congruence diag(sqrt(c) I, I) with c = grid size, so the initial iterate
// (q=0, Q=I) sits at the identity; observations are normalized to unit norm.
struct SdrWork {
  const MeasurementEnsemble* ens = nullptr;
  RelaxationGrid grid;
  MultilevelDiagonals diags;
  std::vector<Eigen::MatrixXcd> mats;  // sqrt(c) * M_m embedded on the grid, T x Mp
  Eigen::MatrixXcd gram;               // Gram of the scaled mats, L x L
  Eigen::VectorXcd y;                  // y / ||y||
  double y_norm = 1.0;
  double sigma = 0.0;  // sigma / ||y||
  double c = 1.0;
  int L = 0, T = 0, Mp = 0;

  explicit SdrWork(const SdrProblem& problem);

  // F_scaled(q) = sum_m q_m mats[m]
  Eigen::MatrixXcd apply(const Eigen::VectorXcd& q) const;
  // r_m = <mats[m], C>
  Eigen::VectorXcd apply_adjoint(const Eigen::MatrixXcd& c_mat) const;

  Eigen::MatrixXcd block(const Eigen::MatrixXcd& q_mat, const Eigen::MatrixXcd& f_mat) const;

  double objective_scaled(const Eigen::VectorXcd& q) const {
    double v = (q.adjoint() * y)(0).real();
    if (sigma > 0.0) v -= sigma / 4.0 * q.norm();
    return v;
  }
};

// Eigendecomposition of a Hermitian matrix (ascending eigenvalues), LAPACK
// zheevd under the hood.
void hermitian_eig(const Eigen::MatrixXcd& a, Eigen::VectorXd& values, Eigen::MatrixXcd& vectors);

// Projection onto the PSD cone.
Eigen::MatrixXcd psd_project(const Eigen::MatrixXcd& a, double* min_eig = nullptr);

// PSD projection that tracks the negative eigenspace across nearby calls.
// The splitting iteration changes its matrix slowly, so a warm-started
// subspace iteration resolves the handful of negative eigenpairs at a
// fraction of a full eigendecomposition; a full solve runs periodically and
// whenever the Ritz residual is not tight.
class TrackedProjector {
 public:
  Eigen::MatrixXcd project(const Eigen::MatrixXcd& x);
  void invalidate() { basis_.resize(0, 0); }
  long full_solves() const { return full_solves_; }

 private:
  Eigen::MatrixXcd full(const Eigen::MatrixXcd& x);

  Eigen::MatrixXcd basis_;  // approx negative eigenspace plus buffer
  int since_full_ = 0;
  long full_solves_ = 0;
};

DualSolution solve_ipm(const SdrWork& work, double tol, int max_iters);
DualSolution solve_admm(const SdrWork& work, double tol, int max_iters);

// Newton direction of the barrier subproblem at (q, tsoc, qt); exposed for
// verification against a dense finite-difference KKT solve.
struct IpmDirection {
  Eigen::VectorXcd dq;
  double dtsoc = 0.0;
  Eigen::MatrixXcd dqt;
  double decrement2 = 0.0;
  double gdot = 0.0;
  bool ok = false;
};
IpmDirection ipm_newton_direction(const SdrWork& work, const Eigen::VectorXcd& q, double tsoc,
                                  const Eigen::MatrixXcd& qt, double t_path);

}  // namespace lanm::detail
