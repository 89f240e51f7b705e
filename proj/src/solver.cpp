#include "lanm/solver.hpp"

#include <stdexcept>

#include "lanm/dual_poly.hpp"
#include "solver_detail.hpp"

namespace lanm {

const char* solver_path_name(SolverConfig::Path path) {
  switch (path) {
    case SolverConfig::Path::Auto: return "auto";
    case SolverConfig::Path::Ipm: return "ipm";
    case SolverConfig::Path::FirstOrder: return "first-order";
  }
  return "?";
}

const char* solve_status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::MaxIters: return "max_iters";
    case SolveStatus::Failed: return "failed";
  }
  return "?";
}

SdrProblem build_noiseless_sdr(const Eigen::VectorXcd& y, const MeasurementEnsemble& ensemble) {
  if (y.size() != ensemble.observation_count())
    throw std::invalid_argument("build_noiseless_sdr: observation length mismatch");
  return SdrProblem{&ensemble, y, 0.0, {}};
}

SdrProblem build_noisy_sdr(const Eigen::VectorXcd& y, const MeasurementEnsemble& ensemble, double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("build_noisy_sdr: sigma must be nonnegative");
  SdrProblem p = build_noiseless_sdr(y, ensemble);
  p.sigma = sigma;
  return p;
}

DualSolution solve(const SdrProblem& problem, const SolverConfig& config) {
  if (!problem.ensemble) throw std::invalid_argument("solve: problem has no ensemble");
  SdrProblem staged = problem;
  if (staged.degrees.empty()) staged.degrees = config.degrees;
  detail::SdrWork work(staged);

  SolverConfig::Path path = config.path;
  if (path == SolverConfig::Path::Auto)
    path = work.Mp <= config.ipm_max_dim ? SolverConfig::Path::Ipm : SolverConfig::Path::FirstOrder;

  DualSolution sol;
  if (path == SolverConfig::Path::Ipm) {
    const double tol = config.tol > 0.0 ? config.tol : 1e-8;
    const int max_iters = config.max_iters > 0 ? config.max_iters : 400;
    sol = detail::solve_ipm(work, tol, max_iters);
  } else {
    const double tol = config.tol > 0.0 ? config.tol : 1e-6;
    const int max_iters = config.max_iters > 0 ? config.max_iters : 20000;
    sol = detail::solve_admm(work, tol, max_iters);
  }

  // Feasibility rescale: a first-order solve can overshoot the dual norm ball
  // by its residual tolerance. Shrinking q keeps the block LMI satisfiable
  // with the same Q (the trace constraints fix Q's diagonal sums).
  DualPolynomial poly{sol.F, problem.ensemble->spec()};
  const int oversample = problem.ensemble->spec().ndim() >= 4 ? 8 : 16;
  double sup = eval_grid(poly, oversample).max_value();
  if (sup > 1.0) {
    sol.q /= sup;
    sol.F /= sup;
    sol.objective = work.y_norm *
                    ((sol.q.adjoint() * work.y)(0).real() - work.sigma / 4.0 * sol.q.norm());
    sup = 1.0;
  }
  sol.certificate_sup = sup;
  return sol;
}

}  // namespace lanm
