#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "solver_detail.hpp"

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace lanm::detail {

SdrWork::SdrWork(const SdrProblem& problem)
    : ens(problem.ensemble),
      grid(RelaxationGrid::with_degrees(problem.ensemble->spec(), problem.degrees)),
      diags(grid) {
  if (problem.y.size() != ens->observation_count())
    throw std::invalid_argument("SdrProblem: observation length mismatch");
  if (problem.sigma < 0.0) throw std::invalid_argument("SdrProblem: sigma must be nonnegative");

  L = ens->observation_count();
  T = static_cast<int>(ens->matrix(0).rows());
  Mp = grid.total;
  c = static_cast<double>(Mp);

  y_norm = problem.y.norm();
  if (y_norm == 0.0) y_norm = 1.0;
  y = problem.y / y_norm;
  sigma = problem.sigma / y_norm;

  const std::vector<int> embed = grid.embedding(ens->spec());
  const double root_c = std::sqrt(c);
  mats.reserve(L);
  for (int m = 0; m < L; ++m) {
    const Eigen::MatrixXcd& src = ens->matrix(m);
    Eigen::MatrixXcd dst = Eigen::MatrixXcd::Zero(T, Mp);
    for (int col = 0; col < src.cols(); ++col) dst.col(embed[col]) = root_c * src.col(col);
    mats.push_back(std::move(dst));
  }
  gram = c * ens->gram();
}

Eigen::MatrixXcd SdrWork::apply(const Eigen::VectorXcd& q) const {
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(T, Mp);
  for (int m = 0; m < L; ++m) f.noalias() += q[m] * mats[m];
  return f;
}

Eigen::VectorXcd SdrWork::apply_adjoint(const Eigen::MatrixXcd& c_mat) const {
  Eigen::VectorXcd r(L);
  for (int m = 0; m < L; ++m) r[m] = (mats[m].conjugate().array() * c_mat.array()).sum();
  return r;
}

Eigen::MatrixXcd SdrWork::block(const Eigen::MatrixXcd& q_mat, const Eigen::MatrixXcd& f_mat) const {
  Eigen::MatrixXcd s(Mp + T, Mp + T);
  s.topLeftCorner(Mp, Mp) = q_mat;
  s.topRightCorner(Mp, T) = f_mat.adjoint();
  s.bottomLeftCorner(T, Mp) = f_mat;
  s.bottomRightCorner(T, T) = Eigen::MatrixXcd::Identity(T, T);
  return s;
}

void hermitian_eig(const Eigen::MatrixXcd& a, Eigen::VectorXd& values, Eigen::MatrixXcd& vectors) {
  const int n = static_cast<int>(a.rows());
  vectors = a;
  values.resize(n);
  const int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, vectors.data(), n, values.data());
  if (info != 0) {
    // Rare zheevd failure: fall back to Eigen's QR iteration.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
    if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: eigendecomposition failed");
    values = es.eigenvalues();
    vectors = es.eigenvectors();
  }
}

Eigen::MatrixXcd psd_project(const Eigen::MatrixXcd& a, double* min_eig) {
  Eigen::VectorXd w;
  Eigen::MatrixXcd v;
  hermitian_eig(a, w, v);
  if (min_eig) *min_eig = w.minCoeff();
  Eigen::VectorXd wp = w.cwiseMax(0.0);
  return v * wp.asDiagonal() * v.adjoint();
}

Eigen::MatrixXcd TrackedProjector::full(const Eigen::MatrixXcd& x) {
  ++full_solves_;
  since_full_ = 0;
  Eigen::VectorXd w;
  Eigen::MatrixXcd v;
  hermitian_eig(x, w, v);
  const int n = static_cast<int>(w.size());
  int neg = 0;
  while (neg < n && w[neg] < 0.0) ++neg;
  if (std::getenv("LANM_PROJ_TRACE")) std::fprintf(stderr, "    full eig: neg=%d\n", neg);
  const int keep = std::min(n, neg + 3);
  basis_ = v.leftCols(keep);
  // Rebuild from whichever spectral side is smaller.
  if (neg <= n / 2) {
    Eigen::MatrixXcd out = x;
    if (neg > 0)
      out.noalias() -= v.leftCols(neg) * w.head(neg).asDiagonal() * v.leftCols(neg).adjoint();
    return 0.5 * (out + out.adjoint());
  }
  const int pos = n - neg;
  if (pos == 0) return Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd out =
      v.rightCols(pos) * w.tail(pos).asDiagonal() * v.rightCols(pos).adjoint();
  return 0.5 * (out + out.adjoint());
}

Eigen::MatrixXcd TrackedProjector::project(const Eigen::MatrixXcd& x) {
  const int n = static_cast<int>(x.rows());
  const int k = static_cast<int>(basis_.cols());
  if (k == 0 || k >= n / 2 || ++since_full_ >= 50) return full(x);

  // Gershgorin upper bound keeps the shifted operator positive.
  double gamma = 0.0;
  for (int i = 0; i < n; ++i) gamma = std::max(gamma, x.row(i).cwiseAbs().sum());

  Eigen::MatrixXcd v = basis_;
  for (int sweep = 0; sweep < 2; ++sweep) {
    Eigen::MatrixXcd y = gamma * v - x * v;
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(y);
    v = qr.householderQ() * Eigen::MatrixXcd::Identity(n, static_cast<int>(v.cols()));
  }
  const Eigen::MatrixXcd xv = x * v;
  const Eigen::MatrixXcd small = v.adjoint() * xv;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (small + small.adjoint()));
  const Eigen::VectorXd theta = es.eigenvalues();
  v = v * es.eigenvectors();

  int neg = 0;
  while (neg < theta.size() && theta[neg] < 0.0) ++neg;
  // All tracked directions negative means the buffer may be hiding more.
  if (neg == theta.size()) return full(x);

  // Ritz residual must be at rounding level for the projection to be exact.
  const Eigen::MatrixXcd resid = x * v.leftCols(std::max(neg, 1)) -
                                 v.leftCols(std::max(neg, 1)) *
                                     theta.head(std::max(neg, 1)).asDiagonal();
  if (resid.norm() > 1e-9 * std::max(1.0, gamma)) return full(x);

  basis_ = v;
  Eigen::MatrixXcd out = x;
  if (neg > 0)
    out.noalias() -= v.leftCols(neg) * theta.head(neg).asDiagonal() * v.leftCols(neg).adjoint();
  return 0.5 * (out + out.adjoint());
}

}  // namespace lanm::detail
