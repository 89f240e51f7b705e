#include <cmath>
#include <stdexcept>

#include "solver_detail.hpp"

namespace lanm::detail {

namespace {

Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& a) { return 0.5 * (a + a.adjoint()); }

struct LambdaLayout {
  std::vector<int> start;
  int size = 0;
};

LambdaLayout lambda_layout(const MultilevelDiagonals& diags) {
  LambdaLayout layout;
  layout.start.resize(diags.count());
  for (int i = 0; i < diags.count(); ++i) {
    layout.start[i] = layout.size;
    layout.size += (i == diags.zero_index()) ? 1 : 2;
  }
  return layout;
}

}  // namespace

// Newton direction for min t_path * f0(q, tsoc) + Phi(q, tsoc, Q) subject to
// the trace constraints on Q. Q is eliminated through the closed-form inverse
// of its barrier Hessian dQ -> P11 dQ P11; the remaining dense symmetric
// system couples the 2L real q coordinates, the SOC variable and the
// constraint multipliers.
IpmDirection ipm_newton_direction(const SdrWork& work, const Eigen::VectorXcd& q, double tsoc,
                                  const Eigen::MatrixXcd& qt, double t_path) {
  IpmDirection out;
  const int L = work.L, T = work.T, Mp = work.Mp;
  const bool soc = work.sigma > 0.0;
  const MultilevelDiagonals& diags = work.diags;
  const int ncan = diags.count();
  const int zero = diags.zero_index();
  const LambdaLayout layout = lambda_layout(diags);
  const int nq = 2 * L;
  const int lam_base = nq + (soc ? 1 : 0);
  const int dim = lam_base + layout.size;

  const Eigen::MatrixXcd s = work.block(qt, work.apply(q));
  Eigen::LLT<Eigen::MatrixXcd> llt(s);
  if (llt.info() != Eigen::Success) return out;
  const Eigen::MatrixXcd p = llt.solve(Eigen::MatrixXcd::Identity(s.rows(), s.cols()));
  const Eigen::MatrixXcd p11 = p.topLeftCorner(Mp, Mp);
  const Eigen::MatrixXcd p12 = p.topRightCorner(Mp, T);
  const Eigen::MatrixXcd p21 = p.bottomLeftCorner(T, Mp);
  const Eigen::MatrixXcd p22 = p.bottomRightCorner(T, T);

  Eigen::LLT<Eigen::MatrixXcd> p11_llt(p11);
  if (p11_llt.info() != Eigen::Success) return out;
  const Eigen::MatrixXcd r = p11_llt.solve(Eigen::MatrixXcd::Identity(Mp, Mp));
  const Eigen::MatrixXcd e = r * p12;  // Mp x T
  const Eigen::MatrixXcd z = p21 * e;  // T x T Hermitian

  std::vector<Eigen::MatrixXcd> ghat(L);
  Eigen::VectorXcd pg(L), z1(L);
  Eigen::MatrixXcd s_can(ncan, L), s_mir(ncan, L);
  for (int m = 0; m < L; ++m) {
    const Eigen::MatrixXcd& g = work.mats[m];
    ghat[m].noalias() = g * p11;
    pg[m] = (g * p12).trace();
    z1[m] = (g.conjugate().array() * p21.array()).sum();
    const Eigen::MatrixXcd eg = e * g;
    s_can.col(m) = diags.sums_canonical(eg);
    s_mir.col(m) = diags.sums_mirrored(eg);
  }

  Eigen::VectorXd xq(nq);
  for (int m = 0; m < L; ++m) {
    xq[m] = q[m].real();
    xq[L + m] = q[m].imag();
  }
  const double soc_d = soc ? tsoc * tsoc - xq.squaredNorm() : 0.0;
  if (soc && (tsoc <= 0.0 || soc_d <= 0.0)) return out;

  Eigen::VectorXd grad_q(nq);
  for (int m = 0; m < L; ++m) {
    grad_q[m] = -t_path * work.y[m].real() - 2.0 * z1[m].real();
    grad_q[L + m] = -t_path * work.y[m].imag() - 2.0 * z1[m].imag();
  }
  if (soc) grad_q += 2.0 / soc_d * xq;
  const double grad_t = soc ? (t_path * work.sigma / 4.0 - 2.0 * tsoc / soc_d) : 0.0;

  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);

  for (int m = 0; m < L; ++m) {
    for (int m2 = m; m2 < L; ++m2) {
      const std::complex<double> k1 = ((ghat[m2] * work.mats[m].adjoint()) * p22).trace();
      const std::complex<double> k2 = (z * (ghat[m] * work.mats[m2].adjoint())).trace();
      const double rr = 2.0 * (k1 - k2).real();
      const double ri = -2.0 * (k1 + k2).imag();
      const double ir = 2.0 * (k1 + k2).imag();
      const double ii = 2.0 * (k1 - k2).real();
      sys(m, m2) += rr;
      sys(m, L + m2) += ri;
      sys(L + m, m2) += ir;
      sys(L + m, L + m2) += ii;
      if (m2 != m) {
        sys(m2, m) += rr;
        sys(L + m2, m) += ri;
        sys(m2, L + m) += ir;
        sys(L + m2, L + m) += ii;
      }
    }
  }

  for (int m = 0; m < L; ++m) {
    for (int i = 0; i < ncan; ++i) {
      const std::complex<double> sc = s_can(i, m);
      const std::complex<double> sm = s_mir(i, m);
      const int col = lam_base + layout.start[i];
      if (i == zero) {
        const double cr = -2.0 * sc.real();
        const double ci = 2.0 * sc.imag();
        sys(m, col) += cr;
        sys(L + m, col) += ci;
        sys(col, m) += cr;
        sys(col, L + m) += ci;
      } else {
        const double a_re = -2.0 * (sm + sc).real();
        const double a_im = 2.0 * (sm + sc).imag();
        const double b_re = 2.0 * (sm - sc).imag();
        const double b_im = 2.0 * (sm - sc).real();
        sys(m, col) += a_re;
        sys(L + m, col) += a_im;
        sys(m, col + 1) += b_re;
        sys(L + m, col + 1) += b_im;
        sys(col, m) += a_re;
        sys(col, L + m) += a_im;
        sys(col + 1, m) += b_re;
        sys(col + 1, L + m) += b_im;
      }
    }
  }

  {
    const auto& dl = diags.diagonals();
    Eigen::MatrixXcd u1 = Eigen::MatrixXcd::Zero(ncan, ncan);
    Eigen::MatrixXcd u2 = Eigen::MatrixXcd::Zero(ncan, ncan);
    for (int o = 0; o < ncan; ++o)
      for (const auto& [a, b] : dl[o].cells)
        for (int o2 = 0; o2 < ncan; ++o2)
          for (const auto& [c, d] : dl[o2].cells) {
            u1(o, o2) += r(a, c) * r(d, b);
            u2(o, o2) += r(a, d) * r(c, b);
          }
    for (int o = 0; o < ncan; ++o) {
      const int row = lam_base + layout.start[o];
      // The zero-offset constraint carries one real degree of freedom, so its
      // row is scaled by -1 where the conjugate-pair rows take -2.
      const double scale = (o == zero) ? -1.0 : -2.0;
      for (int o2 = 0; o2 < ncan; ++o2) {
        const int col = lam_base + layout.start[o2];
        if (o2 == zero) {
          const std::complex<double> v = u1(o, o2);
          sys(row, col) += scale * v.real();
          if (o != zero) sys(row + 1, col) += scale * v.imag();
        } else {
          const std::complex<double> plus = u1(o, o2) + u2(o, o2);
          const std::complex<double> minus = u1(o, o2) - u2(o, o2);
          sys(row, col) += scale * plus.real();
          sys(row, col + 1) += -scale * minus.imag();
          if (o != zero) {
            sys(row + 1, col) += scale * plus.imag();
            sys(row + 1, col + 1) += scale * minus.real();
          }
        }
      }
    }
  }

  if (soc) {
    Eigen::VectorXd u(nq + 1);
    u.head(nq) = -xq;
    u[nq] = tsoc;
    const double a4 = 4.0 / (soc_d * soc_d);
    const double a2 = 2.0 / soc_d;
    for (int i = 0; i <= nq; ++i) {
      for (int j = 0; j <= nq; ++j) sys(i, j) += a4 * u[i] * u[j];
      sys(i, i) += (i < nq) ? a2 : -a2;
    }
  }

  for (int i = 0; i < nq; ++i) sys(i, i) += 1e-12;

  for (int m = 0; m < L; ++m) {
    rhs[m] = -grad_q[m] - 2.0 * pg[m].real();
    rhs[L + m] = -grad_q[L + m] + 2.0 * pg[m].imag();
  }
  if (soc) rhs[nq] = -grad_t;
  const Eigen::VectorXcd ds_r = diags.sums_canonical(r);
  for (int o = 0; o < ncan; ++o) {
    const int row = lam_base + layout.start[o];
    const double scale = (o == zero) ? -1.0 : -2.0;
    rhs[row] = scale * ds_r[o].real();
    if (o != zero) rhs[row + 1] = scale * ds_r[o].imag();
  }

  const Eigen::VectorXd sol = Eigen::PartialPivLU<Eigen::MatrixXd>(sys).solve(rhs);
  if (!sol.allFinite()) return out;

  out.dq.resize(L);
  for (int m = 0; m < L; ++m) out.dq[m] = {sol[m], sol[L + m]};
  out.dtsoc = soc ? sol[nq] : 0.0;
  Eigen::VectorXcd lam = Eigen::VectorXcd::Zero(ncan);
  for (int o = 0; o < ncan; ++o) {
    const int row = lam_base + layout.start[o];
    lam[o] = (o == zero) ? std::complex<double>(sol[row], 0.0)
                         : std::complex<double>(sol[row], sol[row + 1]);
  }
  const Eigen::MatrixXcd gd = work.apply(out.dq);
  out.dqt = hermitize(r - r * diags.adjoint(lam) * r - e * gd - gd.adjoint() * e.adjoint());

  double gdot = grad_q.dot(sol.head(nq));
  if (soc) gdot += grad_t * out.dtsoc;
  gdot += -(p11.conjugate().array() * out.dqt.array()).sum().real();
  out.gdot = gdot;
  out.decrement2 = -gdot;
  out.ok = true;
  return out;
}

namespace {

class Ipm {
 public:
  Ipm(const SdrWork& work, double tol, int max_iters)
      : w_(work), tol_(tol), max_iters_(max_iters), soc_(work.sigma > 0.0) {
    nu_ = static_cast<double>(w_.Mp + w_.T) + (soc_ ? 2.0 : 0.0);
  }

  DualSolution run();

 private:
  struct Cursor {
    Eigen::VectorXcd q;
    double tsoc;
    Eigen::MatrixXcd qt;
  };

  enum class StepResult { Stepped, Centered, Stalled };

  struct MeritParts {
    double objective = 0.0;  // f0
    double barrier = 0.0;    // -logdet - log(soc slack)
    bool feasible = false;
  };

  MeritParts merit_parts(const Cursor& x) const;
  StepResult newton_step(Cursor& x, double t_path, double* decrement2);

  const SdrWork& w_;
  double tol_;
  int max_iters_;
  bool soc_;
  double nu_ = 0.0;
  int total_newton_ = 0;
  double last_decrement_ = 0.0;
};

Ipm::MeritParts Ipm::merit_parts(const Cursor& x) const {
  MeritParts parts;
  const Eigen::MatrixXcd s = w_.block(x.qt, w_.apply(x.q));
  Eigen::LLT<Eigen::MatrixXcd> llt(s);
  if (llt.info() != Eigen::Success) return parts;
  double logdet = 0.0;
  for (int i = 0; i < s.rows(); ++i) logdet += std::log(llt.matrixL()(i, i).real());
  logdet *= 2.0;

  parts.objective = -(x.q.adjoint() * w_.y)(0).real();
  parts.barrier = -logdet;
  if (soc_) {
    const double d = x.tsoc * x.tsoc - x.q.squaredNorm();
    if (x.tsoc <= 0.0 || d <= 0.0) return parts;
    parts.objective += w_.sigma / 4.0 * x.tsoc;
    parts.barrier += -std::log(d);
  }
  parts.feasible = true;
  return parts;
}

Ipm::StepResult Ipm::newton_step(Cursor& x, double t_path, double* decrement2) {
  const IpmDirection dir = ipm_newton_direction(w_, x.q, x.tsoc, x.qt, t_path);
  if (!dir.ok) return StepResult::Stalled;
  *decrement2 = dir.decrement2;
  // At numerical centering accuracy the decrement can round to either side of
  // zero; a decidedly negative value means the reduced system went bad.
  if (std::abs(dir.decrement2) / 2.0 <= 1e-9) return StepResult::Centered;
  if (dir.decrement2 < 0.0) return StepResult::Stalled;

  const MeritParts m0 = merit_parts(x);
  if (!m0.feasible) return StepResult::Stalled;
  double step = 1.0;
  for (int ls = 0; ls < 60; ++ls) {
    Cursor trial{x.q + step * dir.dq, x.tsoc + step * dir.dtsoc, x.qt + step * dir.dqt};
    w_.diags.project_affine(trial.qt, w_.c);  // absorb roundoff drift
    const MeritParts mt = merit_parts(trial);
    // Difference form: at large t the absolute merit loses the Armijo
    // decrease to rounding.
    const double dm = t_path * (mt.objective - m0.objective) + (mt.barrier - m0.barrier);
    if (mt.feasible && dm <= 0.01 * step * dir.gdot) {
      x = trial;
      return StepResult::Stepped;
    }
    step *= 0.6;
  }
  // No merit progress is still acceptable centering once the decrement is
  // small; long-step path following tolerates inexact centers.
  return (dir.decrement2 >= 0.0 && dir.decrement2 <= 1e-4) ? StepResult::Centered
                                                            : StepResult::Stalled;
}

DualSolution Ipm::run() {
  Cursor x{Eigen::VectorXcd::Zero(w_.L), 1.0, Eigen::MatrixXcd::Identity(w_.Mp, w_.Mp)};

  double t_path = 1.0;
  const double mu_factor = 8.0;
  // A stall inside a centering round is usually the numerical floor of the
  // Newton decrement; the path keeps advancing and only gives up after two
  // rounds with no progress at all.
  int dead_rounds = 0;
  bool budget_hit = false;

  while (true) {
    int steps_this_round = 0;
    for (int inner = 0; inner < 50; ++inner) {
      double dec2 = 0.0;
      const StepResult res = newton_step(x, t_path, &dec2);
      last_decrement_ = dec2;
      if (res == StepResult::Centered || res == StepResult::Stalled) break;
      ++steps_this_round;
      ++total_newton_;
      if (total_newton_ >= max_iters_) {
        budget_hit = true;
        break;
      }
    }
    if (nu_ / t_path <= tol_ || budget_hit) break;
    dead_rounds = steps_this_round == 0 ? dead_rounds + 1 : 0;
    if (dead_rounds >= 2) break;
    t_path *= mu_factor;
  }

  DualSolution sol;
  sol.q = x.q;
  sol.Q = x.qt / w_.c;
  sol.F = w_.ens->adjoint(x.q);
  sol.objective = w_.y_norm * w_.objective_scaled(x.q);
  sol.status = nu_ / t_path <= tol_ ? SolveStatus::Optimal : SolveStatus::MaxIters;
  sol.kkt.gap = w_.y_norm * nu_ / t_path;
  sol.kkt.primal = 0.0;
  sol.kkt.dual = std::sqrt(std::max(0.0, last_decrement_));
  sol.iterations = total_newton_;
  sol.path_used = "ipm";
  return sol;
}

}  // namespace

DualSolution solve_ipm(const SdrWork& work, double tol, int max_iters) {
  return Ipm(work, tol, max_iters).run();
}

}  // namespace lanm::detail
