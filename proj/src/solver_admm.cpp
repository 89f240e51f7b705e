#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <deque>

#include "solver_detail.hpp"

namespace lanm::detail {

namespace {

Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& a) { return 0.5 * (a + a.adjoint()); }

// Exact minimizer of -Re<q,y> + (sigma/4)||q|| + rho ||F(q) - C||_F^2 given
// the eigendecomposition G = V diag(lam) V^H of the Gram matrix:
// (G + sigma/(8 rho s) I) q = b with s = ||q||, solved as a scalar fixed
// point.
Eigen::VectorXcd q_update(const Eigen::MatrixXcd& v, const Eigen::VectorXd& lam,
                          const Eigen::VectorXcd& b, double sigma, double rho) {
  const Eigen::VectorXcd beta = v.adjoint() * b;
  if (sigma <= 0.0) {
    Eigen::VectorXcd scaled(beta.size());
    for (Eigen::Index i = 0; i < beta.size(); ++i) scaled[i] = beta[i] / lam[i];
    return v * scaled;
  }
  const double kappa = sigma / (8.0 * rho);
  if (beta.norm() <= kappa) return Eigen::VectorXcd::Zero(b.size());

  auto norm_at = [&](double s) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < beta.size(); ++i) {
      const double den = lam[i] + kappa / s;
      acc += std::norm(beta[i]) / (den * den);
    }
    return std::sqrt(acc);
  };
  // ||q(s)|| is increasing in s; bracket the fixed point and bisect.
  double lo = 1e-300;
  double hi = 1.0;
  for (int i = 0; i < 200 && norm_at(hi) > hi; ++i) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (norm_at(mid) > mid) lo = mid; else hi = mid;
    if (hi - lo <= 1e-14 * hi) break;
  }
  const double s = 0.5 * (lo + hi);
  Eigen::VectorXcd scaled(beta.size());
  for (Eigen::Index i = 0; i < beta.size(); ++i) scaled[i] = beta[i] / (lam[i] + kappa / s);
  return v * scaled;
}

// Type-II Anderson acceleration over the consensus state, with a growing
// residual triggering a history reset. Linear-rate splitting tails respond
// very well to a short mixing window.
class AndersonMixer {
 public:
  explicit AndersonMixer(int depth) : depth_(depth) {}

  void reset() {
    states_.clear();
    residuals_.clear();
  }

  // state z_k and its fixed-point residual r_k = G(z_k) - z_k; returns the
  // mixed next state (or the plain G(z_k) when mixing is not sensible).
  Eigen::VectorXd next(const Eigen::VectorXd& z, const Eigen::VectorXd& r) {
    states_.push_back(z + r);  // G(z_k)
    residuals_.push_back(r);
    if (static_cast<int>(states_.size()) > depth_) {
      states_.pop_front();
      residuals_.pop_front();
    }
    const int m = static_cast<int>(states_.size());
    if (m < 2) return states_.back();

    // min over gamma of || r_k + sum_j gamma_j (r_{k-m+j} - r_k) ||
    Eigen::MatrixXd diff(r.size(), m - 1);
    for (int j = 0; j < m - 1; ++j) diff.col(j) = residuals_[j] - residuals_[m - 1];
    const Eigen::VectorXd gamma =
        (diff.transpose() * diff + 1e-10 * Eigen::MatrixXd::Identity(m - 1, m - 1))
            .ldlt()
            .solve(-diff.transpose() * residuals_[m - 1]);
    Eigen::VectorXd mixed = states_[m - 1];
    for (int j = 0; j < m - 1; ++j) mixed += gamma[j] * (states_[j] - states_[m - 1]);
    return mixed;
  }

 private:
  int depth_;
  std::deque<Eigen::VectorXd> states_;
  std::deque<Eigen::VectorXd> residuals_;
};

}  // namespace

// Operator splitting on the scaled SDR: the (q, Q) step couples a regularized
// least squares in q (norm penalty handled exactly through a secular
// equation) with the exact affine projection of Q onto the trace constraints;
// the consensus block S carries the PSD cone via eigenprojection. Anderson
// mixing accelerates the (S, W) fixed point.
DualSolution solve_admm(const SdrWork& work, double tol, int max_iters) {
  const double alpha = 1.6;  // over-relaxation
  // The block preconditioner scales the Gram by c, so the penalty starts at
  // 1/c to keep the objective and quadratic terms balanced.
  double rho = 1.0 / work.c;
  if (const char* env = std::getenv("LANM_ADMM_RHO")) rho = std::atof(env);

  Eigen::MatrixXcd gram = work.gram;
  gram.diagonal().array() += 1e-12 * work.c;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ges(gram);
  const Eigen::MatrixXcd gv = ges.eigenvectors();
  const Eigen::VectorXd glam = ges.eigenvalues().cwiseMax(1e-14 * work.c);

  const int n = work.Mp + work.T;
  Eigen::VectorXcd q = Eigen::VectorXcd::Zero(work.L);
  Eigen::MatrixXcd qt = Eigen::MatrixXcd::Identity(work.Mp, work.Mp);
  Eigen::MatrixXcd s = work.block(qt, Eigen::MatrixXcd::Zero(work.T, work.Mp));
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(n, n);

  TrackedProjector projector;

  // One ADMM sweep as a fixed-point map on (S, W).
  auto sweep = [&](const Eigen::MatrixXcd& s_in, const Eigen::MatrixXcd& w_in,
                   Eigen::MatrixXcd& s_out, Eigen::MatrixXcd& w_out, Eigen::MatrixXcd& blk_out) {
    const Eigen::MatrixXcd sw = hermitize(s_in - w_in);
    qt = sw.topLeftCorner(work.Mp, work.Mp);
    work.diags.project_affine(qt, work.c);
    const Eigen::MatrixXcd c_blk = sw.bottomLeftCorner(work.T, work.Mp);
    const Eigen::VectorXcd b = work.y / (2.0 * rho) + work.apply_adjoint(c_blk);
    q = q_update(gv, glam, b, work.sigma, rho);
    blk_out = work.block(qt, work.apply(q));
    const Eigen::MatrixXcd b_hat = alpha * blk_out + (1.0 - alpha) * s_in;
    s_out = projector.project(hermitize(b_hat + w_in));
    w_out = w_in + b_hat - s_out;
  };

  const int zdim = 2 * n * n;  // (S, W) as real data
  auto pack = [&](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b2) {
    Eigen::VectorXd z(2 * zdim);
    std::memcpy(z.data(), a.data(), sizeof(double) * zdim);
    std::memcpy(z.data() + zdim, b2.data(), sizeof(double) * zdim);
    return z;
  };
  auto unpack = [&](const Eigen::VectorXd& z, Eigen::MatrixXcd& a, Eigen::MatrixXcd& b2) {
    a.resize(n, n);
    b2.resize(n, n);
    std::memcpy(a.data(), z.data(), sizeof(double) * zdim);
    std::memcpy(b2.data(), z.data() + zdim, sizeof(double) * zdim);
  };

  AndersonMixer mixer(6);
  double best_residual = std::numeric_limits<double>::infinity();

  double prim = 0.0, dual = 0.0, prev_obj = 0.0, obj_change = 0.0;
  int iter = 0;
  bool converged = false;

  for (iter = 1; iter <= max_iters; ++iter) {
    Eigen::MatrixXcd s_next, w_next, blk;
    sweep(s, w, s_next, w_next, blk);

    const double scale = std::max({blk.norm(), s_next.norm(), 1.0});
    prim = (blk - s_next).norm() / scale;
    dual = rho * (s_next - s).norm() / std::max(rho * w.norm(), 1.0);
    const double obj = work.objective_scaled(q);
    obj_change = std::abs(obj - prev_obj);
    prev_obj = obj;
    if (prim <= tol && dual <= tol) {
      s = s_next;
      w = w_next;
      converged = true;
      break;
    }

    static const bool trace = std::getenv("LANM_ADMM_TRACE") != nullptr;
    if (trace && iter % 20 == 0)
      std::fprintf(stderr, "  admm %5d rho=%.2e prim=%.2e dual=%.2e obj=%.6f full=%ld\n", iter, rho,
                   prim, dual, work.y_norm * obj, projector.full_solves());

    const Eigen::VectorXd z = pack(s, w);
    const Eigen::VectorXd r = pack(s_next, w_next) - z;
    const double rnorm = r.norm();
    if (rnorm > 2.0 * best_residual) {
      // Mixing went sour; restart from the plain iterate.
      mixer.reset();
      best_residual = rnorm;
      s = s_next;
      w = w_next;
    } else {
      best_residual = std::min(best_residual, rnorm);
      unpack(mixer.next(z, r), s, w);
    }

    if (iter % 40 == 0 && prim > 0.0 && dual > 0.0) {
      // Residual balancing with a bounded multiplicative factor.
      const double ratio = prim / dual;
      if (ratio > 5.0 || ratio < 0.2) {
        const double factor = std::min(5.0, std::max(0.2, std::sqrt(ratio)));
        rho *= factor;
        w /= factor;
        mixer.reset();
        projector.invalidate();
        best_residual = std::numeric_limits<double>::infinity();
      }
    }
  }

  // Final x-pass so the returned (q, Q) satisfy the trace constraints exactly
  // and correspond to the converged consensus state.
  {
    Eigen::MatrixXcd s_next, w_next, blk;
    sweep(s, w, s_next, w_next, blk);
  }

  DualSolution sol;
  sol.q = q;
  sol.Q = qt / work.c;
  sol.F = work.ens->adjoint(q);
  sol.objective = work.y_norm * work.objective_scaled(q);
  sol.status = converged ? SolveStatus::Optimal : SolveStatus::MaxIters;
  sol.kkt.primal = prim;
  sol.kkt.dual = dual;
  sol.kkt.gap = work.y_norm * obj_change;
  sol.iterations = std::min(iter, max_iters);
  sol.path_used = "first-order";
  return sol;
}

}  // namespace lanm::detail
