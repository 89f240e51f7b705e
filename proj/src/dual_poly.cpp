#include "lanm/dual_poly.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "lanm/model.hpp"

namespace lanm {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// The FFTW planner is not thread safe; executions are.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

double wrap01(double x) { return x - std::floor(x); }

}  // namespace

Eigen::VectorXcd DualPolynomial::value(const std::vector<double>& tau) const {
  return coeff * steering_vector(spec, tau);
}

double DualPolynomial::norm_at(const std::vector<double>& tau) const { return value(tau).norm(); }

int NormGrid::total() const {
  int t = 1;
  for (int s : sizes) t *= s;
  return t;
}

double NormGrid::max_value() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

std::vector<double> NormGrid::tau_at(int flat) const {
  std::vector<double> tau(sizes.size());
  for (int d = static_cast<int>(sizes.size()) - 1; d >= 0; --d) {
    tau[d] = static_cast<double>(flat % sizes[d]) / sizes[d];
    flat /= sizes[d];
  }
  return tau;
}

NormGrid eval_grid(const DualPolynomial& poly, int oversample) {
  if (oversample < 2) throw std::invalid_argument("eval_grid: oversample >= 2 required");
  const DimensionSpec& spec = poly.spec;
  const int ndim = spec.ndim();
  const int t_rows = static_cast<int>(poly.coeff.rows());

  NormGrid grid;
  grid.sizes.resize(ndim);
  for (int d = 0; d < ndim; ++d) grid.sizes[d] = oversample * spec.dims()[d].size;
  const int total = grid.total();
  grid.values.assign(total, 0.0);

  std::vector<fftw_complex> buf(total);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    // FFTW_BACKWARD realizes sum_k c_k e^{+i2pi k g / G} per dimension.
    plan = fftw_plan_dft(ndim, grid.sizes.data(), buf.data(), buf.data(), FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (!plan) throw std::runtime_error("eval_grid: fftw plan failed");

  std::vector<int> pos(ndim);
  for (int t = 0; t < t_rows; ++t) {
    for (auto& v : buf) v[0] = v[1] = 0.0;
    for (int col = 0; col < spec.atom_len(); ++col) {
      const std::vector<int> p = spec.unflatten(col);
      int flat = 0;
      for (int d = 0; d < ndim; ++d) {
        const int k = spec.exponent_sign(d) * spec.index_at(d, p[d]);
        const int g = ((k % grid.sizes[d]) + grid.sizes[d]) % grid.sizes[d];
        flat = flat * grid.sizes[d] + g;
      }
      buf[flat][0] += poly.coeff(t, col).real();
      buf[flat][1] += poly.coeff(t, col).imag();
    }
    fftw_execute(plan);
    for (int i = 0; i < total; ++i)
      grid.values[i] += buf[i][0] * buf[i][0] + buf[i][1] * buf[i][1];
  }
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  for (double& v : grid.values) v = std::sqrt(v);
  return grid;
}

PeakSet find_peaks(const NormGrid& grid, double threshold, double merge_radius) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw std::invalid_argument("find_peaks: threshold must lie in (0, 1]");
  const int ndim = static_cast<int>(grid.sizes.size());
  const int total = grid.total();

  // Strides for flat indexing.
  std::vector<int> stride(ndim, 1);
  for (int d = ndim - 2; d >= 0; --d) stride[d] = stride[d + 1] * grid.sizes[d + 1];

  std::vector<std::pair<double, int>> candidates;
  std::vector<int> pos(ndim);
  for (int flat = 0; flat < total; ++flat) {
    const double v = grid.values[flat];
    if (v <= threshold) continue;
    {
      int f = flat;
      for (int d = 0; d < ndim; ++d) {
        pos[d] = f / stride[d];
        f %= stride[d];
      }
    }
    // Compare against the full wrap-around neighborhood.
    bool is_max = true;
    std::vector<int> offset(ndim, -1);
    while (is_max) {
      bool all_zero = true;
      for (int d = 0; d < ndim; ++d) all_zero = all_zero && offset[d] == 0;
      if (!all_zero) {
        int nflat = 0;
        for (int d = 0; d < ndim; ++d) {
          const int np = (pos[d] + offset[d] + grid.sizes[d]) % grid.sizes[d];
          nflat += np * stride[d];
        }
        if (grid.values[nflat] > v) is_max = false;
      }
      int d = ndim - 1;
      for (; d >= 0; --d) {
        if (offset[d] < 1) {
          ++offset[d];
          break;
        }
        offset[d] = -1;
      }
      if (d < 0) break;
    }
    if (is_max) candidates.emplace_back(v, flat);
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  PeakSet out;
  for (const auto& [v, flat] : candidates) {
    const std::vector<double> tau = grid.tau_at(flat);
    bool merged = false;
    for (const Peak& kept : out.peaks)
      if (wrap_max_dist(kept.tau, tau) < merge_radius) {
        merged = true;
        break;
      }
    if (!merged) out.peaks.push_back({tau, v, true});
  }
  return out;
}

Peak refine_peak(const DualPolynomial& poly, const std::vector<double>& tau0) {
  const DimensionSpec& spec = poly.spec;
  const int ndim = spec.ndim();
  const int m_len = spec.atom_len();

  // Signed index ladder per dimension for the derivative diagonals.
  std::vector<Eigen::VectorXcd> ladder(ndim);
  for (int d = 0; d < ndim; ++d) {
    ladder[d].resize(m_len);
    for (int col = 0; col < m_len; ++col) {
      const std::vector<int> p = spec.unflatten(col);
      ladder[d][col] = static_cast<double>(spec.exponent_sign(d) * spec.index_at(d, p[d]));
    }
  }

  std::vector<double> tau = tau0;
  for (double& x : tau) x = wrap01(x);

  auto objective = [&](const std::vector<double>& at, Eigen::VectorXd* grad, Eigen::MatrixXd* hess) {
    const Eigen::VectorXcd a = steering_vector(spec, at);
    const Eigen::VectorXcd f = poly.coeff * a;
    const double g0 = f.squaredNorm();
    if (!grad) return g0;
    std::vector<Eigen::VectorXcd> u(ndim);
    for (int d = 0; d < ndim; ++d) u[d] = poly.coeff * ladder[d].cwiseProduct(a);
    grad->resize(ndim);
    for (int d = 0; d < ndim; ++d)
      (*grad)[d] = -2.0 * kTwoPi * std::imag(f.dot(u[d]));
    if (hess) {
      hess->resize(ndim, ndim);
      for (int d = 0; d < ndim; ++d)
        for (int e = d; e < ndim; ++e) {
          const Eigen::VectorXcd v =
              poly.coeff * ladder[d].cwiseProduct(ladder[e]).cwiseProduct(a);
          const double val = 2.0 * kTwoPi * kTwoPi *
                             (std::real(u[e].dot(u[d])) - std::real(f.dot(v)));
          (*hess)(d, e) = val;
          (*hess)(e, d) = val;
        }
    }
    return g0;
  };

  Peak out;
  out.refined_converged = false;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  double g = objective(tau, &grad, &hess);

  for (int iter = 0; iter < 50; ++iter) {
    if (grad.norm() <= 1e-10) {
      out.refined_converged = true;
      break;
    }
    Eigen::VectorXd dir;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
    if (es.eigenvalues().maxCoeff() < 0.0) {
      dir = -hess.ldlt().solve(grad);  // Newton on a locally concave model
    } else {
      dir = grad / std::max(grad.norm(), 1e-12);  // gradient fallback
    }
    double step = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls) {
      std::vector<double> trial(tau);
      for (int d = 0; d < ndim; ++d) trial[d] = wrap01(trial[d] + step * dir[d]);
      const double gt = objective(trial, nullptr, nullptr);
      if (gt > g) {
        tau = trial;
        g = objective(tau, &grad, &hess);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      out.refined_converged = grad.norm() <= 1e-6;
      break;
    }
  }
  if (grad.size() && grad.norm() <= 1e-10) out.refined_converged = true;

  out.tau = tau;
  out.height = std::sqrt(g);
  return out;
}

}  // namespace lanm
