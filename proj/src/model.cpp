#include "lanm/model.hpp"

#include <cmath>
#include <stdexcept>

namespace lanm {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.1415926535897932384626433832795;
}  // namespace

double dirichlet_kernel(double t, int n_half) {
  if (n_half < 1) throw std::invalid_argument("dirichlet_kernel: N >= 1 required");
  const int len = 2 * n_half + 1;
  t -= std::floor(t);
  const double s = std::sin(kPi * t);
  if (std::abs(s) < 1e-12) return 1.0;  // removable singularity at t = 0
  return std::sin(len * kPi * t) / (len * s);
}

Eigen::VectorXcd steering_vector(const DimensionSpec& spec, const std::vector<double>& tau) {
  if (static_cast<int>(tau.size()) != spec.ndim())
    throw std::invalid_argument("steering_vector: shift rank does not match spec");
  Eigen::VectorXcd a = Eigen::VectorXcd::Ones(1);
  for (int d = 0; d < spec.ndim(); ++d) {
    const int n = spec.dims()[d].size;
    Eigen::VectorXcd factor(n);
    for (int pos = 0; pos < n; ++pos) {
      const double phase = kTwoPi * spec.exponent_sign(d) * spec.index_at(d, pos) * tau[d];
      factor[pos] = std::polar(1.0, phase);
    }
    Eigen::VectorXcd next(a.size() * n);
    for (Eigen::Index i = 0; i < a.size(); ++i)
      next.segment(i * n, n) = a[i] * factor;
    a = std::move(next);
  }
  return a;
}

Eigen::MatrixXcd build_lifted(const TargetScene& scene) {
  const int t_dim = scene.config.subspace_dim;
  const int m = scene.config.spec.atom_len();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(t_dim, m);
  for (int k = 0; k < scene.config.num_targets; ++k) {
    const Eigen::VectorXcd a = steering_vector(scene.config.spec, scene.targets[k].tau);
    u.noalias() += scene.targets[k].alpha * scene.symbols[k] * a.adjoint();
  }
  return u;
}

MeasurementEnsemble::MeasurementEnsemble(DimensionSpec spec, Dictionary dict)
    : spec_(std::move(spec)), dict_(std::move(dict)) {
  if (!spec_.has(Axis::Delay))
    throw std::invalid_argument("MeasurementEnsemble: the delay dimension is required");
  const int delay_len = spec_.delay_len();
  if (dict_.rows() != delay_len)
    throw std::invalid_argument("MeasurementEnsemble: dictionary row count must equal the delay length");

  const int t_dim = dict_.cols();
  const int m_len = spec_.atom_len();
  const int n_half = (delay_len - 1) / 2;
  const int nr = spec_.has(Axis::Aoa) ? spec_.size_of(Axis::Aoa) : 1;
  const int nt = spec_.has(Axis::Aod) ? spec_.size_of(Axis::Aod) : 1;
  const int nv = spec_.has(Axis::Doppler) ? spec_.size_of(Axis::Doppler) : 1;
  const bool frequency_obs = !spec_.has(Axis::Doppler) && nr == 1 && nt == 1;

  // Column positions follow the canonical Kronecker layout; build a flat
  // position from the active coordinates.
  auto column = [&](int r, int s, int delay_pos, int dopp_pos) {
    std::vector<int> pos;
    pos.reserve(spec_.ndim());
    for (const Dim& dim : spec_.dims()) {
      switch (dim.axis) {
        case Axis::Aoa: pos.push_back(r); break;
        case Axis::Aod: pos.push_back(s); break;
        case Axis::Delay: pos.push_back(delay_pos); break;
        case Axis::Doppler: pos.push_back(dopp_pos); break;
      }
    }
    return spec_.flatten(pos);
  };

  mats_.reserve(m_len);
  if (frequency_obs) {
    // y_j = sum_t D[j,t] U[t, pos(-j)]
    for (int jpos = 0; jpos < delay_len; ++jpos) {
      const int j = jpos - n_half;
      Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(t_dim, m_len);
      const int col = column(0, 0, -j + n_half, 0);
      for (int t = 0; t < t_dim; ++t) mat(t, col) = std::conj(dict_.matrix(jpos, t));
      mats_.push_back(std::move(mat));
    }
  } else {
    // y_{(r,s,m,u)} = sum_j e^{+i2pi j u/L} sum_t D[j,t] U[t,(r,s,-j,-m)]
    for (int r = 0; r < nr; ++r)
      for (int s = 0; s < nt; ++s)
        for (int mpos = 0; mpos < nv; ++mpos) {
          const int mm = mpos - (nv - 1) / 2;
          const int dopp_pos = spec_.has(Axis::Doppler) ? (-mm + (nv - 1) / 2) : 0;
          for (int u = 0; u < delay_len; ++u) {
            Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(t_dim, m_len);
            for (int jpos = 0; jpos < delay_len; ++jpos) {
              const int j = jpos - n_half;
              const std::complex<double> w =
                  std::polar(1.0, -kTwoPi * static_cast<double>(j) * u / delay_len);
              const int col = column(r, s, -j + n_half, dopp_pos);
              for (int t = 0; t < t_dim; ++t) mat(t, col) = std::conj(dict_.matrix(jpos, t)) * w;
            }
            mats_.push_back(std::move(mat));
          }
        }
  }
}

Eigen::VectorXcd MeasurementEnsemble::forward(const Eigen::MatrixXcd& lifted) const {
  if (lifted.rows() != mats_[0].rows() || lifted.cols() != mats_[0].cols())
    throw std::invalid_argument("forward: lifted matrix shape mismatch");
  Eigen::VectorXcd y(observation_count());
  for (int m = 0; m < observation_count(); ++m)
    y[m] = (mats_[m].conjugate().array() * lifted.array()).sum();
  return y;
}

Eigen::MatrixXcd MeasurementEnsemble::adjoint(const Eigen::VectorXcd& q) const {
  if (q.size() != observation_count()) throw std::invalid_argument("adjoint: length mismatch");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(mats_[0].rows(), mats_[0].cols());
  for (int m = 0; m < observation_count(); ++m) out.noalias() += q[m] * mats_[m];
  return out;
}

const Eigen::MatrixXcd& MeasurementEnsemble::gram() const {
  if (!gram_ready_) {
    const int n = observation_count();
    gram_.resize(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        const std::complex<double> g = (mats_[a].conjugate().array() * mats_[b].array()).sum();
        gram_(a, b) = g;
        gram_(b, a) = std::conj(g);
      }
    gram_ready_ = true;
  }
  return gram_;
}

MeasurementEnsemble build_measurement_ensemble(const DimensionSpec& spec, const Dictionary& dict) {
  return MeasurementEnsemble(spec, dict);
}

Eigen::MatrixXcd waveform_time_samples(const Dictionary& dict, const std::vector<Eigen::VectorXcd>& symbols) {
  const int len = dict.rows();
  const int n_half = (len - 1) / 2;
  Eigen::MatrixXcd x(len, static_cast<int>(symbols.size()));
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    const Eigen::VectorXcd coeff = dict.matrix * symbols[k];  // frequency coefficients, j = -N..N
    for (int u = 0; u < len; ++u) {
      std::complex<double> acc = 0.0;
      for (int jpos = 0; jpos < len; ++jpos) {
        const int j = jpos - n_half;
        acc += coeff[jpos] * std::polar(1.0, kTwoPi * static_cast<double>(j) * u / len);
      }
      x(u, static_cast<int>(k)) = acc;
    }
  }
  return x;
}

Eigen::VectorXcd simulate_time_domain(const TargetScene& scene, const Eigen::MatrixXcd& waveform_samples) {
  const DimensionSpec& spec = scene.config.spec;
  if (!spec.has(Axis::Delay)) throw std::invalid_argument("simulate_time_domain: delay dimension required");
  const int len = spec.delay_len();
  if (waveform_samples.rows() != len || waveform_samples.cols() != scene.config.num_targets)
    throw std::invalid_argument("simulate_time_domain: waveform sample shape mismatch");
  const int n_half = (len - 1) / 2;
  const int nr = spec.has(Axis::Aoa) ? spec.size_of(Axis::Aoa) : 1;
  const int nt = spec.has(Axis::Aod) ? spec.size_of(Axis::Aod) : 1;
  const int nv = spec.has(Axis::Doppler) ? spec.size_of(Axis::Doppler) : 1;
  const bool frequency_obs = !spec.has(Axis::Doppler) && nr == 1 && nt == 1;

  // Per-axis coordinate lookup into the canonical tau layout.
  auto coord = [&](const TargetParams& tgt, Axis axis) -> double {
    for (int d = 0; d < spec.ndim(); ++d)
      if (spec.dims()[d].axis == axis) return tgt.tau[d];
    return 0.0;
  };

  // Bandlimited circular interpolation of the waveform at real-valued t.
  auto waveform_at = [&](int k, double t) {
    std::complex<double> acc = 0.0;
    for (int l = 0; l < len; ++l)
      acc += waveform_samples(l, k) * dirichlet_kernel((t - l) / len, n_half);
    return acc;
  };

  Eigen::VectorXcd samples(nr * nt * nv * len);
  int idx = 0;
  for (int r = 0; r < nr; ++r)
    for (int s = 0; s < nt; ++s)
      for (int mpos = 0; mpos < nv; ++mpos) {
        const int mm = mpos - (nv - 1) / 2;
        for (int u = 0; u < len; ++u, ++idx) {
          std::complex<double> acc = 0.0;
          for (int k = 0; k < scene.config.num_targets; ++k) {
            const TargetParams& tgt = scene.targets[k];
            double phase = 0.0;
            if (spec.has(Axis::Aoa)) phase -= kTwoPi * r * coord(tgt, Axis::Aoa);
            if (spec.has(Axis::Aod)) phase -= kTwoPi * s * coord(tgt, Axis::Aod);
            if (spec.has(Axis::Doppler)) phase += kTwoPi * mm * coord(tgt, Axis::Doppler);
            const double delay = len * coord(tgt, Axis::Delay);
            acc += tgt.alpha * std::polar(1.0, phase) * waveform_at(k, u - delay);
          }
          samples[idx] = acc;
        }
      }

  if (!frequency_obs) return samples;

  // Delay-only mode: the receiver reports frequency coefficients.
  Eigen::VectorXcd y(len);
  for (int jpos = 0; jpos < len; ++jpos) {
    const int j = jpos - n_half;
    std::complex<double> acc = 0.0;
    for (int u = 0; u < len; ++u)
      acc += samples[u] * std::polar(1.0, -kTwoPi * static_cast<double>(j) * u / len);
    y[jpos] = acc / static_cast<double>(len);
  }
  return y;
}

}  // namespace lanm
