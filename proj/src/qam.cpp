#include "lanm/qam.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "lanm/rng.hpp"

namespace lanm {

namespace {

Constellation make_qam(int order) {
  if (order != 4 && order != 16 && order != 64)
    throw std::invalid_argument("qam: unsupported order (use 4, 16 or 64)");
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
  Eigen::VectorXcd pts(order);
  double energy = 0.0;
  for (int a = 0; a < side; ++a)
    for (int b = 0; b < side; ++b) {
      const double re = 2 * a - (side - 1);
      const double im = 2 * b - (side - 1);
      pts[a * side + b] = {re, im};
      energy += re * re + im * im;
    }
  const double scale = 1.0 / std::sqrt(energy / order);
  pts *= scale;
  Constellation c;
  c.order = order;
  c.points = std::move(pts);
  c.reference_index = order - 1;  // (+(side-1), +(side-1)) corner
  c.min_distance = 2.0 * scale;
  return c;
}

}  // namespace

const Constellation& qam_constellation(int order) {
  static const std::map<int, Constellation> table = {
      {4, make_qam(4)}, {16, make_qam(16)}, {64, make_qam(64)}};
  auto it = table.find(order);
  if (it == table.end()) throw std::invalid_argument("qam: unsupported order (use 4, 16 or 64)");
  return it->second;
}

SymbolStream encode(int order, int num_symbols, std::uint64_t seed, int pilot_index) {
  if (num_symbols < 2) throw std::invalid_argument("encode: need at least 2 symbols");
  if (pilot_index < 0 || pilot_index >= num_symbols)
    throw std::invalid_argument("encode: pilot index out of range");
  const Constellation& c = qam_constellation(order);

  Rng rng(splitmix64(seed));
  SymbolStream s;
  s.order = order;
  s.pilot_index = pilot_index;
  s.indices.resize(num_symbols);
  s.raw.resize(num_symbols);
  for (int t = 0; t < num_symbols; ++t)
    s.indices[t] = static_cast<int>(rng.uniform_below(order));
  s.indices[pilot_index] = c.reference_index;
  for (int t = 0; t < num_symbols; ++t) s.raw[t] = c.points[s.indices[t]];
  s.h = s.raw / s.raw.norm();
  return s;
}

std::vector<int> demap(const Eigen::VectorXcd& h_est, int order, int pilot_index) {
  const Constellation& c = qam_constellation(order);
  const double norm = h_est.norm();
  if (norm == 0.0) throw std::invalid_argument("demap: zero vector");
  if (pilot_index < 0 || pilot_index >= h_est.size())
    throw std::invalid_argument("demap: pilot index out of range");

  // One complex factor fixes both the global phase and the scale.
  std::complex<double> correction;
  const std::complex<double> pilot = h_est[pilot_index];
  if (std::abs(pilot) > 1e-12 * norm) {
    correction = c.points[c.reference_index] / pilot;
  } else {
    // Degenerate pilot: fall back to energy scaling without de-rotation.
    correction = std::sqrt(static_cast<double>(h_est.size())) / norm;
  }

  std::vector<int> out(h_est.size());
  for (Eigen::Index t = 0; t < h_est.size(); ++t) {
    const std::complex<double> v = h_est[t] * correction;
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int p = 0; p < order; ++p) {
      const double d = std::norm(v - c.points[p]);
      if (d < best_d) {
        best_d = d;
        best = p;
      }
    }
    out[t] = best;
  }
  return out;
}

}  // namespace lanm
