#include "lanm/toeplitz.hpp"

#include <map>
#include <stdexcept>

namespace lanm {

RelaxationGrid RelaxationGrid::minimal(const DimensionSpec& spec) {
  RelaxationGrid g;
  g.total = 1;
  for (int d = 0; d < spec.ndim(); ++d) {
    g.sizes.push_back(spec.dims()[d].size);
    g.origins.push_back(spec.origin(d));
    g.total *= spec.dims()[d].size;
  }
  return g;
}

RelaxationGrid RelaxationGrid::with_degrees(const DimensionSpec& spec, const std::vector<int>& degrees) {
  if (degrees.empty()) return minimal(spec);
  if (static_cast<int>(degrees.size()) != spec.ndim())
    throw std::invalid_argument("RelaxationGrid: one degree per active dimension");
  RelaxationGrid g;
  g.total = 1;
  for (int d = 0; d < spec.ndim(); ++d) {
    const int base = spec.dims()[d].size;
    const int n = degrees[d];
    if (n < base) throw std::invalid_argument("RelaxationGrid: degrees below the minimal atom ranges");
    const bool symmetric = spec.dims()[d].axis == Axis::Delay || spec.dims()[d].axis == Axis::Doppler;
    if (symmetric && n % 2 == 0)
      throw std::invalid_argument("RelaxationGrid: symmetric axes need odd degrees");
    g.sizes.push_back(n);
    g.origins.push_back(symmetric ? (n - 1) / 2 : 0);
    g.total *= n;
  }
  return g;
}

int RelaxationGrid::flatten(const std::vector<int>& pos) const {
  int flat = 0;
  for (std::size_t d = 0; d < sizes.size(); ++d) flat = flat * sizes[d] + pos[d];
  return flat;
}

std::vector<int> RelaxationGrid::embedding(const DimensionSpec& spec) const {
  if (static_cast<int>(sizes.size()) != spec.ndim())
    throw std::invalid_argument("RelaxationGrid: rank mismatch in embedding");
  std::vector<int> map(spec.atom_len());
  std::vector<int> pos(spec.ndim(), 0);
  for (int flat = 0; flat < spec.atom_len(); ++flat) {
    const std::vector<int> p = spec.unflatten(flat);
    for (int d = 0; d < spec.ndim(); ++d) {
      const int idx = spec.index_at(d, p[d]);  // signed atom index
      pos[d] = idx + origins[d];
      if (pos[d] < 0 || pos[d] >= sizes[d])
        throw std::logic_error("RelaxationGrid: embedding out of range");
    }
    map[flat] = flatten(pos);
  }
  return map;
}

MultilevelDiagonals::MultilevelDiagonals(const RelaxationGrid& grid) : total_(grid.total) {
  const int ndim = static_cast<int>(grid.sizes.size());
  std::map<std::vector<int>, std::vector<std::pair<int, int>>> table;

  std::vector<int> pi(ndim), pj(ndim), off(ndim);
  for (int i = 0; i < total_; ++i) {
    {  // unflatten i
      int f = i;
      for (int d = ndim - 1; d >= 0; --d) {
        pi[d] = f % grid.sizes[d];
        f /= grid.sizes[d];
      }
    }
    for (int j = 0; j < total_; ++j) {
      int f = j;
      for (int d = ndim - 1; d >= 0; --d) {
        pj[d] = f % grid.sizes[d];
        f /= grid.sizes[d];
      }
      // offset = multi(j) - multi(i); keep only canonical (first nonzero > 0) and zero
      bool canonical = true;
      bool zero = true;
      for (int d = 0; d < ndim; ++d) {
        off[d] = pj[d] - pi[d];
        if (zero && off[d] != 0) {
          zero = false;
          canonical = off[d] > 0;
        }
      }
      if (zero || canonical) table[off].emplace_back(i, j);
    }
  }

  diags_.reserve(table.size());
  for (auto& [offset, cells] : table) {
    bool zero = true;
    for (int v : offset) zero = zero && v == 0;
    if (zero) zero_index_ = static_cast<int>(diags_.size());
    diags_.push_back({offset, std::move(cells)});
  }
}

Eigen::VectorXcd MultilevelDiagonals::diagonal_sums(const Eigen::MatrixXcd& q) const {
  Eigen::VectorXcd sums(count());
  for (int i = 0; i < count(); ++i) {
    std::complex<double> acc = 0.0;
    for (const auto& [r, c] : diags_[i].cells) acc += q(r, c);
    sums[i] = acc;
  }
  return sums;
}

void MultilevelDiagonals::project_affine(Eigen::MatrixXcd& q, double rhs_scale) const {
  for (int i = 0; i < count(); ++i) {
    const auto& cells = diags_[i].cells;
    std::complex<double> acc = 0.0;
    for (const auto& [r, c] : cells) acc += q(r, c);
    const std::complex<double> target = (i == zero_index_) ? rhs_scale : 0.0;
    const std::complex<double> shift = (target - acc) / static_cast<double>(cells.size());
    if (i == zero_index_) {
      for (const auto& [r, c] : cells) q(r, c) += shift;
    } else {
      for (const auto& [r, c] : cells) {
        q(r, c) += shift;
        q(c, r) = std::conj(q(r, c));
      }
    }
  }
}

Eigen::MatrixXcd MultilevelDiagonals::adjoint(const Eigen::VectorXcd& lambda) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(total_, total_);
  for (int i = 0; i < count(); ++i) {
    const std::complex<double> v = lambda[i];
    if (i == zero_index_) {
      for (const auto& [r, c] : diags_[i].cells) out(r, c) += v.real();
    } else {
      for (const auto& [r, c] : diags_[i].cells) {
        out(r, c) += v;
        out(c, r) += std::conj(v);
      }
    }
  }
  return out;
}

Eigen::VectorXcd MultilevelDiagonals::sums_canonical(const Eigen::MatrixXcd& x) const {
  return diagonal_sums(x);
}

Eigen::VectorXcd MultilevelDiagonals::sums_mirrored(const Eigen::MatrixXcd& x) const {
  Eigen::VectorXcd sums(count());
  for (int i = 0; i < count(); ++i) {
    std::complex<double> acc = 0.0;
    for (const auto& [r, c] : diags_[i].cells) acc += x(c, r);
    sums[i] = acc;
  }
  return sums;
}

}  // namespace lanm
