#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lanm/dims.hpp"

namespace lanm {

// Index grid of the sum-of-squares relaxation. Minimal degrees reuse the atom
// index ranges; larger degrees extend each range (zero-padded dual variable).
struct RelaxationGrid {
  std::vector<int> sizes;    // per active dimension, canonical order
  std::vector<int> origins;  // 0 for angles, N for symmetric axes
  int total = 0;

  static RelaxationGrid minimal(const DimensionSpec& spec);
  // degrees: requested per-dimension grid sizes; must be >= minimal and keep
  // the symmetric axes odd. Empty means minimal.
  static RelaxationGrid with_degrees(const DimensionSpec& spec, const std::vector<int>& degrees);

  int flatten(const std::vector<int>& pos) const;
  // Map an atom-grid flat column onto this (possibly larger) grid.
  std::vector<int> embedding(const DimensionSpec& spec) const;
};

// The multilevel diagonals of a total x total Hermitian matrix, enumerated by
// canonical offsets (first nonzero component positive, plus the zero offset).
// Each diagonal carries one trace constraint sum(Q over cells) = delta.
class MultilevelDiagonals {
 public:
  struct Diagonal {
    std::vector<int> offset;
    std::vector<std::pair<int, int>> cells;  // (row, col) with multi(col) - multi(row) = offset
  };

  explicit MultilevelDiagonals(const RelaxationGrid& grid);

  const std::vector<Diagonal>& diagonals() const { return diags_; }
  int count() const { return static_cast<int>(diags_.size()); }
  int grid_total() const { return total_; }
  // Index of the zero-offset diagonal inside diagonals().
  int zero_index() const { return zero_index_; }

  // Sum of entries along each canonical diagonal.
  Eigen::VectorXcd diagonal_sums(const Eigen::MatrixXcd& q) const;

  // Orthogonal projection onto {hermitian Q : diagonal sums = rhs_scale * delta}.
  void project_affine(Eigen::MatrixXcd& q, double rhs_scale) const;

  // A^*(lambda): lambda_0 on the main diagonal plus lambda_o / conj(lambda_o)
  // on each off-diagonal pair. lambda indexed like diagonals().
  Eigen::MatrixXcd adjoint(const Eigen::VectorXcd& lambda) const;

  // Sums of an arbitrary (not necessarily Hermitian) matrix along ALL offsets,
  // indexed by signed offset key; helper for solver assembly.
  // key layout: for each canonical diagonal i != zero: [i] -> offset, mirrored
  // sums available via mirror_sums.
  Eigen::VectorXcd sums_canonical(const Eigen::MatrixXcd& x) const;  // along +offset cells
  Eigen::VectorXcd sums_mirrored(const Eigen::MatrixXcd& x) const;   // along -offset (transposed cells)

 private:
  std::vector<Diagonal> diags_;
  int total_ = 0;
  int zero_index_ = 0;
};

}  // namespace lanm
