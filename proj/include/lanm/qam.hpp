#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace lanm {

// Square QAM constellation normalized to unit average energy.
struct Constellation {
  int order;
  Eigen::VectorXcd points;
  int reference_index;  // first-quadrant corner, used as the pilot symbol
  double min_distance;
};

// order in {4, 16, 64}
const Constellation& qam_constellation(int order);

// A per-target message: T constellation draws with the pilot entry fixed to
// the reference point, normalized to a unit-norm vector h.
struct SymbolStream {
  int order;
  int pilot_index;
  std::vector<int> indices;  // constellation indices, length T
  Eigen::VectorXcd raw;      // constellation points before normalization
  Eigen::VectorXcd h;        // raw / ||raw||
};

SymbolStream encode(int order, int num_symbols, std::uint64_t seed, int pilot_index = 0);

// Recovers symbol indices from a scaled/rotated estimate of h. The complex
// correction factor is read off the pilot entry, then each entry maps to the
// nearest constellation point.
std::vector<int> demap(const Eigen::VectorXcd& h_est, int order, int pilot_index = 0);

}  // namespace lanm
