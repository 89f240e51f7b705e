#pragma once

#include <vector>

#include "lanm/dims.hpp"
#include "lanm/dual_poly.hpp"

namespace lanm {

// Minimum-total-cost assignment on a square cost matrix (Hungarian method).
// Returns col index per row.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost);

struct MatchResult {
  // Pairs (truth index, estimate index) in the optimal assignment.
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> missed;        // truth entries without an estimate
  std::vector<int> false_alarms;  // estimates without a truth entry
  // Per matched pair, the max-over-coordinates wrap-around distance.
  std::vector<double> errors;
  double max_error = 0.0;
};

// Bipartite matching of true shift tuples against estimated peaks under the
// wrap-around metric; surplus entries on either side become misses or false
// alarms.
MatchResult match_targets(const std::vector<std::vector<double>>& truth, const PeakSet& est);

}  // namespace lanm
