#include "lanm/assign.hpp"

#include <limits>
#include <stdexcept>

namespace lanm {

// Classic O(n^3) potential-based implementation over a square matrix.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  for (const auto& row : cost)
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("hungarian: square matrix required");
  if (n == 0) return {};

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) assignment[p[j] - 1] = j - 1;
  return assignment;
}

MatchResult match_targets(const std::vector<std::vector<double>>& truth, const PeakSet& est) {
  const int k = static_cast<int>(truth.size());
  const int k_hat = est.count();
  const int n = std::max(k, k_hat);
  MatchResult result;
  if (n == 0) return result;

  const double dummy = 1e6;
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, dummy));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k_hat; ++j) cost[i][j] = wrap_max_dist(truth[i], est.peaks[j].tau);

  const std::vector<int> assignment = hungarian(cost);
  for (int i = 0; i < n; ++i) {
    const int j = assignment[i];
    const bool real_truth = i < k;
    const bool real_est = j >= 0 && j < k_hat;
    if (real_truth && real_est) {
      const double d = cost[i][j];
      result.pairs.emplace_back(i, j);
      result.errors.push_back(d);
      result.max_error = std::max(result.max_error, d);
    } else if (real_truth) {
      result.missed.push_back(i);
    } else if (real_est) {
      result.false_alarms.push_back(j);
    }
  }
  return result;
}

}  // namespace lanm
