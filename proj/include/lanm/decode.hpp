#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lanm/assign.hpp"
#include "lanm/model.hpp"
#include "lanm/qam.hpp"

namespace lanm {

struct DecodedTarget {
  std::vector<double> tau;
  std::complex<double> alpha_hat;  // pilot convention fixes the phase split
  Eigen::VectorXcd h_hat;          // unit norm
  Eigen::VectorXcd g;              // alpha_hat * h_hat, the raw LS block
  std::vector<int> symbols;
};

struct DecodeResult {
  std::vector<DecodedTarget> targets;
  double residual = 0.0;
  double design_condition = 0.0;
};

// Least-squares amplitude/symbol recovery at the estimated shifts: solves
// y ~ sum_k X(g_k a(tau_k)^H) for the stacked g, splits magnitude and
// direction, and demaps through the pilot. Throws on a rank-deficient design.
DecodeResult ls_decode(const Eigen::VectorXcd& y, const MeasurementEnsemble& ensemble,
                       const std::vector<std::vector<double>>& tau_hat, int qam_order,
                       int pilot_index = 0);

// Fraction of wrong symbols after assignment; each missed or spurious target
// counts all of its symbols as errors.
double evaluate_ser(const DecodeResult& decoded, const std::vector<SymbolStream>& truth,
                    const MatchResult& match);

}  // namespace lanm
