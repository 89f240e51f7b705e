#include "lanm/dictionary.hpp"

#include <cmath>
#include <stdexcept>

#include "lanm/rng.hpp"

namespace lanm {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Uniform row indices with replacement, conditioned on covering every base
// row when there is room. An uncovered row would leave part of the symbol
// vector outside the transmit span, so no receiver could recover it; the
// conditioning keeps the isotropy assumption meaningful at small row counts.
std::vector<int> subsample_rows(Rng& rng, int rows, int base) {
  std::vector<int> picks(rows);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<char> seen(base, 0);
    int covered = 0;
    for (int l = 0; l < rows; ++l) {
      picks[l] = static_cast<int>(rng.uniform_below(base));
      if (!seen[picks[l]]) {
        seen[picks[l]] = 1;
        ++covered;
      }
    }
    if (covered == base || rows < base) return picks;
  }
  throw std::runtime_error("gen_dictionary: could not cover all base rows");
}

// Sylvester construction, entries +-1 (unnormalized, unit modulus).
Eigen::MatrixXd hadamard(int n) {
  Eigen::MatrixXd h(1, 1);
  h(0, 0) = 1.0;
  while (h.rows() < n) {
    const int m = static_cast<int>(h.rows());
    Eigen::MatrixXd h2(2 * m, 2 * m);
    h2.topLeftCorner(m, m) = h;
    h2.topRightCorner(m, m) = h;
    h2.bottomLeftCorner(m, m) = h;
    h2.bottomRightCorner(m, m) = -h;
    h = std::move(h2);
  }
  return h;
}

}  // namespace

const char* dictionary_kind_name(DictionaryKind kind) {
  switch (kind) {
    case DictionaryKind::Gaussian: return "gaussian";
    case DictionaryKind::HadamardSubsampled: return "hadamard";
    case DictionaryKind::DftSubsampled: return "dft";
    case DictionaryKind::ContinuousFourier: return "fourier";
  }
  return "?";
}

std::optional<DictionaryKind> dictionary_kind_from_name(std::string_view name) {
  if (name == "gaussian") return DictionaryKind::Gaussian;
  if (name == "hadamard" || name == "hadamard-subsampled") return DictionaryKind::HadamardSubsampled;
  if (name == "dft" || name == "dft-subsampled") return DictionaryKind::DftSubsampled;
  if (name == "fourier" || name == "continuous-fourier") return DictionaryKind::ContinuousFourier;
  return std::nullopt;
}

Dictionary gen_dictionary(DictionaryKind kind, int rows, int cols, std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("gen_dictionary: sizes must be positive");
  const bool subsampled = kind == DictionaryKind::HadamardSubsampled || kind == DictionaryKind::DftSubsampled;
  if (subsampled && cols > rows)
    throw std::invalid_argument("gen_dictionary: subsampled kinds need T <= rows");
  if (kind == DictionaryKind::HadamardSubsampled && !is_power_of_two(cols))
    throw std::invalid_argument("gen_dictionary: Hadamard dictionary needs power-of-two T");

  Rng rng(splitmix64(seed));
  Eigen::MatrixXcd d(rows, cols);

  switch (kind) {
    case DictionaryKind::Gaussian:
      for (int l = 0; l < rows; ++l)
        for (int i = 0; i < cols; ++i) d(l, i) = rng.cnormal();
      break;
    case DictionaryKind::HadamardSubsampled: {
      const Eigen::MatrixXd h = hadamard(cols);
      const std::vector<int> picks = subsample_rows(rng, rows, cols);
      for (int l = 0; l < rows; ++l) d.row(l) = h.row(picks[l]).cast<std::complex<double>>();
      break;
    }
    case DictionaryKind::DftSubsampled: {
      const std::vector<int> picks = subsample_rows(rng, rows, cols);
      for (int l = 0; l < rows; ++l)
        for (int i = 0; i < cols; ++i)
          d(l, i) = std::polar(1.0, -kTwoPi * static_cast<double>(picks[l]) * i / cols);
      break;
    }
    case DictionaryKind::ContinuousFourier:
      for (int l = 0; l < rows; ++l) {
        const double omega = rng.uniform01();
        for (int i = 0; i < cols; ++i) d(l, i) = std::polar(1.0, kTwoPi * omega * i);
      }
      break;
  }

  Dictionary dict{kind, std::move(d), 0.0, seed};
  dict.mu = coherence(dict);
  return dict;
}

double coherence(const Dictionary& dict) {
  // Hadamard, subsampled-DFT and continuous-Fourier rows are unit modulus by
  // construction, so mu is exactly one; reporting the floating-point max would
  // only add rounding noise.
  switch (dict.kind) {
    case DictionaryKind::Gaussian: return 6.0 * std::log(static_cast<double>(dict.cols()));
    case DictionaryKind::HadamardSubsampled:
    case DictionaryKind::DftSubsampled:
    case DictionaryKind::ContinuousFourier: return 1.0;
  }
  return empirical_max_row_energy(dict);
}

double empirical_max_row_energy(const Dictionary& dict) {
  return dict.matrix.array().abs2().maxCoeff();
}

double isotropy_deviation(const Dictionary& dict) {
  if (dict.rows() < dict.cols())
    throw std::invalid_argument("isotropy_deviation: needs rows >= T");
  const int t = dict.cols();
  Eigen::MatrixXcd moment = dict.matrix.adjoint() * dict.matrix / static_cast<double>(dict.rows());
  moment -= Eigen::MatrixXcd::Identity(t, t);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(moment, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace lanm
