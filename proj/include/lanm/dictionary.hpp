#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace lanm {

enum class DictionaryKind { Gaussian, HadamardSubsampled, DftSubsampled, ContinuousFourier };

const char* dictionary_kind_name(DictionaryKind kind);
std::optional<DictionaryKind> dictionary_kind_from_name(std::string_view name);

// Compression matrix D with rows d_l^H; the transmit coefficients seen by the
// measurements are (D h)_l = d_l^H h. Rows are drawn i.i.d. from a population
// with E[d d^H] = I_T and coherence mu = max |entry|^2 bound.
struct Dictionary {
  DictionaryKind kind;
  Eigen::MatrixXcd matrix;  // rows x T
  double mu;                // coherence value reported for this kind
  std::uint64_t seed;

  int rows() const { return static_cast<int>(matrix.rows()); }
  int cols() const { return static_cast<int>(matrix.cols()); }
};

// rows >= cols required for subsampled kinds; Hadamard needs power-of-two cols.
Dictionary gen_dictionary(DictionaryKind kind, int rows, int cols, std::uint64_t seed);

// Unit-modulus kinds have mu = 1 exactly; the Gaussian ensemble reports the
// analytic bound 6 log T.
double coherence(const Dictionary& dict);

// Largest squared entry magnitude actually drawn.
double empirical_max_row_energy(const Dictionary& dict);

// Spectral-norm distance of the empirical second moment (1/rows) D^H D from I_T.
double isotropy_deviation(const Dictionary& dict);

}  // namespace lanm
