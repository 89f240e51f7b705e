#include <doctest.h>

#include "lanm/rng.hpp"
#include "lanm/toeplitz.hpp"

using namespace lanm;
using cx = std::complex<double>;

namespace {

Eigen::MatrixXcd random_hermitian(int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.cnormal();
  return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST_CASE("1D M=2 has exactly two constraints") {
  DimensionSpec spec{{Dim{Axis::Aod, 2}, Dim{Axis::Delay, 3}}};
  // a pure 1D check on a size-2 angle grid
  DimensionSpec tiny{{Dim{Axis::Aod, 2}}};
  MultilevelDiagonals diags{RelaxationGrid::minimal(tiny)};
  CHECK(diags.count() == 2);
  // zero offset touches both diagonal cells, the +1 offset one cell
  CHECK(diags.diagonals()[diags.zero_index()].cells.size() == 2);
  (void)spec;
}

TEST_CASE("constraint count matches the canonical offset formula") {
  auto count = [](std::vector<Dim> dims) {
    DimensionSpec spec{std::move(dims)};
    return MultilevelDiagonals{RelaxationGrid::minimal(spec)}.count();
  };
  // (prod(2 n_d - 1) + 1) / 2 canonical offsets
  CHECK(count({Dim{Axis::Delay, 5}}) == 5);                         // (9+1)/2
  CHECK(count({Dim{Axis::Delay, 5}, Dim{Axis::Doppler, 3}}) == 23); // (9*5+1)/2
  CHECK(count({Dim{Axis::Aoa, 2}, Dim{Axis::Delay, 3}}) == 8);      // (3*5+1)/2
}

TEST_CASE("affine projection enforces the Dirac sums") {
  DimensionSpec spec{{Dim{Axis::Delay, 5}, Dim{Axis::Doppler, 3}}};
  MultilevelDiagonals diags{RelaxationGrid::minimal(spec)};
  Eigen::MatrixXcd q = random_hermitian(15, 3);
  diags.project_affine(q, 15.0);
  const Eigen::VectorXcd sums = diags.diagonal_sums(q);
  for (int i = 0; i < diags.count(); ++i) {
    const cx want = i == diags.zero_index() ? cx(15.0, 0.0) : cx(0.0, 0.0);
    CHECK(std::abs(sums[i] - want) < 1e-10);
  }
  CHECK((q - q.adjoint()).norm() < 1e-12);  // stays Hermitian

  // projection is idempotent
  Eigen::MatrixXcd q2 = q;
  diags.project_affine(q2, 15.0);
  CHECK((q - q2).norm() < 1e-12);
}

TEST_CASE("adjoint pairing against diagonal sums") {
  // <A*(lambda), Q> = sum_i [lambda_i conj(s_i) + conj(lambda_i) s_i] over
  // canonical off-diagonals plus the real zero-offset pairing.
  DimensionSpec spec{{Dim{Axis::Aod, 3}, Dim{Axis::Delay, 3}}};
  MultilevelDiagonals diags{RelaxationGrid::minimal(spec)};
  Rng rng(9);
  const Eigen::MatrixXcd q = random_hermitian(9, 4);
  Eigen::VectorXcd lambda(diags.count());
  for (int i = 0; i < diags.count(); ++i) lambda[i] = rng.cnormal();
  lambda[diags.zero_index()] = cx(lambda[diags.zero_index()].real(), 0.0);

  const Eigen::MatrixXcd at = diags.adjoint(lambda);
  const cx lhs = (at.conjugate().array() * q.array()).sum();
  const Eigen::VectorXcd sums = diags.diagonal_sums(q);
  cx rhs = 0.0;
  for (int i = 0; i < diags.count(); ++i) {
    if (i == diags.zero_index())
      rhs += lambda[i].real() * sums[i];
    else
      rhs += std::conj(lambda[i]) * sums[i] + lambda[i] * std::conj(sums[i]);
  }
  CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("relaxation degrees validate and embed") {
  DimensionSpec spec{{Dim{Axis::Aod, 2}, Dim{Axis::Delay, 5}}};
  CHECK_THROWS(RelaxationGrid::with_degrees(spec, {1, 5}));   // below minimal
  CHECK_THROWS(RelaxationGrid::with_degrees(spec, {2, 6}));   // even symmetric degree
  CHECK_THROWS(RelaxationGrid::with_degrees(spec, {2}));      // rank mismatch
  const RelaxationGrid g = RelaxationGrid::with_degrees(spec, {3, 7});
  CHECK(g.total == 21);
  const std::vector<int> map = g.embedding(spec);
  CHECK(static_cast<int>(map.size()) == 10);
  // the delay index j embeds centered: j = -2 (pos 0) -> pos 1 on size 7
  CHECK(map[0] == 1);
  // identity embedding for minimal degrees
  const RelaxationGrid min = RelaxationGrid::minimal(spec);
  const std::vector<int> idmap = min.embedding(spec);
  for (int i = 0; i < 10; ++i) CHECK(idmap[i] == i);
}
