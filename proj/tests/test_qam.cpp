#include <doctest.h>

#include <cmath>

#include "lanm/qam.hpp"
#include "lanm/rng.hpp"

using namespace lanm;
using cx = std::complex<double>;

TEST_CASE("4-QAM constellation is the unit-energy quadrature set") {
  const Constellation& c = qam_constellation(4);
  const double s = 1.0 / std::sqrt(2.0);
  for (const cx want : {cx(-s, -s), cx(-s, s), cx(s, -s), cx(s, s)}) {
    bool found = false;
    for (int i = 0; i < 4; ++i) found = found || std::abs(c.points[i] - want) < 1e-12;
    CHECK(found);
  }
  CHECK(c.points[c.reference_index] == cx(s, s));
}

TEST_CASE("constellations have unit average energy and ordered min distance") {
  double prev_min = 1e9;
  for (int order : {4, 16, 64}) {
    const Constellation& c = qam_constellation(order);
    CHECK(c.points.squaredNorm() / order == doctest::Approx(1.0));
    CHECK(c.min_distance < prev_min);  // denser constellations are less robust
    prev_min = c.min_distance;
  }
  CHECK_THROWS(qam_constellation(8));
}

TEST_CASE("encode fixes the pilot and normalizes") {
  const SymbolStream s = encode(16, 8, 42);
  CHECK(s.h.norm() == doctest::Approx(1.0));
  CHECK(s.indices[0] == qam_constellation(16).reference_index);
  CHECK(static_cast<int>(s.indices.size()) == 8);
  CHECK_THROWS(encode(4, 1, 1));
  CHECK_THROWS(encode(5, 8, 1));
}

TEST_CASE("encode/demap round trip at any scale") {
  const SymbolStream s = encode(4, 6, 7);
  CHECK(demap(s.h * s.raw.norm(), 4) == s.indices);
  CHECK(demap(s.h, 4) == s.indices);  // pilot fixes the scale too
}

TEST_CASE("demap is invariant to a global phase") {
  const SymbolStream s = encode(16, 10, 13);
  for (double psi : {0.1, 1.0, 2.5, 4.4, 6.0})
    CHECK(demap(std::polar(1.0, psi) * s.h, 16) == s.indices);
}

TEST_CASE("perturbations below half the scaled decision distance decode exactly") {
  const SymbolStream s = encode(4, 8, 3);
  const Constellation& c = qam_constellation(4);
  // h lives at scale 1/||raw||; stay safely inside the scaled decision radius,
  // keeping the pilot untouched so the reference estimate is unchanged.
  const double radius = 0.45 * c.min_distance / s.raw.norm();
  Rng rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::VectorXcd noise(8);
    for (int i = 0; i < 8; ++i) noise[i] = rng.cnormal();
    noise[0] = 0.0;
    noise *= radius / std::max(noise.norm(), 1e-12);
    CHECK(demap(s.h + noise, 4) == s.indices);
  }
}

TEST_CASE("different seeds give different streams") {
  CHECK(encode(4, 16, 1).indices != encode(4, 16, 2).indices);
}

TEST_CASE("demap rejects degenerate input") {
  CHECK_THROWS(demap(Eigen::VectorXcd::Zero(4), 4));
}
