#include <doctest.h>

#include <cmath>

#include "lanm/dictionary.hpp"

using namespace lanm;

TEST_CASE("unit-modulus kinds have coherence exactly one") {
  for (auto kind : {DictionaryKind::HadamardSubsampled, DictionaryKind::DftSubsampled,
                    DictionaryKind::ContinuousFourier}) {
    const Dictionary d = gen_dictionary(kind, 16, 4, 3);
    CHECK(d.mu == 1.0);
    CHECK(coherence(d) == 1.0);
    CHECK(empirical_max_row_energy(d) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("gaussian coherence is the analytic bound") {
  const Dictionary d = gen_dictionary(DictionaryKind::Gaussian, 32, 8, 1);
  CHECK(d.mu == doctest::Approx(6.0 * std::log(8.0)));
}

TEST_CASE("mu T >= 1 for generated dictionaries") {
  for (auto kind : {DictionaryKind::Gaussian, DictionaryKind::HadamardSubsampled,
                    DictionaryKind::DftSubsampled, DictionaryKind::ContinuousFourier}) {
    const Dictionary d = gen_dictionary(kind, 16, 4, 9);
    CHECK(d.mu * d.cols() >= 1.0);
  }
}

TEST_CASE("gaussian empirical coherence bound over a seed sweep") {
  // 6 log T bounds the empirical max squared entry in nearly all draws at
  // desk-scale row counts.
  int ok = 0;
  const int t = 8, rows = 16, seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    const Dictionary d = gen_dictionary(DictionaryKind::Gaussian, rows, t, 100 + s);
    if (empirical_max_row_energy(d) <= 6.0 * std::log(static_cast<double>(t))) ++ok;
  }
  CHECK(ok >= 99);
}

TEST_CASE("determinism: same parameters give the identical matrix") {
  for (auto kind : {DictionaryKind::Gaussian, DictionaryKind::HadamardSubsampled,
                    DictionaryKind::DftSubsampled, DictionaryKind::ContinuousFourier}) {
    const Dictionary a = gen_dictionary(kind, 12, 4, 77);
    const Dictionary b = gen_dictionary(kind, 12, 4, 77);
    CHECK((a.matrix - b.matrix).norm() == 0.0);
    const Dictionary c = gen_dictionary(kind, 12, 4, 78);
    CHECK((a.matrix - c.matrix).norm() != 0.0);
  }
}

TEST_CASE("isotropy deviation") {
  SUBCASE("full orthogonal sampling is exactly isotropic") {
    // rows = cols with every DFT row used once: (1/T) D^H D = I
    Dictionary d = gen_dictionary(DictionaryKind::DftSubsampled, 4, 4, 1);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        d.matrix(r, c) = std::polar(1.0, -2.0 * M_PI * r * c / 4.0);
    CHECK(isotropy_deviation(d) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("gaussian second moment concentrates") {
    for (int s = 0; s < 20; ++s) {
      const Dictionary d = gen_dictionary(DictionaryKind::Gaussian, 4096, 4, 500 + s);
      CHECK(isotropy_deviation(d) <= 0.2);
    }
  }
  SUBCASE("rank-one rows are maximally anisotropic") {
    Dictionary d = gen_dictionary(DictionaryKind::Gaussian, 8, 4, 1);
    d.matrix.setZero();
    d.matrix.col(0).setConstant(2.0);  // ||row||^2 = T, all mass on one coordinate
    CHECK(isotropy_deviation(d) == doctest::Approx(3.0));  // T - 1
  }
}

TEST_CASE("generation errors") {
  CHECK_THROWS(gen_dictionary(DictionaryKind::HadamardSubsampled, 8, 3, 1));  // not a power of two
  CHECK_THROWS(gen_dictionary(DictionaryKind::HadamardSubsampled, 2, 4, 1));  // T > rows
  CHECK_THROWS(gen_dictionary(DictionaryKind::DftSubsampled, 2, 4, 1));
  CHECK_NOTHROW(gen_dictionary(DictionaryKind::Gaussian, 4, 4, 1));
}

TEST_CASE("kind names round trip") {
  for (auto kind : {DictionaryKind::Gaussian, DictionaryKind::HadamardSubsampled,
                    DictionaryKind::DftSubsampled, DictionaryKind::ContinuousFourier})
    CHECK(dictionary_kind_from_name(dictionary_kind_name(kind)) == kind);
  CHECK(!dictionary_kind_from_name("nope").has_value());
}
