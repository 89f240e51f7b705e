#include <doctest.h>

#include "lanm/dims.hpp"
#include "lanm/scene.hpp"

using namespace lanm;

TEST_CASE("canonical ordering and atom length") {
  DimensionSpec spec{{Dim{Axis::Delay, 5}, Dim{Axis::Aoa, 3}, Dim{Axis::Doppler, 5}, Dim{Axis::Aod, 3}}};
  CHECK(spec.atom_len() == 225);
  CHECK(spec.dims()[0].axis == Axis::Aoa);
  CHECK(spec.dims()[1].axis == Axis::Aod);
  CHECK(spec.dims()[2].axis == Axis::Delay);
  CHECK(spec.dims()[3].axis == Axis::Doppler);
}

TEST_CASE("symmetric axes need odd sizes") {
  CHECK_THROWS(DimensionSpec{{Dim{Axis::Delay, 4}}});
  CHECK_THROWS(DimensionSpec{{Dim{Axis::Doppler, 6}}});
  CHECK_NOTHROW(DimensionSpec{{Dim{Axis::Aod, 4}, Dim{Axis::Delay, 5}}});
}

TEST_CASE("size and duplicate validation") {
  CHECK_THROWS(DimensionSpec{{Dim{Axis::Aoa, 1}, Dim{Axis::Delay, 5}}});
  CHECK_THROWS(DimensionSpec{{Dim{Axis::Delay, 5}, Dim{Axis::Delay, 7}}});
  CHECK_THROWS(DimensionSpec{std::vector<Dim>{}});
}

TEST_CASE("flatten and unflatten round trip") {
  DimensionSpec spec{{Dim{Axis::Aoa, 3}, Dim{Axis::Delay, 5}}};
  for (int flat = 0; flat < spec.atom_len(); ++flat)
    CHECK(spec.flatten(spec.unflatten(flat)) == flat);
}

TEST_CASE("signed index ranges") {
  DimensionSpec spec{{Dim{Axis::Aoa, 3}, Dim{Axis::Delay, 5}}};
  CHECK(spec.index_at(0, 0) == 0);   // angle axis: {0..n-1}
  CHECK(spec.index_at(0, 2) == 2);
  CHECK(spec.index_at(1, 0) == -2);  // delay axis: {-N..N}
  CHECK(spec.index_at(1, 4) == 2);
  CHECK(spec.exponent_sign(1) == -1);
  CHECK(spec.exponent_sign(0) == +1);
}

TEST_CASE("wrap distance symmetry and bound") {
  CHECK(wrap_dist(0.1, 0.9) == doctest::Approx(0.2));
  CHECK(wrap_dist(0.0, 0.999) == doctest::Approx(0.001));
  for (double a : {0.0, 0.3, 0.77})
    for (double b : {0.1, 0.5, 0.92}) {
      CHECK(wrap_dist(a, b) == doctest::Approx(wrap_dist(b, a)));
      CHECK(wrap_dist(a, b) <= 0.5 + 1e-15);
    }
}

TEST_CASE("separation threshold matches the aperture") {
  DimensionSpec spec{{Dim{Axis::Delay, 65}}};
  CHECK(spec.separation_threshold() == doctest::Approx(10.0 / 64.0));
}

TEST_CASE("scene separation uses the max-coordinate metric") {
  DimensionSpec spec{{Dim{Axis::Delay, 5}, Dim{Axis::Doppler, 5}}};
  TargetScene scene{SceneConfig{spec, 2, 2}, {}, {}};
  scene.targets.push_back({{0.1, 0.1}, 1.0});
  scene.targets.push_back({{0.15, 0.6}, 1.0});
  CHECK(scene.min_separation() == doctest::Approx(0.5));
}
