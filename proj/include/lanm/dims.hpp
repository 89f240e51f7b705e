#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lanm {

// Parameter axes in the fixed Kronecker order (outermost factor first).
// Every module indexes atoms with this ordering.
enum class Axis : int { Aoa = 0, Aod = 1, Delay = 2, Doppler = 3 };

const char* axis_name(Axis axis);
std::optional<Axis> axis_from_name(std::string_view name);

struct Dim {
  Axis axis;
  int size;
};

// The set of active parameter dimensions. Angle axes use one-sided index
// ranges {0..n-1}; delay and doppler use the symmetric range {-N..N}, so their
// sizes must be odd. Construction normalizes the dimension list to canonical
// order and validates sizes.
class DimensionSpec {
 public:
  // Placeholder state for deferred initialization (file parsing, configs);
  // every operation on an empty spec is invalid.
  DimensionSpec() = default;
  explicit DimensionSpec(std::vector<Dim> dims);

  int atom_len() const { return atom_len_; }
  int ndim() const { return static_cast<int>(dims_.size()); }
  const std::vector<Dim>& dims() const { return dims_; }

  bool has(Axis axis) const;
  int size_of(Axis axis) const;  // 0 when the axis is inactive
  int delay_len() const { return size_of(Axis::Delay); }

  // Signed atom index for grid position pos in dimension d.
  int index_at(int d, int pos) const { return pos - origins_[d]; }
  int origin(int d) const { return origins_[d]; }
  // Exponent sign of the steering factor: delay runs e^{-i2pi j tau},
  // every other axis e^{+i2pi k tau}.
  int exponent_sign(int d) const { return dims_[d].axis == Axis::Delay ? -1 : +1; }

  int flatten(const std::vector<int>& pos) const;
  std::vector<int> unflatten(int flat) const;

  // Assumption-3 style separation threshold 10/(aperture-1) with the virtual
  // aperture taken as the product of the active dimension lengths.
  double separation_threshold() const;

  bool operator==(const DimensionSpec& other) const;

 private:
  std::vector<Dim> dims_;
  std::vector<int> origins_;
  int atom_len_ = 0;
};

// Distance on the unit torus.
double wrap_dist(double a, double b);
// Max-over-coordinates torus distance between two shift vectors.
double wrap_max_dist(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace lanm
