#include "lanm/dims.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lanm {

const char* axis_name(Axis axis) {
  switch (axis) {
    case Axis::Aoa: return "aoa";
    case Axis::Aod: return "aod";
    case Axis::Delay: return "delay";
    case Axis::Doppler: return "doppler";
  }
  return "?";
}

std::optional<Axis> axis_from_name(std::string_view name) {
  if (name == "aoa") return Axis::Aoa;
  if (name == "aod") return Axis::Aod;
  if (name == "delay") return Axis::Delay;
  if (name == "doppler") return Axis::Doppler;
  return std::nullopt;
}

DimensionSpec::DimensionSpec(std::vector<Dim> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("DimensionSpec: at least one dimension required");
  std::sort(dims_.begin(), dims_.end(),
            [](const Dim& a, const Dim& b) { return static_cast<int>(a.axis) < static_cast<int>(b.axis); });
  for (std::size_t i = 1; i < dims_.size(); ++i)
    if (dims_[i].axis == dims_[i - 1].axis)
      throw std::invalid_argument("DimensionSpec: duplicate axis");

  atom_len_ = 1;
  origins_.resize(dims_.size());
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    const Dim& dim = dims_[d];
    if (dim.size < 2) throw std::invalid_argument("DimensionSpec: every size must be >= 2");
    const bool symmetric = dim.axis == Axis::Delay || dim.axis == Axis::Doppler;
    if (symmetric && dim.size % 2 == 0)
      throw std::invalid_argument(std::string("DimensionSpec: ") + axis_name(dim.axis) +
                                  " uses the symmetric range {-N..N}; size must be odd");
    origins_[d] = symmetric ? (dim.size - 1) / 2 : 0;
    atom_len_ *= dim.size;
  }
}

bool DimensionSpec::has(Axis axis) const {
  for (const Dim& d : dims_)
    if (d.axis == axis) return true;
  return false;
}

int DimensionSpec::size_of(Axis axis) const {
  for (const Dim& d : dims_)
    if (d.axis == axis) return d.size;
  return 0;
}

int DimensionSpec::flatten(const std::vector<int>& pos) const {
  if (pos.size() != dims_.size()) throw std::invalid_argument("flatten: position rank mismatch");
  int flat = 0;
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    if (pos[d] < 0 || pos[d] >= dims_[d].size) throw std::out_of_range("flatten: position out of range");
    flat = flat * dims_[d].size + pos[d];
  }
  return flat;
}

std::vector<int> DimensionSpec::unflatten(int flat) const {
  std::vector<int> pos(dims_.size());
  for (int d = static_cast<int>(dims_.size()) - 1; d >= 0; --d) {
    pos[d] = flat % dims_[d].size;
    flat /= dims_[d].size;
  }
  return pos;
}

double DimensionSpec::separation_threshold() const {
  return 10.0 / (static_cast<double>(atom_len_) - 1.0);
}

bool DimensionSpec::operator==(const DimensionSpec& other) const {
  if (dims_.size() != other.dims_.size()) return false;
  for (std::size_t d = 0; d < dims_.size(); ++d)
    if (dims_[d].axis != other.dims_[d].axis || dims_[d].size != other.dims_[d].size) return false;
  return true;
}

double wrap_dist(double a, double b) {
  double d = std::abs(a - b);
  d -= std::floor(d);  // tolerate inputs outside [0,1)
  return std::min(d, 1.0 - d);
}

double wrap_max_dist(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("wrap_max_dist: rank mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, wrap_dist(a[i], b[i]));
  return m;
}

}  // namespace lanm
