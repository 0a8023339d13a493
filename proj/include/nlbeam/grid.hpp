#pragma once

#include <array>
#include <memory>

#include "nlbeam/types.hpp"

namespace nlbeam {

// Periodic grid on [-L/2, L/2)^dim with N points per axis.  Frequencies per
// axis follow FFT storage order: 0, 1, ..., N/2-1, -N/2, ..., -1 (in units of
// the fundamental 2*pi/L).  Flat storage is row-major: the last axis varies
// fastest.
class Grid {
 public:
  Grid() = default;

  int dim() const { return dim_; }
  int points_per_axis() const { return n_; }
  Real box_length() const { return length_; }
  Index size() const { return size_; }
  Real spacing() const { return length_ / n_; }
  Real fundamental() const { return two_pi_ / length_; }

  // Signed integer wavenumber for a per-axis storage index in [0, N).
  int axis_wavenumber(int axis_index) const {
    return axis_index < n_ / 2 ? axis_index : axis_index - n_;
  }

  // Physical coordinate of a per-axis sample index: x_j = -L/2 + j*h.
  Real axis_coordinate(int axis_index) const {
    return -length_ / 2 + axis_index * spacing();
  }

  // |xi| and |xi|^2 per flat index.
  const ArrayXr& abs_xi() const { return tables_->abs_xi; }
  const ArrayXr& abs_xi_sq() const { return tables_->abs_xi_sq; }
  Real max_abs_xi() const { return tables_->max_abs_xi; }

  // Decompose a flat index into per-axis storage indices (unused axes 0).
  std::array<int, 3> unflatten(Index flat) const {
    std::array<int, 3> ix{0, 0, 0};
    for (int axis = dim_ - 1; axis >= 0; --axis) {
      ix[axis] = static_cast<int>(flat % n_);
      flat /= n_;
    }
    return ix;
  }

  Index flatten(const std::array<int, 3>& ix) const {
    Index flat = 0;
    for (int axis = 0; axis < dim_; ++axis) flat = flat * n_ + ix[axis];
    return flat;
  }

  // Flat index of the reflected frequency -k.
  Index negate_index(Index flat) const {
    auto ix = unflatten(flat);
    for (int axis = 0; axis < dim_; ++axis) ix[axis] = (n_ - ix[axis]) % n_;
    return flatten(ix);
  }

  // True if the per-axis index hits the unpaired Nyquist row -N/2 on any axis.
  bool touches_nyquist(Index flat) const {
    auto ix = unflatten(flat);
    for (int axis = 0; axis < dim_; ++axis)
      if (ix[axis] == n_ / 2) return true;
    return false;
  }

  bool same_as(const Grid& other) const {
    return dim_ == other.dim_ && n_ == other.n_ && length_ == other.length_;
  }

  friend Grid make_grid(int dim, int points_per_axis, Real box_length);

 private:
  struct Tables {
    ArrayXr abs_xi;
    ArrayXr abs_xi_sq;
    Real max_abs_xi = 0;
  };

  static constexpr Real two_pi_ = 6.283185307179586476925286766559;

  int dim_ = 0;
  int n_ = 0;
  Real length_ = 0;
  Index size_ = 0;
  std::shared_ptr<const Tables> tables_;
};

Grid make_grid(int dim, int points_per_axis, Real box_length);

}  // namespace nlbeam
