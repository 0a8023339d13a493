#include "nlbeam/grid.hpp"

#include <cmath>

namespace nlbeam {

Grid make_grid(int dim, int points_per_axis, Real box_length) {
  if (dim < 1 || dim > 3)
    throw ConfigError("grid dimension must be 1, 2, or 3; got " +
                      std::to_string(dim));
  if (points_per_axis < 8 || points_per_axis % 2 != 0)
    throw ConfigError("points per axis must be even and >= 8; got " +
                      std::to_string(points_per_axis));
  if (!(box_length > 0) || !std::isfinite(box_length))
    throw ConfigError("box length must be positive and finite");

  Grid g;
  g.dim_ = dim;
  g.n_ = points_per_axis;
  g.length_ = box_length;
  g.size_ = 1;
  for (int axis = 0; axis < dim; ++axis) g.size_ *= points_per_axis;

  auto tables = std::make_shared<Grid::Tables>();
  tables->abs_xi_sq.resize(g.size_);
  const Real k0 = g.fundamental();
  for (Index flat = 0; flat < g.size_; ++flat) {
    auto ix = g.unflatten(flat);
    Real sq = 0;
    for (int axis = 0; axis < dim; ++axis) {
      const Real xi = k0 * g.axis_wavenumber(ix[axis]);
      sq += xi * xi;
    }
    tables->abs_xi_sq[flat] = sq;
  }
  tables->abs_xi = tables->abs_xi_sq.sqrt();
  tables->max_abs_xi = tables->abs_xi.maxCoeff();
  g.tables_ = std::move(tables);
  return g;
}

}  // namespace nlbeam
