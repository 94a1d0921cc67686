#include "momrec/grid.hpp"

#include <stdexcept>

namespace momrec {

std::vector<double> Grid::axis_values(int axis) const {
  if (axis < 0 || axis >= dim()) {
    throw std::invalid_argument("grid axis out of range");
  }
  const Interval r = coords.coords[axis].range;
  const int c = shape[axis];
  std::vector<double> v(c);
  const double h = r.length() / (c - 1);
  for (int i = 0; i < c; ++i) v[i] = r.lo + h * i;
  v[c - 1] = r.hi;
  return v;
}

Grid build_grid(const CoordinateSystem& coords,
                const std::vector<int>& points_per_axis) {
  coords.validate();
  if (static_cast<int>(points_per_axis.size()) != coords.dim()) {
    throw std::invalid_argument("points_per_axis must match grid dimension");
  }
  long long total = 1;
  for (int c : points_per_axis) {
    if (c < 2) throw std::invalid_argument("need at least 2 points per axis");
    total *= c;
    if (total > (1LL << 40)) {
      throw std::invalid_argument("grid size overflow");
    }
  }

  Grid g;
  g.coords = coords;
  g.shape = points_per_axis;
  g.eps.resize(coords.dim());
  std::vector<std::vector<double>> axes(coords.dim());
  for (int c = 0; c < coords.dim(); ++c) {
    axes[c] = g.axis_values(c);  // uses shape, set above
    g.eps[c] = 0.5 * coords.coords[c].range.length() / (points_per_axis[c] - 1);
  }

  g.points.resize(coords.dim(), total);
  std::vector<int> idx(coords.dim(), 0);
  for (long long p = 0; p < total; ++p) {
    for (int c = 0; c < coords.dim(); ++c) g.points(c, p) = axes[c][idx[c]];
    // Odometer, last axis fastest.
    int c = coords.dim() - 1;
    while (c >= 0) {
      if (++idx[c] < points_per_axis[c]) break;
      idx[c] = 0;
      --c;
    }
  }
  return g;
}

}  // namespace momrec
