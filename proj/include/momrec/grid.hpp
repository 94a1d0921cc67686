#pragma once

#include <Eigen/Dense>
#include <vector>

#include "momrec/domain.hpp"

namespace momrec {

// Uniform tensor grid over a coordinate system's box, endpoints included.
// Column ordering is odometer style with the last axis fastest. eps holds
// half the spacing per axis: every box point is within eps of the grid,
// coordinatewise.
struct Grid {
  CoordinateSystem coords;
  std::vector<int> shape;
  Eigen::MatrixXd points;  // dim x size
  Eigen::VectorXd eps;

  int dim() const { return coords.dim(); }
  int size() const { return static_cast<int>(points.cols()); }
  std::vector<double> axis_values(int axis) const;
};

// points_per_axis entries must each be >= 2; intervals must be
// nondegenerate.
Grid build_grid(const CoordinateSystem& coords,
                const std::vector<int>& points_per_axis);

}  // namespace momrec
