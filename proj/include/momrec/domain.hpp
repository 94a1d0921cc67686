#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace momrec {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double v, double slack = 0.0) const {
    return v >= lo - slack && v <= hi + slack;
  }
};

// Axis-aligned product of intervals.
struct Box {
  std::vector<Interval> iv;

  int dim() const { return static_cast<int>(iv.size()); }
  bool contains(const Eigen::VectorXd& z, double slack = 0.0) const;
  // Throws std::invalid_argument on an empty interval (lo >= hi).
  void validate() const;
};

// z -> scale .* z + offset, componentwise.
struct AffineMap {
  Eigen::VectorXd scale;
  Eigen::VectorXd offset;

  int dim() const { return static_cast<int>(scale.size()); }
  Eigen::VectorXd apply(const Eigen::VectorXd& z) const;
  // Throws NumericalError when some scale entry vanishes.
  AffineMap inverse() const;
  Box image(const Box& b) const;
};

// The affine map sending `from` onto `to`, axis by axis, endpoints to
// endpoints.
AffineMap box_affinity(const Box& from, const Box& to);

Box unit_box(int dim);  // [-1, 1]^dim

enum class CoordKind { Time, Control, State };

// One named coordinate of a measure's ambient space. `ordinal` is 1-based
// within its kind, so labels read t, u1, u2, x1, ...
struct Coordinate {
  CoordKind kind = CoordKind::State;
  int ordinal = 1;
  Interval range;

  std::string label() const;
};

// Ordered ambient coordinates of a moment vector: optional time, then
// controls, then states.
struct CoordinateSystem {
  std::vector<Coordinate> coords;

  int dim() const { return static_cast<int>(coords.size()); }
  bool has_time() const;
  int n_states() const;
  int m_controls() const;
  Box box() const;
  // Position of a coordinate, -1 when absent.
  int find(CoordKind kind, int ordinal) const;
  CoordinateSystem subset(const std::vector<int>& positions) const;
  // Canonical ordering and consecutive 1-based ordinals, else throws.
  void validate() const;
  bool same_layout(const CoordinateSystem& other, double range_tol) const;
};

}  // namespace momrec
