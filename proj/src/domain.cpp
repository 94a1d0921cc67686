#include "momrec/domain.hpp"

#include <stdexcept>

#include "momrec/errors.hpp"

namespace momrec {

bool Box::contains(const Eigen::VectorXd& z, double slack) const {
  if (z.size() != dim()) {
    throw std::invalid_argument("Box::contains: dimension mismatch");
  }
  for (int i = 0; i < dim(); ++i) {
    if (!iv[i].contains(z[i], slack)) return false;
  }
  return true;
}

void Box::validate() const {
  for (int i = 0; i < dim(); ++i) {
    if (!(iv[i].lo < iv[i].hi)) {
      throw std::invalid_argument("degenerate interval in box (coordinate " +
                                  std::to_string(i) + ")");
    }
  }
}

Eigen::VectorXd AffineMap::apply(const Eigen::VectorXd& z) const {
  if (z.size() != scale.size()) {
    throw std::invalid_argument("AffineMap::apply: dimension mismatch");
  }
  return scale.cwiseProduct(z) + offset;
}

AffineMap AffineMap::inverse() const {
  for (int i = 0; i < dim(); ++i) {
    if (scale[i] == 0.0) {
      throw NumericalError("affine map is not invertible (zero scale)");
    }
  }
  AffineMap inv;
  inv.scale = scale.cwiseInverse();
  inv.offset = -offset.cwiseProduct(inv.scale);
  return inv;
}

Box AffineMap::image(const Box& b) const {
  if (b.dim() != dim()) {
    throw std::invalid_argument("AffineMap::image: dimension mismatch");
  }
  Box out = b;
  for (int i = 0; i < dim(); ++i) {
    const double a = scale[i] * b.iv[i].lo + offset[i];
    const double c = scale[i] * b.iv[i].hi + offset[i];
    out.iv[i] = {std::min(a, c), std::max(a, c)};
  }
  return out;
}

AffineMap box_affinity(const Box& from, const Box& to) {
  if (from.dim() != to.dim()) {
    throw std::invalid_argument("box_affinity: dimension mismatch");
  }
  from.validate();
  to.validate();
  const int d = from.dim();
  AffineMap map;
  map.scale.resize(d);
  map.offset.resize(d);
  for (int i = 0; i < d; ++i) {
    map.scale[i] = to.iv[i].length() / from.iv[i].length();
    map.offset[i] = to.iv[i].lo - map.scale[i] * from.iv[i].lo;
  }
  return map;
}

Box unit_box(int dim) {
  Box b;
  b.iv.assign(dim, Interval{-1.0, 1.0});
  return b;
}

std::string Coordinate::label() const {
  switch (kind) {
    case CoordKind::Time:
      return "t";
    case CoordKind::Control:
      return "u" + std::to_string(ordinal);
    case CoordKind::State:
      return "x" + std::to_string(ordinal);
  }
  return "?";
}

bool CoordinateSystem::has_time() const {
  return !coords.empty() && coords.front().kind == CoordKind::Time;
}

int CoordinateSystem::n_states() const {
  int n = 0;
  for (const auto& c : coords) n += (c.kind == CoordKind::State) ? 1 : 0;
  return n;
}

int CoordinateSystem::m_controls() const {
  int m = 0;
  for (const auto& c : coords) m += (c.kind == CoordKind::Control) ? 1 : 0;
  return m;
}

Box CoordinateSystem::box() const {
  Box b;
  b.iv.reserve(coords.size());
  for (const auto& c : coords) b.iv.push_back(c.range);
  return b;
}

int CoordinateSystem::find(CoordKind kind, int ordinal) const {
  for (int i = 0; i < dim(); ++i) {
    if (coords[i].kind == kind && coords[i].ordinal == ordinal) return i;
  }
  return -1;
}

CoordinateSystem CoordinateSystem::subset(
    const std::vector<int>& positions) const {
  CoordinateSystem out;
  int prev = -1;
  for (int p : positions) {
    if (p <= prev) {
      throw std::invalid_argument(
          "coordinate subset positions must be ascending");
    }
    if (p < 0 || p >= dim()) {
      throw std::invalid_argument("coordinate subset position out of range");
    }
    out.coords.push_back(coords[p]);
    prev = p;
  }
  return out;
}

void CoordinateSystem::validate() const {
  if (coords.empty()) {
    throw std::invalid_argument("empty coordinate system");
  }
  box().validate();
  int seen_time = 0, last_u = 0, last_x = 0;
  int phase = 0;  // 0 time, 1 controls, 2 states
  for (const auto& c : coords) {
    switch (c.kind) {
      case CoordKind::Time:
        if (phase > 0 || seen_time) {
          throw std::invalid_argument("time coordinate out of order");
        }
        if (c.ordinal != 1) {
          throw std::invalid_argument("time coordinate must have ordinal 1");
        }
        seen_time = 1;
        break;
      case CoordKind::Control:
        if (phase > 1) {
          throw std::invalid_argument("control coordinate after states");
        }
        phase = 1;
        if (c.ordinal <= last_u) {
          throw std::invalid_argument("control ordinals must ascend");
        }
        last_u = c.ordinal;
        break;
      case CoordKind::State:
        phase = 2;
        if (c.ordinal <= last_x) {
          throw std::invalid_argument("state ordinals must ascend");
        }
        last_x = c.ordinal;
        break;
    }
  }
}

bool CoordinateSystem::same_layout(const CoordinateSystem& other,
                                   double range_tol) const {
  if (dim() != other.dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    const auto& a = coords[i];
    const auto& b = other.coords[i];
    if (a.kind != b.kind || a.ordinal != b.ordinal) return false;
    if (std::abs(a.range.lo - b.range.lo) > range_tol) return false;
    if (std::abs(a.range.hi - b.range.hi) > range_tol) return false;
  }
  return true;
}

}  // namespace momrec
