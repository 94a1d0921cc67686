#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "momrec/domain.hpp"
#include "momrec/multi_index.hpp"

namespace momrec {

// Truncated moment sequence of a nonnegative measure on coords.box():
// values[i] = integral of z^indices[i] against the measure. Indices always
// run over the complete graded-lex enumeration up to `degree`.
struct MomentVector {
  CoordinateSystem coords;
  int degree = 0;
  std::vector<MultiIndex> indices;
  Eigen::VectorXd values;
  std::string source = "oracle";
  std::string problem_name;

  int dim() const { return coords.dim(); }
  double mass() const { return values.size() > 0 ? values[0] : 0.0; }
  std::optional<int> position(const MultiIndex& alpha) const;
  // Throws std::out_of_range when alpha is not enumerated.
  double value_at(const MultiIndex& alpha) const;
  // Degree even and >= 0, enumeration complete, values finite, mass() > 0.
  void validate() const;
};

MomentVector make_moment_vector(CoordinateSystem coords, int degree);

// Moments of the pushforward measure under map: if y represents mu, the
// result represents the measure of z -> map(z) applied to mu-distributed z.
// Mass is preserved; binomial expansion per coordinate, exact through
// `degree`.
MomentVector rescale_moments(const MomentVector& y, const AffineMap& map);

// Marginal onto the listed coordinate positions (ascending). Every retained
// value is a moment of the joint measure whose index is supported on
// `positions`.
MomentVector restrict_moments(const MomentVector& y,
                              const std::vector<int>& positions);

}  // namespace momrec
