#include "momrec/moment_vector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "momrec/errors.hpp"

namespace momrec {

namespace {

std::string index_string(const MultiIndex& a) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
  os << ")";
  return os.str();
}

}  // namespace

std::optional<int> MomentVector::position(const MultiIndex& alpha) const {
  if (static_cast<int>(alpha.size()) != dim()) return std::nullopt;
  auto it = std::lower_bound(indices.begin(), indices.end(), alpha,
                             graded_lex_less);
  if (it == indices.end() || *it != alpha) return std::nullopt;
  return static_cast<int>(it - indices.begin());
}

double MomentVector::value_at(const MultiIndex& alpha) const {
  auto p = position(alpha);
  if (!p) {
    throw std::out_of_range("moment index " + index_string(alpha) +
                            " not present (degree " + std::to_string(degree) +
                            ")");
  }
  return values[*p];
}

void MomentVector::validate() const {
  coords.validate();
  if (degree < 0 || degree % 2 != 0) {
    throw std::invalid_argument("moment degree must be even and nonnegative");
  }
  const auto expected = enumerate_indices(dim(), degree);
  if (indices != expected) {
    throw std::invalid_argument(
        "moment indices are not the complete graded-lex enumeration");
  }
  if (values.size() != static_cast<Eigen::Index>(indices.size())) {
    throw std::invalid_argument("moment value count mismatch");
  }
  if (!values.allFinite()) {
    throw std::invalid_argument("non-finite moment value");
  }
  if (!(values[0] > 0.0)) {
    throw std::invalid_argument("zero-index moment (mass) must be positive");
  }
}

MomentVector make_moment_vector(CoordinateSystem coords, int degree) {
  if (degree < 0) throw std::invalid_argument("negative moment degree");
  MomentVector y;
  y.coords = std::move(coords);
  y.coords.validate();
  y.degree = degree;
  y.indices = enumerate_indices(y.dim(), degree);
  y.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(y.indices.size()));
  return y;
}

MomentVector rescale_moments(const MomentVector& y, const AffineMap& map) {
  if (map.dim() != y.dim()) {
    throw std::invalid_argument("rescale_moments: dimension mismatch");
  }
  for (int c = 0; c < map.dim(); ++c) {
    if (map.scale[c] == 0.0) {
      throw NumericalError("rescale_moments: non-invertible map");
    }
  }
  const int q = y.dim();
  const int d = y.degree;

  CoordinateSystem cs = y.coords;
  const Box mapped = map.image(cs.box());
  for (int c = 0; c < q; ++c) cs.coords[c].range = mapped.iv[c];
  MomentVector out = make_moment_vector(cs, d);
  out.source = y.source;
  out.problem_name = y.problem_name;

  // Power tables for scale and offset up to the degree.
  Eigen::MatrixXd ps(q, d + 1), po(q, d + 1);
  for (int c = 0; c < q; ++c) {
    ps(c, 0) = 1.0;
    po(c, 0) = 1.0;
    for (int e = 1; e <= d; ++e) {
      ps(c, e) = ps(c, e - 1) * map.scale[c];
      po(c, e) = po(c, e - 1) * map.offset[c];
    }
  }

  // (a z + b)^alpha expands over beta <= alpha with binomial weights.
  for (size_t i = 0; i < out.indices.size(); ++i) {
    const MultiIndex& alpha = out.indices[i];
    MultiIndex beta(q, 0);
    double acc = 0.0;
    while (true) {
      double coeff = 1.0;
      for (int c = 0; c < q; ++c) {
        coeff *= static_cast<double>(binomial(alpha[c], beta[c])) *
                 ps(c, beta[c]) * po(c, alpha[c] - beta[c]);
      }
      acc += coeff * y.values[*y.position(beta)];
      int c = q - 1;
      while (c >= 0) {
        if (beta[c] < alpha[c]) {
          ++beta[c];
          break;
        }
        beta[c] = 0;
        --c;
      }
      if (c < 0) break;
    }
    out.values[static_cast<Eigen::Index>(i)] = acc;
  }
  return out;
}

MomentVector restrict_moments(const MomentVector& y,
                              const std::vector<int>& positions) {
  if (positions.empty()) {
    throw std::invalid_argument("restrict_moments: empty position list");
  }
  CoordinateSystem sub = y.coords.subset(positions);
  MomentVector out = make_moment_vector(sub, y.degree);
  out.source = y.source;
  out.problem_name = y.problem_name;

  std::vector<char> keep(y.dim(), 0);
  for (int p : positions) keep[p] = 1;
  MultiIndex proj(positions.size());
  for (size_t i = 0; i < y.indices.size(); ++i) {
    const MultiIndex& alpha = y.indices[i];
    bool supported = true;
    for (int c = 0; c < y.dim() && supported; ++c) {
      if (alpha[c] != 0 && !keep[c]) supported = false;
    }
    if (!supported) continue;
    for (size_t k = 0; k < positions.size(); ++k) proj[k] = alpha[positions[k]];
    out.values[*out.position(proj)] = y.values[static_cast<Eigen::Index>(i)];
  }
  return out;
}

}  // namespace momrec
