#pragma once

#include <span>
#include <vector>

#include "momrec/domain.hpp"
#include "momrec/multi_index.hpp"

namespace momrec {

struct PolyTerm {
  double coeff = 0.0;
  MultiIndex alpha;
};

// Sparse polynomial over a fixed ambient dimension.
struct Polynomial {
  int dim = 0;
  std::vector<PolyTerm> terms;

  void add_term(double coeff, MultiIndex alpha);
  double eval(std::span<const double> z) const;
  Polynomial partial(int coord) const;
  int degree() const;
  // Merge duplicate indices, drop zero coefficients, sort graded-lex.
  Polynomial canonical() const;
};

// q(z) = p(map(z)): substitute each coordinate by its affine image and
// expand. Degree is preserved.
Polynomial substitute_affine(const Polynomial& p, const AffineMap& map);

}  // namespace momrec
