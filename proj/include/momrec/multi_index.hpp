#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace momrec {

// Exponent vector of a monomial z^alpha over some coordinate ambient.
using MultiIndex = std::vector<int>;

std::int64_t binomial(int n, int k);

int index_degree(const MultiIndex& a);

// Graded lexicographic order: lower total degree first; within a degree,
// the index whose first differing entry is larger comes first, so for two
// variables degree 2 lists (2,0), (1,1), (0,2).
bool graded_lex_less(const MultiIndex& a, const MultiIndex& b);

// All multi-indices of dimension q with total degree <= d, in graded
// lexicographic order. Count is binomial(q + d, d).
std::vector<MultiIndex> enumerate_indices(int q, int d);

// z^alpha by repeated multiplication. Dimension mismatch throws.
double monomial_eval(std::span<const double> z, const MultiIndex& alpha);

}  // namespace momrec
