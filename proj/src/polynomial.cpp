#include "momrec/polynomial.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace momrec {

void Polynomial::add_term(double coeff, MultiIndex alpha) {
  if (static_cast<int>(alpha.size()) != dim) {
    throw std::invalid_argument("polynomial term dimension mismatch");
  }
  for (int e : alpha) {
    if (e < 0) throw std::invalid_argument("negative exponent in term");
  }
  terms.push_back({coeff, std::move(alpha)});
}

double Polynomial::eval(std::span<const double> z) const {
  if (static_cast<int>(z.size()) != dim) {
    throw std::invalid_argument("polynomial eval dimension mismatch");
  }
  double r = 0.0;
  for (const auto& t : terms) r += t.coeff * monomial_eval(z, t.alpha);
  return r;
}

Polynomial Polynomial::partial(int coord) const {
  if (coord < 0 || coord >= dim) {
    throw std::invalid_argument("partial: coordinate out of range");
  }
  Polynomial d;
  d.dim = dim;
  for (const auto& t : terms) {
    if (t.alpha[coord] == 0) continue;
    MultiIndex a = t.alpha;
    const double c = t.coeff * a[coord];
    a[coord] -= 1;
    d.terms.push_back({c, std::move(a)});
  }
  return d;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms) d = std::max(d, index_degree(t.alpha));
  return d;
}

Polynomial Polynomial::canonical() const {
  std::map<MultiIndex, double, bool (*)(const MultiIndex&, const MultiIndex&)>
      merged(graded_lex_less);
  for (const auto& t : terms) merged[t.alpha] += t.coeff;
  Polynomial out;
  out.dim = dim;
  for (const auto& [alpha, coeff] : merged) {
    if (coeff != 0.0) out.terms.push_back({coeff, alpha});
  }
  return out;
}

Polynomial substitute_affine(const Polynomial& p, const AffineMap& map) {
  if (map.dim() != p.dim) {
    throw std::invalid_argument("substitute_affine: dimension mismatch");
  }
  Polynomial out;
  out.dim = p.dim;
  const int q = p.dim;
  for (const auto& t : p.terms) {
    // prod_c (a_c z_c + b_c)^{e_c}: expand with an odometer over beta <= e.
    MultiIndex beta(q, 0);
    while (true) {
      double coeff = t.coeff;
      MultiIndex alpha(q);
      for (int c = 0; c < q; ++c) {
        coeff *= static_cast<double>(binomial(t.alpha[c], beta[c]));
        for (int e = 0; e < beta[c]; ++e) coeff *= map.scale[c];
        for (int e = 0; e < t.alpha[c] - beta[c]; ++e) coeff *= map.offset[c];
        alpha[c] = beta[c];
      }
      out.terms.push_back({coeff, std::move(alpha)});
      int c = q - 1;
      while (c >= 0) {
        if (beta[c] < t.alpha[c]) {
          ++beta[c];
          break;
        }
        beta[c] = 0;
        --c;
      }
      if (c < 0) break;
    }
  }
  return out.canonical();
}

}  // namespace momrec
