#include "momrec/multi_index.hpp"

#include <numeric>
#include <stdexcept>

namespace momrec {

std::int64_t binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;  // exact: r*(n-k+i) is divisible by i here
  }
  return r;
}

int index_degree(const MultiIndex& a) {
  return std::accumulate(a.begin(), a.end(), 0);
}

bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("multi-index dimension mismatch");
  }
  const int da = index_degree(a);
  const int db = index_degree(b);
  if (da != db) return da < db;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

namespace {

void fill_degree(int q, int pos, int remaining, MultiIndex& cur,
                 std::vector<MultiIndex>& out) {
  if (pos == q - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[pos] = e;
    fill_degree(q, pos + 1, remaining - e, cur, out);
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_indices(int q, int d) {
  if (q < 1) throw std::invalid_argument("enumerate_indices: dimension < 1");
  if (d < 0) throw std::invalid_argument("enumerate_indices: degree < 0");
  std::vector<MultiIndex> out;
  out.reserve(static_cast<size_t>(binomial(q + d, d)));
  MultiIndex cur(q, 0);
  for (int deg = 0; deg <= d; ++deg) {
    fill_degree(q, 0, deg, cur, out);
  }
  return out;
}

double monomial_eval(std::span<const double> z, const MultiIndex& alpha) {
  if (z.size() != alpha.size()) {
    throw std::invalid_argument("monomial_eval: dimension mismatch");
  }
  double r = 1.0;
  for (size_t c = 0; c < alpha.size(); ++c) {
    const double zc = z[c];
    for (int e = 0; e < alpha[c]; ++e) r *= zc;
  }
  return r;
}

}  // namespace momrec
