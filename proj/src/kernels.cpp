#include "momrec/kernels.hpp"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace momrec::kernels {

namespace {

struct FlatIndices {
  int k = 0;
  int dim = 0;
  std::vector<int> exp;      // k * dim, row major
  std::vector<int> max_deg;  // per coordinate
};

FlatIndices flatten(const std::vector<MultiIndex>& indices, int dim) {
  FlatIndices f;
  f.k = static_cast<int>(indices.size());
  f.dim = dim;
  f.exp.resize(static_cast<size_t>(f.k) * dim);
  f.max_deg.assign(dim, 0);
  for (int i = 0; i < f.k; ++i) {
    if (static_cast<int>(indices[i].size()) != dim) {
      throw std::invalid_argument("kernel index dimension mismatch");
    }
    for (int c = 0; c < dim; ++c) {
      const int e = indices[i][c];
      if (e < 0) throw std::invalid_argument("negative exponent");
      f.exp[static_cast<size_t>(i) * dim + c] = e;
      f.max_deg[c] = std::max(f.max_deg[c], e);
    }
  }
  return f;
}

// Power table for one point: tab[c * stride + e] = z_c^e.
void fill_powers(const double* z, int dim, const std::vector<int>& max_deg,
                 int stride, double* tab) {
  for (int c = 0; c < dim; ++c) {
    double* row = tab + static_cast<size_t>(c) * stride;
    row[0] = 1.0;
    for (int e = 1; e <= max_deg[c]; ++e) row[e] = row[e - 1] * z[c];
  }
}

void moment_matrix_columns(const Eigen::MatrixXd& points,
                           const FlatIndices& f, int j_begin, int j_end,
                           Eigen::MatrixXd& out) {
  const int stride = 1 + *std::max_element(f.max_deg.begin(), f.max_deg.end());
  std::vector<double> tab(static_cast<size_t>(f.dim) * stride);
  std::vector<double> col(points.rows());
  for (int j = j_begin; j < j_end; ++j) {
    for (int c = 0; c < f.dim; ++c) col[c] = points(c, j);
    fill_powers(col.data(), f.dim, f.max_deg, stride, tab.data());
    for (int i = 0; i < f.k; ++i) {
      const int* e = f.exp.data() + static_cast<size_t>(i) * f.dim;
      double v = 1.0;
      for (int c = 0; c < f.dim; ++c) v *= tab[static_cast<size_t>(c) * stride + e[c]];
      out(i, j) = v;
    }
  }
}

constexpr int kBlock = 256;

// Shared by the serial and parallel weighted-sum variants so both accumulate
// per index in identical order: blocks ascending, samples ascending.
void weighted_sums_chunk(const Eigen::MatrixXd& samples,
                         const Eigen::VectorXd& w, const FlatIndices& f,
                         int i_begin, int i_end, Eigen::VectorXd& out) {
  const int ns = static_cast<int>(samples.cols());
  const int stride = 1 + *std::max_element(f.max_deg.begin(), f.max_deg.end());
  std::vector<double> tab(static_cast<size_t>(kBlock) * f.dim * stride);
  for (int i = i_begin; i < i_end; ++i) out[i] = 0.0;
  for (int s0 = 0; s0 < ns; s0 += kBlock) {
    const int sb = std::min(kBlock, ns - s0);
    for (int s = 0; s < sb; ++s) {
      fill_powers(samples.col(s0 + s).data(), f.dim, f.max_deg, stride,
                  tab.data() + static_cast<size_t>(s) * f.dim * stride);
    }
    for (int i = i_begin; i < i_end; ++i) {
      const int* e = f.exp.data() + static_cast<size_t>(i) * f.dim;
      double acc = out[i];
      for (int s = 0; s < sb; ++s) {
        const double* pt = tab.data() + static_cast<size_t>(s) * f.dim * stride;
        double v = w[s0 + s];
        for (int c = 0; c < f.dim; ++c) v *= pt[static_cast<size_t>(c) * stride + e[c]];
        acc += v;
      }
      out[i] = acc;
    }
  }
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

Eigen::MatrixXd moment_matrix_serial(const Eigen::MatrixXd& points,
                                     const std::vector<MultiIndex>& indices) {
  const FlatIndices f = flatten(indices, static_cast<int>(points.rows()));
  Eigen::MatrixXd out(f.k, points.cols());
  moment_matrix_columns(points, f, 0, static_cast<int>(points.cols()), out);
  return out;
}

Eigen::MatrixXd moment_matrix_parallel(const Eigen::MatrixXd& points,
                                       const std::vector<MultiIndex>& indices) {
  const FlatIndices f = flatten(indices, static_cast<int>(points.rows()));
  const int q = static_cast<int>(points.cols());
  Eigen::MatrixXd out(f.k, q);
#ifdef _OPENMP
#pragma omp parallel
  {
    const int nt = omp_get_num_threads();
    const int id = omp_get_thread_num();
    const int lo = static_cast<int>(static_cast<long long>(q) * id / nt);
    const int hi = static_cast<int>(static_cast<long long>(q) * (id + 1) / nt);
    moment_matrix_columns(points, f, lo, hi, out);
  }
#else
  moment_matrix_columns(points, f, 0, q, out);
#endif
  return out;
}

Eigen::MatrixXd moment_matrix(const Eigen::MatrixXd& points,
                              const std::vector<MultiIndex>& indices) {
  const long long work =
      static_cast<long long>(points.cols()) * static_cast<long long>(indices.size());
  if (max_threads() > 1 && work > 1 << 14) {
    return moment_matrix_parallel(points, indices);
  }
  return moment_matrix_serial(points, indices);
}

namespace {

void gram_rows(const Eigen::MatrixXd& bt, const Eigen::MatrixXd& bst,
               int i_begin, int i_end, Eigen::MatrixXd& g) {
  for (int i = i_begin; i < i_end; ++i) {
    for (int j = 0; j <= i; ++j) {
      g(i, j) = bt.col(i).dot(bst.col(j));
    }
  }
}

}  // namespace

Eigen::MatrixXd scaled_gram_serial(const Eigen::MatrixXd& b,
                                   const Eigen::VectorXd& d) {
  if (b.cols() != d.size()) {
    throw std::invalid_argument("scaled_gram: dimension mismatch");
  }
  const int mrows = static_cast<int>(b.rows());
  const Eigen::MatrixXd bt = b.transpose();
  const Eigen::MatrixXd bst = d.asDiagonal() * bt;
  Eigen::MatrixXd g(mrows, mrows);
  gram_rows(bt, bst, 0, mrows, g);
  for (int i = 0; i < mrows; ++i) {
    for (int j = i + 1; j < mrows; ++j) g(i, j) = g(j, i);
  }
  return g;
}

Eigen::MatrixXd scaled_gram_parallel(const Eigen::MatrixXd& b,
                                     const Eigen::VectorXd& d) {
  if (b.cols() != d.size()) {
    throw std::invalid_argument("scaled_gram: dimension mismatch");
  }
  const int mrows = static_cast<int>(b.rows());
  const Eigen::MatrixXd bt = b.transpose();
  const Eigen::MatrixXd bst = d.asDiagonal() * bt;
  Eigen::MatrixXd g(mrows, mrows);
#ifdef _OPENMP
#pragma omp parallel for schedule(static, 1)
  for (int i = 0; i < mrows; ++i) {
    gram_rows(bt, bst, i, i + 1, g);
  }
#else
  gram_rows(bt, bst, 0, mrows, g);
#endif
  for (int i = 0; i < mrows; ++i) {
    for (int j = i + 1; j < mrows; ++j) g(i, j) = g(j, i);
  }
  return g;
}

Eigen::MatrixXd scaled_gram(const Eigen::MatrixXd& b, const Eigen::VectorXd& d) {
  const long long work = static_cast<long long>(b.rows()) * b.rows() * b.cols();
  if (max_threads() > 1 && work > 1 << 18) {
    return scaled_gram_parallel(b, d);
  }
  return scaled_gram_serial(b, d);
}

Eigen::VectorXd weighted_monomial_sums_serial(
    const Eigen::MatrixXd& samples, const Eigen::VectorXd& w,
    const std::vector<MultiIndex>& indices) {
  if (samples.cols() != w.size()) {
    throw std::invalid_argument("weighted_monomial_sums: dimension mismatch");
  }
  const FlatIndices f = flatten(indices, static_cast<int>(samples.rows()));
  Eigen::VectorXd out(f.k);
  weighted_sums_chunk(samples, w, f, 0, f.k, out);
  return out;
}

Eigen::VectorXd weighted_monomial_sums_parallel(
    const Eigen::MatrixXd& samples, const Eigen::VectorXd& w,
    const std::vector<MultiIndex>& indices) {
  if (samples.cols() != w.size()) {
    throw std::invalid_argument("weighted_monomial_sums: dimension mismatch");
  }
  const FlatIndices f = flatten(indices, static_cast<int>(samples.rows()));
  Eigen::VectorXd out(f.k);
#ifdef _OPENMP
#pragma omp parallel
  {
    const int nt = omp_get_num_threads();
    const int id = omp_get_thread_num();
    const int lo = static_cast<int>(static_cast<long long>(f.k) * id / nt);
    const int hi = static_cast<int>(static_cast<long long>(f.k) * (id + 1) / nt);
    if (lo < hi) weighted_sums_chunk(samples, w, f, lo, hi, out);
  }
#else
  weighted_sums_chunk(samples, w, f, 0, f.k, out);
#endif
  return out;
}

Eigen::VectorXd weighted_monomial_sums(const Eigen::MatrixXd& samples,
                                       const Eigen::VectorXd& w,
                                       const std::vector<MultiIndex>& indices) {
  const long long work =
      static_cast<long long>(samples.cols()) * static_cast<long long>(indices.size());
  if (max_threads() > 1 && work > 1 << 16) {
    return weighted_monomial_sums_parallel(samples, w, indices);
  }
  return weighted_monomial_sums_serial(samples, w, indices);
}

}  // namespace momrec::kernels
