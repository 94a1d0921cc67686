#pragma once

#include <Eigen/Dense>
#include <vector>

#include "momrec/multi_index.hpp"

namespace momrec::kernels {

// Each kernel has a serial reference and an OpenMP variant. The parallel
// variant computes every output entry with the same per-entry expression and
// accumulation order as the serial one, so results are bitwise identical for
// any thread count. The unsuffixed name dispatches on build configuration
// and problem size.

// A(i, j) = prod_c points(c, j) ^ indices[i][c]; points is dim x npoints.
Eigen::MatrixXd moment_matrix_serial(const Eigen::MatrixXd& points,
                                     const std::vector<MultiIndex>& indices);
Eigen::MatrixXd moment_matrix_parallel(const Eigen::MatrixXd& points,
                                       const std::vector<MultiIndex>& indices);
Eigen::MatrixXd moment_matrix(const Eigen::MatrixXd& points,
                              const std::vector<MultiIndex>& indices);

// G = B diag(d) B^T, symmetric output. B is m x n, d has n entries.
Eigen::MatrixXd scaled_gram_serial(const Eigen::MatrixXd& b,
                                   const Eigen::VectorXd& d);
Eigen::MatrixXd scaled_gram_parallel(const Eigen::MatrixXd& b,
                                     const Eigen::VectorXd& d);
Eigen::MatrixXd scaled_gram(const Eigen::MatrixXd& b,
                            const Eigen::VectorXd& d);

// out[i] = sum_s w(s) * prod_c samples(c, s) ^ indices[i][c].
// Samples are visited in ascending order for every index, in blocks, so the
// floating-point sum is independent of the variant and thread count.
Eigen::VectorXd weighted_monomial_sums_serial(
    const Eigen::MatrixXd& samples, const Eigen::VectorXd& w,
    const std::vector<MultiIndex>& indices);
Eigen::VectorXd weighted_monomial_sums_parallel(
    const Eigen::MatrixXd& samples, const Eigen::VectorXd& w,
    const std::vector<MultiIndex>& indices);
Eigen::VectorXd weighted_monomial_sums(const Eigen::MatrixXd& samples,
                                       const Eigen::VectorXd& w,
                                       const std::vector<MultiIndex>& indices);

int max_threads();

}  // namespace momrec::kernels
