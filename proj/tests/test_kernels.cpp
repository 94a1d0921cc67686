#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "momrec/kernels.hpp"

using namespace momrec;

namespace {

std::vector<MultiIndex> random_indices(std::mt19937& rng, int dim, int count,
                                       int max_deg) {
  std::uniform_int_distribution<int> ue(0, max_deg);
  std::vector<MultiIndex> idx(count, MultiIndex(dim));
  for (auto& a : idx) {
    for (int c = 0; c < dim; ++c) a[c] = ue(rng);
  }
  return idx;
}

Eigen::MatrixXd random_matrix(std::mt19937& rng, int rows, int cols,
                              double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = u(rng);
  }
  return m;
}

}  // namespace

TEST_CASE("moment matrix values against direct evaluation") {
  std::mt19937 rng(11);
  const auto idx = random_indices(rng, 3, 25, 4);
  const Eigen::MatrixXd pts = random_matrix(rng, 3, 40, -1.5, 1.5);
  const Eigen::MatrixXd a = kernels::moment_matrix_serial(pts, idx);
  REQUIRE(a.rows() == 25);
  REQUIRE(a.cols() == 40);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      double want = 1.0;
      for (int c = 0; c < 3; ++c) want *= std::pow(pts(c, j), idx[i][c]);
      CHECK(a(i, j) == doctest::Approx(want).epsilon(1e-13));
    }
  }
}

TEST_CASE("parallel kernels reproduce the serial reference bitwise") {
  std::mt19937 rng(22);
  for (int rep = 0; rep < 5; ++rep) {
    const int dim = 1 + rep % 4;
    const auto idx = random_indices(rng, dim, 10 + 17 * rep, 6);
    const Eigen::MatrixXd pts = random_matrix(rng, dim, 31 + 200 * rep, -2.0, 2.0);

    const Eigen::MatrixXd as = kernels::moment_matrix_serial(pts, idx);
    const Eigen::MatrixXd ap = kernels::moment_matrix_parallel(pts, idx);
    CHECK((as.array() == ap.array()).all());

    const Eigen::VectorXd w =
        random_matrix(rng, static_cast<int>(pts.cols()), 1, 0.0, 1.0);
    const Eigen::VectorXd ss = kernels::weighted_monomial_sums_serial(pts, w, idx);
    const Eigen::VectorXd sp = kernels::weighted_monomial_sums_parallel(pts, w, idx);
    CHECK((ss.array() == sp.array()).all());

    const Eigen::MatrixXd b = random_matrix(rng, 13 + rep, 57 + 31 * rep, -1.0, 1.0);
    const Eigen::VectorXd d =
        random_matrix(rng, static_cast<int>(b.cols()), 1, 0.01, 3.0);
    const Eigen::MatrixXd gs = kernels::scaled_gram_serial(b, d);
    const Eigen::MatrixXd gp = kernels::scaled_gram_parallel(b, d);
    CHECK((gs.array() == gp.array()).all());

    // Dispatch picks one of the two, so it must also match bitwise.
    CHECK((kernels::moment_matrix(pts, idx).array() == as.array()).all());
    CHECK((kernels::weighted_monomial_sums(pts, w, idx).array() == ss.array()).all());
    CHECK((kernels::scaled_gram(b, d).array() == gs.array()).all());
  }
}

TEST_CASE("weighted sums agree with a naive accumulation") {
  std::mt19937 rng(33);
  const auto idx = random_indices(rng, 2, 12, 5);
  const Eigen::MatrixXd pts = random_matrix(rng, 2, 700, -1.0, 1.0);
  const Eigen::VectorXd w = random_matrix(rng, 700, 1, 0.0, 0.01);
  const Eigen::VectorXd got = kernels::weighted_monomial_sums_serial(pts, w, idx);
  for (size_t i = 0; i < idx.size(); ++i) {
    double want = 0.0;
    for (int s = 0; s < 700; ++s) {
      want += w[s] * std::pow(pts(0, s), idx[i][0]) * std::pow(pts(1, s), idx[i][1]);
    }
    CHECK(got[static_cast<int>(i)] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("scaled gram equals the dense triple product") {
  std::mt19937 rng(44);
  const Eigen::MatrixXd b = random_matrix(rng, 9, 120, -2.0, 2.0);
  const Eigen::VectorXd d = random_matrix(rng, 120, 1, 0.0, 5.0);
  const Eigen::MatrixXd got = kernels::scaled_gram_serial(b, d);
  const Eigen::MatrixXd want = b * d.asDiagonal() * b.transpose();
  CHECK((got - want).lpNorm<Eigen::Infinity>() <
        1e-12 * (1.0 + want.lpNorm<Eigen::Infinity>()));
  CHECK((got - got.transpose()).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("kernel argument validation") {
  std::mt19937 rng(55);
  const auto idx = random_indices(rng, 2, 4, 3);
  const Eigen::MatrixXd pts = random_matrix(rng, 3, 10, -1.0, 1.0);
  CHECK_THROWS_AS(kernels::moment_matrix_serial(pts, idx), std::invalid_argument);
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(9);
  const Eigen::MatrixXd pts2 = random_matrix(rng, 2, 10, -1.0, 1.0);
  CHECK_THROWS_AS(kernels::weighted_monomial_sums_serial(pts2, w, idx),
                  std::invalid_argument);
  CHECK_THROWS_AS(kernels::scaled_gram_serial(pts2, w), std::invalid_argument);
}
