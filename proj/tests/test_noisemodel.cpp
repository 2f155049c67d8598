// SPDX-License-Identifier: MIT
#include "twistopt/noisemodel.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle.hpp"

using namespace twistopt;
namespace testing = twistopt::testing;

TEST_CASE("correlation matrix is tridiagonal") {
  noisemodel::NoiseSpec spec{0.2, 0.05, 0.0};
  auto cov = noisemodel::correlation_matrix(spec, 4);
  REQUIRE(cov.rows() == 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j)
        CHECK(cov(i, j) == 0.2);
      else if (std::abs(i - j) == 1)
        CHECK(cov(i, j) == 0.05);
      else
        CHECK(cov(i, j) == 0.0);
    }
}

TEST_CASE("smallest eigenvalue matches the closed form") {
  noisemodel::NoiseSpec spec{0.1, 0.04, 0.0};
  const int n = 6;
  const double expected = 0.1 - 2.0 * 0.04 * std::cos(M_PI / (n + 1));
  CHECK(noisemodel::min_covariance_eigenvalue(spec, n) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("validation accepts psd and rejects the rest") {
  CHECK_NOTHROW(noisemodel::validate({0.1, 0.05, 0.0}, 5));
  CHECK_NOTHROW(noisemodel::validate({0.1, -0.05, 0.0}, 5));
  CHECK_NOTHROW(noisemodel::validate({0.0, 0.0, 0.5}, 5));
  CHECK_THROWS_AS(noisemodel::validate({0.1, 0.2, 0.0}, 5), ConfigError);
  CHECK_THROWS_AS(noisemodel::validate({-0.1, 0.0, 0.0}, 5), ConfigError);
  CHECK_THROWS_AS(noisemodel::validate({0.0, 0.0, 0.6}, 5), ConfigError);
  CHECK_THROWS_AS(noisemodel::validate({0.0, 0.0, -0.1}, 5), ConfigError);
}

TEST_CASE("phase signatures") {
  CHECK(noisemodel::phase_signature(0, 0) == 0);
  CHECK(noisemodel::phase_signature(1, 1) == 0);
  CHECK(noisemodel::phase_signature(0, 1) == 1);
  CHECK(noisemodel::phase_signature(1, 0) == -1);
}

TEST_CASE("dephasing weight closed forms") {
  SUBCASE("diagonal elements are untouched") {
    noisemodel::NoiseSpec spec{0.3, 0.1, 0.0};
    auto cov = noisemodel::correlation_matrix(spec, 3);
    CHECK(noisemodel::dephasing_weight({0, 1, 0}, {0, 1, 0}, cov) == 1.0);
  }
  SUBCASE("single site flip") {
    noisemodel::NoiseSpec spec{0.4, 0.0, 0.0};
    auto cov = noisemodel::correlation_matrix(spec, 1);
    CHECK(noisemodel::dephasing_weight({0}, {1}, cov) ==
          doctest::Approx(std::exp(-0.4 / 2)).epsilon(1e-14));
  }
  SUBCASE("two sites with anticorrelation") {
    noisemodel::NoiseSpec spec{0.3, -0.15, 0.0};
    auto cov = noisemodel::correlation_matrix(spec, 2);
    // s = (1, 1): exponent = (2 c1 + 2 c2) / 2 = c1 + c2.
    CHECK(noisemodel::dephasing_weight({0, 0}, {1, 1}, cov) ==
          doctest::Approx(std::exp(-(0.3 - 0.15))).epsilon(1e-14));
  }
}

TEST_CASE("weight symmetry and bound") {
  std::mt19937_64 rng(71);
  noisemodel::NoiseSpec spec{0.2, 0.08, 0.0};
  const int n = 5;
  auto cov = noisemodel::correlation_matrix(spec, n);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<int> m(n), k(n);
    for (int j = 0; j < n; ++j) {
      m[static_cast<std::size_t>(j)] = bit(rng);
      k[static_cast<std::size_t>(j)] = bit(rng);
    }
    const double w = noisemodel::dephasing_weight(m, k, cov);
    CHECK(w == noisemodel::dephasing_weight(k, m, cov));
    CHECK(w <= 1.0 + 1e-15);
    CHECK(w > 0.0);
  }
}

TEST_CASE("factorized weight matches the quadratic form") {
  noisemodel::NoiseSpec spec{0.17, -0.06, 0.0};
  const int n = 6;
  auto cov = noisemodel::correlation_matrix(spec, n);
  std::mt19937_64 rng(73);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<int> m(n), k(n);
    std::vector<int> s(n);
    for (int j = 0; j < n; ++j) {
      m[static_cast<std::size_t>(j)] = bit(rng);
      k[static_cast<std::size_t>(j)] = bit(rng);
      s[static_cast<std::size_t>(j)] = noisemodel::phase_signature(
          m[static_cast<std::size_t>(j)], k[static_cast<std::size_t>(j)]);
    }
    double factored = 1.0;
    for (int j = 0; j < n; ++j) {
      factored *= noisemodel::weight_local_factor(spec, s[static_cast<std::size_t>(j)]);
      if (j > 0)
        factored *= noisemodel::weight_nn_factor(
            spec, s[static_cast<std::size_t>(j - 1)], s[static_cast<std::size_t>(j)]);
    }
    CHECK(factored ==
          doctest::Approx(noisemodel::dephasing_weight(m, k, cov)).epsilon(1e-12));
  }
}

TEST_CASE("weights match a monte carlo gaussian average") {
  // The weight is the average of the random phase factor
  // prod_j e^{-i r_j s_j} over r ~ N(0, C); a modest-size sample pins it to
  // a few sigma.
  noisemodel::NoiseSpec spec{0.15, 0.06, 0.0};
  const int n = 3;
  auto cov = noisemodel::correlation_matrix(spec, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  Eigen::MatrixXd root = es.eigenvectors() *
                         es.eigenvalues().cwiseSqrt().asDiagonal() *
                         es.eigenvectors().transpose();

  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  const int samples = 200000;
  const std::vector<int> m{0, 1, 0}, k{1, 1, 1};
  std::vector<int> s(3);
  for (int j = 0; j < 3; ++j)
    s[static_cast<std::size_t>(j)] = noisemodel::phase_signature(
        m[static_cast<std::size_t>(j)], k[static_cast<std::size_t>(j)]);
  double mean = 0.0, sq = 0.0;
  for (int it = 0; it < samples; ++it) {
    Eigen::Vector3d z(g(rng), g(rng), g(rng));
    Eigen::Vector3d r = root * z;
    double phase = 0.0;
    for (int j = 0; j < 3; ++j) phase += r[j] * s[static_cast<std::size_t>(j)];
    const double v = std::cos(phase);
    mean += v;
    sq += v * v;
  }
  mean /= samples;
  sq /= samples;
  const double sigma = std::sqrt((sq - mean * mean) / samples);
  const double exact = noisemodel::dephasing_weight(m, k, cov);
  CHECK(std::abs(mean - exact) < 3.0 * sigma + 1e-12);
}

TEST_CASE("gate dephasing factor") {
  CHECK(noisemodel::gate_dephasing_factor(0.0) == 1.0);
  CHECK(noisemodel::gate_dephasing_factor(0.5) == 0.0);
  CHECK(noisemodel::gate_dephasing_factor(0.1) == doctest::Approx(0.8));
}

TEST_CASE("gate dephasing equals the kraus channel on a dense state") {
  // (1-p) rho + p Z rho Z per site scales every off-diagonal element by
  // (1-2p)^{number of differing sites}.
  const int n = 3;
  const double p = 0.12;
  noisemodel::NoiseSpec spec{0.0, 0.0, p};
  testing::DenseChannel channel(n, spec);
  channel.apply_unitary(testing::dense_rotation(n, Axis::y(), 0.6));
  Eigen::MatrixXcd before = channel.rho();
  channel.dephase_all_sites();
  const Eigen::Index dim = Eigen::Index{1} << n;
  for (Eigen::Index x = 0; x < dim; ++x)
    for (Eigen::Index y = 0; y < dim; ++y) {
      int differing = 0;
      for (int j = 0; j < n; ++j)
        if (((x >> j) & 1) != ((y >> j) & 1)) ++differing;
      const Complex expect =
          before(x, y) * std::pow(1.0 - 2.0 * p, differing);
      CHECK(std::abs(channel.rho()(x, y) - expect) < 1e-12);
    }
}
