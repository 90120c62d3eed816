#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hdrmimo/training.hpp"
#include "test_support.hpp"

using namespace hdrmimo;
using namespace hdrmimo::testing;

TEST_CASE("pilots are the leading rows of a Hadamard matrix") {
  ComplexMatrix h2(2, 2);
  h2 << 1.0, 1.0, 1.0, -1.0;
  CHECK(generate_pilots(2, 2).symbols == h2);
  CHECK(generate_pilots(2, 4).symbols == hadamard(4).topRows(2));
  for (auto [u, k] : {std::pair{3, 4}, std::pair{8, 8}, std::pair{5, 32}}) {
    const ComplexMatrix s = generate_pilots(u, k).symbols;
    CHECK(s * s.adjoint() == static_cast<double>(k) * ComplexMatrix::Identity(u, u));
  }
  CHECK_THROWS_AS(generate_pilots(4, 2), std::invalid_argument);
  CHECK_THROWS_AS(generate_pilots(2, 3), std::invalid_argument);
}

TEST_CASE("noiseless training reproduces H S and the LS estimate recovers H") {
  Rng rng(1);
  const ComplexMatrix h = random_matrix(rng, 16, 4);
  const PilotMatrix pilots = generate_pilots(4, 4);
  const ComplexMatrix y = simulate_training(h, pilots, NoiseModel{0.0}, rng);
  CHECK(y == h * pilots.symbols);
  CHECK(rel_err(ls_channel_estimate(y, pilots), h) < 1e-12);
}

TEST_CASE("orthogonal-pilot shortcut equals the general LS formula") {
  Rng rng(2);
  const ComplexMatrix h = random_matrix(rng, 12, 3);
  const PilotMatrix pilots = generate_pilots(3, 8);
  const ComplexMatrix y = simulate_training(h, pilots, NoiseModel{0.7}, rng);
  CHECK(rel_err(ls_channel_estimate(y, pilots), ls_channel_estimate_general(y, pilots)) < 1e-12);
}

TEST_CASE("non-orthogonal pilots take the general path") {
  Rng rng(3);
  const ComplexMatrix h = random_matrix(rng, 6, 2);
  PilotMatrix pilots{random_matrix(rng, 2, 5)};
  const ComplexMatrix y = h * pilots.symbols;
  CHECK(rel_err(ls_channel_estimate(y, pilots), h) < 1e-10);

  PilotMatrix rank_deficient{ComplexMatrix::Ones(2, 4)};
  CHECK_THROWS_AS(ls_channel_estimate(y.leftCols(4), rank_deficient), std::invalid_argument);
}

TEST_CASE("pure-noise training has per-entry variance N0") {
  Rng rng(4);
  const ComplexMatrix zero = ComplexMatrix::Zero(8, 4);
  const PilotMatrix pilots = generate_pilots(4, 4);
  double power = 0.0;
  const int trials = 5000;
  for (int t = 0; t < trials; ++t) {
    power += simulate_training(zero, pilots, NoiseModel{0.4}, rng).squaredNorm();
  }
  CHECK(power / (trials * 32.0) == doctest::Approx(0.4).epsilon(0.02));

  Rng a(5), b(5);
  const ComplexMatrix h = random_matrix(rng, 8, 4);
  CHECK(simulate_training(h, pilots, NoiseModel{1.0}, a) ==
        simulate_training(h, pilots, NoiseModel{1.0}, b));
}

TEST_CASE("LS estimation error is unbiased with variance N0/K") {
  Rng rng(6);
  const int b = 4, u = 2, k = 4, trials = 10000;
  const double n0 = 0.5;
  const ComplexMatrix h = random_matrix(rng, b, u);
  const PilotMatrix pilots = generate_pilots(u, k);
  ComplexMatrix mean = ComplexMatrix::Zero(b, u);
  double var = 0.0;
  for (int t = 0; t < trials; ++t) {
    const ComplexMatrix err =
        ls_channel_estimate(simulate_training(h, pilots, NoiseModel{n0}, rng), pilots) - h;
    mean += err;
    var += err.squaredNorm();
  }
  mean /= trials;
  var /= static_cast<double>(trials) * b * u;
  CHECK(var == doctest::Approx(n0 / k).epsilon(0.05));
  const double bound = 4.0 * std::sqrt(n0 / (k * trials));
  CHECK(mean.cwiseAbs().maxCoeff() < bound);
}

TEST_CASE("sample covariance") {
  ComplexVector y(3);
  y << cdouble(1, 2), -1.0, cdouble(0, 3);
  CHECK(rel_err(sample_covariance(y).matrix(), y * y.adjoint()) < 1e-15);
  CHECK(sample_covariance(ComplexMatrix::Zero(4, 2)).matrix().norm() == 0.0);

  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const ComplexMatrix yt = random_matrix(rng, 16, 4);
    const HermitianMatrix c = sample_covariance(yt);
    CHECK(c.trace() == doctest::Approx(yt.colwise().squaredNorm().sum() / 4.0));
    REQUIRE(full_decomposition_lambda_min(c.matrix()) >= -1e-10 * c.trace());
    const auto blocks = sample_covariance_blocks(yt, 4);
    for (int cl = 0; cl < 4; ++cl) {
      REQUIRE(rel_err(blocks[cl].matrix(), c.matrix().block(4 * cl, 4 * cl, 4, 4)) < 1e-14);
    }
  }
  CHECK_THROWS(sample_covariance_blocks(ComplexMatrix::Zero(6, 2), 4));
}

TEST_CASE("strongest UE selection") {
  ComplexMatrix h = ComplexMatrix::Zero(2, 3);
  h(0, 0) = 5.0;
  h(0, 1) = 1.0;
  h(1, 2) = 1.0;
  CHECK(strongest_ue_index(h) == 0);
  ComplexMatrix tie = ComplexMatrix::Zero(2, 2);
  tie(0, 0) = 2.0;
  tie(1, 1) = 2.0;
  CHECK(strongest_ue_index(tie) == 0);
  h.col(2) *= 10.0;
  CHECK(strongest_ue_index(h) == 2);
}

TEST_CASE("strongest UE is identified from LS estimates at 30 dB dynamic range") {
  ScenarioConfig sc;
  sc.bs_antennas = 64;
  sc.ues = 8;
  sc.clusters = 8;
  sc.rho_db = 30.0;
  Rng rng(8);
  const PilotMatrix pilots = generate_pilots(8, 8);
  int hits = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const ChannelRealization ch = assemble_realization(generate_channel(sc, rng), sc);
    const NoiseModel noise = noise_variance_from_msnr(ch.H, 0.0);
    const ComplexMatrix h_hat =
        ls_channel_estimate(simulate_training(ch.H, pilots, noise, rng), pilots);
    hits += strongest_ue_index(h_hat) == ch.strongest_index ? 1 : 0;
  }
  CHECK(hits >= 990);
}
