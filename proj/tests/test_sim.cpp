// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <complex>

#include "fakepath/sim.hpp"
#include "helpers.hpp"

using namespace fakepath;
using crb::ChannelScene;
using steering::KernelOrder;
using torus::PathSet;

TEST_CASE("synthesize: noiseless scenes are exact") {
  const PathSet taus{0.1, 0.6};
  const PathSet fakes{0.15, 0.66};
  const Eigen::VectorXcd c = Eigen::VectorXcd::Constant(2, std::complex<double>(0.7, -0.2));
  const Eigen::VectorXcd cf = Eigen::VectorXcd::Constant(2, std::complex<double>(-0.3, 0.9));
  ChannelScene scene(taus, fakes, c, cf, 0.0, KernelOrder(15));
  rng::Substream stream(1, {0});
  const auto obs = sim::synthesize(scene, stream);
  const Eigen::VectorXcd expected = steering::vandermonde(scene.order, taus, 0) * c +
                                    steering::vandermonde(scene.order, fakes, 0) * cf;
  CHECK((obs.y - expected).norm() == 0.0);
}

TEST_CASE("synthesize: fixed seed reproduces bit-identical draws") {
  const PathSet taus{0.3};
  ChannelScene scene(taus, std::nullopt, Eigen::VectorXcd::Ones(1), Eigen::VectorXcd(), 1.3,
                     KernelOrder(7));
  rng::Substream s1(42, {5});
  rng::Substream s2(42, {5});
  const auto a = sim::synthesize(scene, s1);
  const auto b = sim::synthesize(scene, s2);
  CHECK((a.y - b.y).norm() == 0.0);
}

TEST_CASE("synthesize: noise statistics") {
  // zero coefficients leave pure noise; per-entry variance within 2%
  const PathSet taus{0.3};
  ChannelScene scene(taus, std::nullopt, Eigen::VectorXcd::Zero(1), Eigen::VectorXcd(), 1.0,
                     KernelOrder(3));
  rng::Substream stream(7, {1});
  double acc = 0.0;
  const int n_draws = 100000;
  for (int i = 0; i < n_draws; ++i) {
    const auto obs = sim::synthesize(scene, stream);
    acc += obs.y.squaredNorm();
  }
  const double per_entry = acc / (3.0 * n_draws);
  CHECK(per_entry == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("noise whiteness in operator norm") {
  const int N = 3;
  const double eta = 0.8;
  const PathSet taus{0.3};
  ChannelScene scene(taus, std::nullopt, Eigen::VectorXcd::Zero(1), Eigen::VectorXcd(), eta,
                     KernelOrder(N));
  rng::Substream stream(7, {2});
  Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(N, N);
  const int n_draws = 10000;
  for (int i = 0; i < n_draws; ++i) {
    const auto obs = sim::synthesize(scene, stream);
    cov += obs.y * obs.y.adjoint();
  }
  cov /= static_cast<double>(n_draws);
  const Eigen::MatrixXcd dev = cov - eta * eta * Eigen::MatrixXcd::Identity(N, N);
  const auto [lmin, lmax] = crb::extremal_eigenvalues(0.5 * (dev + dev.adjoint()));
  CHECK(std::max(std::fabs(lmin), std::fabs(lmax)) <= 0.05 * eta * eta);
}

TEST_CASE("snr accounting") {
  // L = 5, N = 31 at 0 dB implies eta^2 = 5/31
  const double eta = sim::noise_std_for_snr_db(5, 31, 0.0);
  CHECK(eta * eta == doctest::Approx(5.0 / 31.0).epsilon(1e-12));

  const PathSet taus{0.0, 0.2, 0.4, 0.6, 0.8};
  ChannelScene scene(taus, std::nullopt, Eigen::VectorXcd::Ones(5), Eigen::VectorXcd(), eta,
                     KernelOrder(31));
  CHECK(sim::snr_of(scene) == doctest::Approx(1.0).epsilon(1e-12));

  // doubling eta divides the SNR by 4
  ChannelScene doubled(taus, std::nullopt, Eigen::VectorXcd::Ones(5), Eigen::VectorXcd(),
                       2.0 * eta, KernelOrder(31));
  CHECK(sim::snr_of(doubled) == doctest::Approx(0.25).epsilon(1e-12));

  // degenerate single-antenna case: L = 1, N = 1, eta = 1 -> SNR = 1
  ChannelScene tiny(PathSet{0.2}, std::nullopt, Eigen::VectorXcd::Ones(1), Eigen::VectorXcd(),
                    1.0, KernelOrder(1));
  CHECK(sim::snr_of(tiny) == doctest::Approx(1.0).epsilon(1e-12));

  ChannelScene noiseless(PathSet{0.2}, std::nullopt, Eigen::VectorXcd::Ones(1),
                         Eigen::VectorXcd(), 0.0, KernelOrder(3));
  CHECK_THROWS_AS(sim::snr_of(noiseless), std::invalid_argument);
}

TEST_CASE("mc_crb_realizations structure and bounds") {
  sim::SweepConfig config;
  config.delta_ratios = {0.02, 0.1, 0.3};
  config.n_trials = 30;
  config.seed = 11;
  const auto out = sim::mc_crb_realizations(config);
  CHECK(out.columns().size() == 11);
  CHECK(out.rows().size() == 3);
  for (const auto& row : out.rows()) {
    const double eve_min = std::stod(row[1]);
    const double lemma = std::stod(row[4]);
    const double skipped = std::stod(row[10]);
    CHECK(eve_min >= lemma);
    CHECK(skipped == 0.0);
  }
}

TEST_CASE("mc_crb_realizations determinism across scheduling") {
  sim::SweepConfig config;
  config.delta_ratios = {0.05, 0.25};
  config.n_trials = 24;
  config.seed = 99;
  const std::string serial = sim::mc_crb_realizations(config, {1}).to_csv();
  const std::string parallel = sim::mc_crb_realizations(config, {4}).to_csv();
  const std::string again = sim::mc_crb_realizations(config, {4}).to_csv();
  CHECK(serial == parallel);
  CHECK(parallel == again);

  sim::SweepConfig one = config;
  one.n_trials = 1;
  CHECK(sim::mc_crb_realizations(one).to_csv() == sim::mc_crb_realizations(one).to_csv());
}

TEST_CASE("margin_sweep finds decreasing admissible ratios") {
  sim::SweepConfig config;
  config.n_trials = 40;
  config.seed = 5;
  const auto out = sim::margin_sweep(config, {2.0, 50.0});
  CHECK(out.rows().size() == 2);
  const double r1 = std::stod(out.rows()[0][1]);
  const double r2 = std::stod(out.rows()[1][1]);
  CHECK(out.rows()[0][3] == "ok");
  CHECK(out.rows()[1][3] == "ok");
  CHECK(r1 >= r2);
  // the found ratio realizes at least the target
  CHECK(std::stod(out.rows()[0][2]) >= 2.0);
  CHECK(std::stod(out.rows()[1][2]) >= 50.0);
}

TEST_CASE("margin_sweep flags unreachable targets") {
  sim::SweepConfig config;
  config.n_trials = 10;
  config.seed = 5;
  const auto out = sim::margin_sweep(config, {1e15});
  CHECK(out.rows()[0][3] == "unreachable");
}

TEST_CASE("sweep validation") {
  sim::SweepConfig config;
  config.delta_ratios = {0.6};
  config.seed = 1;
  CHECK_THROWS_AS(sim::mc_crb_realizations(config), std::invalid_argument);
}
