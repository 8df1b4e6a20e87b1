// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "fakepath/bounds.hpp"
#include "fakepath/crb.hpp"
#include "fakepath/rng.hpp"
#include "helpers.hpp"

using namespace fakepath;
using steering::KernelOrder;
using testing::random_fake_config;
using torus::PathSet;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("gp_matrix vanishes when fakes coincide with true paths") {
  const PathSet taus{0.1, 0.4, 0.75};
  for (int p : {0, 1, 2}) {
    const auto g = bounds::gp_matrix(KernelOrder(15), taus, taus, p);
    CHECK(g.matrix.cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(bounds::gp_matrix(KernelOrder(15), taus, taus, 3), std::invalid_argument);
  CHECK_THROWS_AS(bounds::gp_matrix(KernelOrder(15), taus, PathSet{0.1, 0.4}, 0),
                  std::invalid_argument);
}

TEST_CASE("single-path G0 closed form") {
  const KernelOrder order(31);
  const PathSet tau{0.3};
  const PathSet fake{0.34};
  const auto g0 = bounds::gp_matrix(order, tau, fake, 0);
  const double expected = 2.0 * (1.0 - steering::dirichlet(order, 0.04, 0));
  CHECK(g0.matrix(0, 0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("difference Gram identities") {
  rng::Substream stream(31, {0});
  for (int rep = 0; rep < 25; ++rep) {
    const auto cfg = random_fake_config(stream);
    const auto v0t = steering::vandermonde(cfg.order, cfg.taus, 0);
    const auto v0f = steering::vandermonde(cfg.order, cfg.fakes, 0);
    const auto v1t = steering::vandermonde(cfg.order, cfg.taus, 1);
    const auto v1f = steering::vandermonde(cfg.order, cfg.fakes, 1);
    const Eigen::MatrixXcd e0 = v0t - v0f;
    const Eigen::MatrixXcd e1 = v1t - v1f;

    const auto g0 = bounds::gp_matrix(cfg.order, cfg.taus, cfg.fakes, 0);
    const auto g1 = bounds::gp_matrix(cfg.order, cfg.taus, cfg.fakes, 1);
    const auto g2 = bounds::gp_matrix(cfg.order, cfg.taus, cfg.fakes, 2);

    const double s2 = steering::v1_norm_squared(cfg.order);
    CHECK(((e0.adjoint() * e0) - g0.matrix.cast<std::complex<double>>()).cwiseAbs().maxCoeff() <
          1e-9);
    CHECK(((e0.adjoint() * e1) - g1.matrix.cast<std::complex<double>>()).cwiseAbs().maxCoeff() <
          1e-9 * std::sqrt(s2));
    CHECK(((e1.adjoint() * e1) - g2.matrix.cast<std::complex<double>>()).cwiseAbs().maxCoeff() <
          1e-9 * s2);

    // block identity for F = W(tau) - W(fake)
    const Eigen::MatrixXcd f =
        steering::concat_w(cfg.order, cfg.taus) - steering::concat_w(cfg.order, cfg.fakes);
    const Eigen::MatrixXcd ff = f.adjoint() * f;
    const auto L = static_cast<Eigen::Index>(cfg.taus.size());
    const double s = std::sqrt(s2);
    Eigen::MatrixXcd assembled(2 * L, 2 * L);
    assembled.topLeftCorner(L, L) = g0.matrix.cast<std::complex<double>>();
    assembled.topRightCorner(L, L) = g1.matrix.cast<std::complex<double>>() / s;
    assembled.bottomLeftCorner(L, L) = g1.matrix.transpose().cast<std::complex<double>>() / s;
    assembled.bottomRightCorner(L, L) = g2.matrix.cast<std::complex<double>>() / s2;
    CHECK((ff - assembled).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("inf_norm") {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 4);
  CHECK(bounds::inf_norm(id) == 1.0);
  Eigen::MatrixXd m(2, 2);
  m << 1.0, -2.0, 3.0, 0.0;
  CHECK(bounds::inf_norm(m) == 3.0);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 3);
  CHECK(bounds::inf_norm(zero) == 0.0);
}

TEST_CASE("kernel envelope constants hold on a coarse grid") {
  for (int N : {3, 15}) {
    for (int p : {0, 1, 2}) {
      CHECK(bounds::dirichlet_envelope_check(KernelOrder(N), p, 20000) <= 1.0);
    }
  }
  // serial and parallel scans agree exactly
  const double a = bounds::dirichlet_envelope_check(KernelOrder(31), 1, 30000, {1});
  const double b = bounds::dirichlet_envelope_check(KernelOrder(31), 1, 30000, {0});
  CHECK(a == b);
}

TEST_CASE("lemma_norm_bound edge cases") {
  const KernelOrder order(15);
  CHECK(bounds::lemma_norm_bound(order, 4, 0.0, 0.2, 0, bounds::NormBoundVariant::ExactSum) ==
        0.0);
  CHECK(bounds::lemma_norm_bound(order, 4, 0.0, 0.2, 0, bounds::NormBoundVariant::LogMajorized) ==
        0.0);
  CHECK_THROWS_AS(
      bounds::lemma_norm_bound(order, 4, 0.12, 0.2, 0, bounds::NormBoundVariant::ExactSum),
      std::invalid_argument);

  // L = 1, p = 0, small delta: only the sup term survives and the sup value
  // is attained at 0
  const double delta = 1e-3;
  const double expected = 4.0 * delta * delta * (kPi * kPi / 3.0) * (15.0 * 15.0 - 1.0);
  CHECK(bounds::lemma_norm_bound(order, 1, delta, 0.5, 0, bounds::NormBoundVariant::ExactSum) ==
        doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("ExactSum dominates the G_p infinity norm") {
  rng::Substream stream(31, {1});
  int checked = 0;
  for (int rep = 0; rep < 120; ++rep) {
    const auto cfg = random_fake_config(stream);
    for (int p : {0, 1, 2}) {
      const double norm = bounds::inf_norm(bounds::gp_matrix(cfg.order, cfg.taus, cfg.fakes, p).matrix);
      const double bound =
          bounds::lemma_norm_bound(cfg.order, static_cast<int>(cfg.taus.size()), cfg.delta,
                                   cfg.Delta, p, bounds::NormBoundVariant::ExactSum);
      CHECK(norm <= bound * (1.0 + 1e-12));
      ++checked;
    }
  }
  CHECK(checked == 360);
}

TEST_CASE("block bound equals the assembled two-by-two infinity norm") {
  rng::Substream stream(31, {2});
  for (int rep = 0; rep < 10; ++rep) {
    const auto cfg = random_fake_config(stream);
    const int L = static_cast<int>(cfg.taus.size());
    const double s = std::sqrt(steering::v1_norm_squared(cfg.order));
    const auto variant = bounds::NormBoundVariant::ExactSum;
    const double b0 = bounds::lemma_norm_bound(cfg.order, L, cfg.delta, cfg.Delta, 0, variant);
    const double b1 = bounds::lemma_norm_bound(cfg.order, L, cfg.delta, cfg.Delta, 1, variant);
    const double b2 = bounds::lemma_norm_bound(cfg.order, L, cfg.delta, cfg.Delta, 2, variant);
    Eigen::MatrixXd assembled(2, 2);
    assembled << b0, b1 / s, b1 / s, b2 / (s * s);
    CHECK(bounds::block_norm_bound(cfg.order, L, cfg.delta, cfg.Delta, variant) ==
          doctest::Approx(bounds::inf_norm(assembled)).epsilon(1e-12));
  }
}

TEST_CASE("Bob AoA bound closed form and scaling") {
  const KernelOrder order(63);
  const double Delta = 0.2;
  const double denom = 1.0 - kPi * kPi / (63.0 * Delta);
  const double paper = (kPi * kPi / 3.0) * 63.0 * 63.0 / denom;
  CHECK(bounds::bob_crb_bound_aoa(order, Delta, 1.0, 1.0, bounds::BoundVariant::Closed).value ==
        doctest::Approx(paper).epsilon(1e-12));
  const double proof = (3.0 / (kPi * kPi)) / (63.0 * 63.0 * denom);
  CHECK(bounds::bob_crb_bound_aoa(order, Delta, 1.0, 1.0, bounds::BoundVariant::Rigorous).value ==
        doctest::Approx(proof).epsilon(1e-12));
  // eta -> 2 eta quadruples the bound
  CHECK(bounds::bob_crb_bound_aoa(order, Delta, 2.0, 1.0, bounds::BoundVariant::Rigorous).value ==
        doctest::Approx(4.0 * proof).epsilon(1e-12));
  CHECK_THROWS_AS(bounds::bob_crb_bound_aoa(KernelOrder(31), 0.2, 1.0, 1.0,
                                            bounds::BoundVariant::Rigorous),
                  std::invalid_argument);
}

TEST_CASE("realized Bob CRB stays under the rigorous bound") {
  rng::Substream stream(31, {3});
  int checked = 0;
  while (checked < 60) {
    const int L = 2 + static_cast<int>(stream.uniform_index(4));
    const int N = 2 * (20 + static_cast<int>(stream.uniform_index(12))) + 1;
    const KernelOrder order(N);
    const double dmin = kPi * kPi / N;
    if (L * dmin > 0.9) continue;
    const auto taus = testing::random_separated_paths(stream, L, dmin * 1.02);
    const double Delta = torus::min_separation(taus);
    if (Delta < dmin) continue;
    const double eta = stream.uniform(0.3, 2.0);
    // |c| <= 1 keeps the proof-form bound applicable
    const Eigen::VectorXcd c = testing::random_coeffs(stream, L, 0.3, 1.0);
    crb::ChannelScene scene(taus, std::nullopt, c, Eigen::VectorXcd(), eta, order);
    const auto fim = crb::fim_aoa_known_coeffs(scene, crb::Receiver::Bob);
    const auto report = crb::crb_block(fim, fim.labels);
    const double c_min = c.cwiseAbs().minCoeff();
    const double bound =
        bounds::bob_crb_bound_aoa(order, Delta, eta, c_min, bounds::BoundVariant::Rigorous).value;
    CHECK(report.lambda_max <= bound * (1.0 + 1e-9));

    // full scenario, same scene
    const auto fim_full = crb::fim_full(scene, crb::Receiver::Bob);
    const auto report_full = crb::crb_block(fim_full, fim_full.labels);
    const double bound_full =
        bounds::bob_crb_bound_full(order, Delta, eta, c_min, bounds::BoundVariant::Rigorous).value;
    CHECK(report_full.lambda_max <= bound_full * (1.0 + 1e-9));
    ++checked;
  }
}

TEST_CASE("Eve AoA bound diverges as delta -> 0 and pins the regression value") {
  const KernelOrder order(31);
  CHECK(bounds::eve_crb_bound_aoa(order, 5, 0.2, 0.0, 1.0, 1.0, bounds::BoundVariant::Rigorous)
            .value == kInf);
  CHECK(bounds::eve_crb_bound_aoa(order, 5, 0.2, 0.0, 1.0, 1.0, bounds::BoundVariant::Closed)
            .value == kInf);
  // frozen after first computation: N=31, L=5, Delta=0.2, delta/Delta=0.05,
  // eta=1, c_max=1 (the sup term is attained at 0, so this is pure arithmetic)
  const double pinned = 5.9074004120878e-05;
  CHECK(bounds::eve_crb_bound_aoa(order, 5, 0.2, 0.01, 1.0, 1.0, bounds::BoundVariant::Rigorous)
            .value == doctest::Approx(pinned).epsilon(1e-10));
}

TEST_CASE("realized Eve CRB stays above the rigorous bound") {
  rng::Substream stream(31, {4});
  for (int rep = 0; rep < 40; ++rep) {
    const auto rs = testing::random_admissible_scene(stream);
    const auto& scene = rs.scene;
    const auto fim = crb::fim_aoa_known_coeffs(scene, crb::Receiver::Eve);
    crb::CrbReport report;
    try {
      report = crb::crb_block(fim, crb::aoa_labels(scene.n_paths(), false));
    } catch (const std::exception&) {
      continue;
    }
    const double bound =
        bounds::eve_crb_bound_aoa(scene.order, static_cast<int>(scene.n_paths()), rs.Delta,
                                  rs.delta, scene.noise_std, scene.coeff_max_abs(),
                                  bounds::BoundVariant::Rigorous)
            .value;
    CHECK(report.lambda_min >= bound * (1.0 - 1e-9));
  }
}

TEST_CASE("full bounds limits") {
  // N Delta -> infinity: the Bob bound approaches eta^2 / c_min^2
  const double v =
      bounds::bob_crb_bound_full(KernelOrder(501), 0.5, 1.0, 1.0, bounds::BoundVariant::Rigorous)
          .value;
  CHECK(v == doctest::Approx(1.0).epsilon(0.05));
  CHECK(bounds::eve_crb_bound_full(KernelOrder(31), 5, 0.2, 0.0, 1.0, 1.0,
                                   bounds::BoundVariant::Rigorous)
            .value == kInf);
}

TEST_CASE("margin bound properties") {
  bounds::MarginParams params;
  params.order_bob = KernelOrder(63);
  params.order_eve = KernelOrder(63);
  params.n_paths = 2;
  params.min_sep_bob = 0.45;
  params.min_sep_eve = 0.45;
  params.inter_sep_eve = 0.02;
  params.noise_bob = 0.8;
  params.noise_eve = 0.8;

  const double base =
      bounds::margin_bound(bounds::MarginScenario::AoAOnly, params, bounds::BoundVariant::Closed);

  // joint noise scaling leaves the margin unchanged
  bounds::MarginParams scaled = params;
  scaled.noise_bob *= 3.0;
  scaled.noise_eve *= 3.0;
  CHECK(bounds::margin_bound(bounds::MarginScenario::AoAOnly, scaled,
                             bounds::BoundVariant::Closed) == doctest::Approx(base).epsilon(1e-12));

  // quotient consistency for matching variants
  for (auto variant : {bounds::BoundVariant::Closed, bounds::BoundVariant::Rigorous}) {
    const double eve = bounds::eve_crb_bound_aoa(params.order_eve, params.n_paths,
                                                 params.min_sep_eve, params.inter_sep_eve,
                                                 params.noise_eve, params.coeff_max_eve, variant)
                           .value;
    const double bob = bounds::bob_crb_bound_aoa(params.order_bob, params.min_sep_bob,
                                                 params.noise_bob, params.coeff_min_bob, variant)
                           .value;
    CHECK(bounds::margin_bound(bounds::MarginScenario::AoAOnly, params, variant) ==
          doctest::Approx(eve / bob).epsilon(1e-15));
  }

  // gamma decreases along an admissible delta sweep
  double prev = kInf;
  for (double delta : {0.01, 0.05, 0.1, 0.15, 0.2}) {
    bounds::MarginParams p2 = params;
    p2.inter_sep_eve = delta;
    const double g =
        bounds::margin_bound(bounds::MarginScenario::AoAOnly, p2, bounds::BoundVariant::Rigorous);
    CHECK(g < prev);
    prev = g;
  }

  // doubling N at fixed N*delta lifts the closed-form margin by roughly 2^4
  bounds::MarginParams small = params;
  small.order_bob = KernelOrder(31);
  small.order_eve = KernelOrder(31);
  small.inter_sep_eve = 0.5 / 31.0;
  bounds::MarginParams big = params;
  big.order_bob = KernelOrder(63);
  big.order_eve = KernelOrder(63);
  big.inter_sep_eve = 0.5 / 63.0;
  const double ratio =
      bounds::margin_bound(bounds::MarginScenario::AoAOnly, big, bounds::BoundVariant::Closed) /
      bounds::margin_bound(bounds::MarginScenario::AoAOnly, small, bounds::BoundVariant::Closed);
  CHECK(ratio > 10.0);
  CHECK(ratio < 24.0);
}
