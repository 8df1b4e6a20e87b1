// SPDX-License-Identifier: Apache-2.0

#include "fakepath/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace fakepath::bounds {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double check_separations(int n_paths, double delta, double Delta, const char* who) {
  if (n_paths < 1) throw std::invalid_argument(std::string(who) + ": path count must be >= 1");
  if (!(delta >= 0.0)) throw std::invalid_argument(std::string(who) + ": delta must be >= 0");
  if (!(delta < Delta / 2.0)) {
    throw std::invalid_argument(std::string(who) +
                                ": separation hypothesis violated (requires delta < Delta/2)");
  }
  return Delta;
}
}  // namespace

GpMatrix gp_matrix(steering::KernelOrder order, const torus::PathSet& taus,
                   const torus::PathSet& fakes, int p) {
  if (p < 0 || p > 2) throw std::invalid_argument("gp_matrix: p must be in {0, 1, 2}");
  if (taus.size() != fakes.size()) {
    throw std::invalid_argument("gp_matrix: path sets must have equal cardinality");
  }
  const double sign = (p == 0) ? 1.0 : -1.0;
  const auto L = static_cast<Eigen::Index>(taus.size());
  Eigen::MatrixXd m(L, L);
  for (Eigen::Index i = 0; i < L; ++i) {
    const double ti = taus[static_cast<std::size_t>(i)].value();
    const double fi = fakes[static_cast<std::size_t>(i)].value();
    for (Eigen::Index j = 0; j < L; ++j) {
      const double tj = taus[static_cast<std::size_t>(j)].value();
      const double fj = fakes[static_cast<std::size_t>(j)].value();
      m(i, j) = sign * (steering::dirichlet(order, ti - tj, p) -
                        steering::dirichlet(order, fi - tj, p) +
                        steering::dirichlet(order, fi - fj, p) -
                        steering::dirichlet(order, ti - fj, p));
    }
  }
  return GpMatrix{p, std::move(m), taus, fakes};
}

double inf_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double inf_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double envelope_constant(int p) {
  switch (p) {
    case 0: return 5.0;
    case 1: return 16.0;
    case 2: return 50.0;
    default: throw std::invalid_argument("envelope_constant: p must be in {0, 1, 2}");
  }
}

double dirichlet_envelope_check(steering::KernelOrder order, int p, int samples,
                                const parallel::ExecPolicy& policy) {
  if (samples < 1) throw std::invalid_argument("dirichlet_envelope_check: samples must be >= 1");
  const double cp = envelope_constant(p);
  double scale = cp;
  for (int q = 0; q < p + 1; ++q) scale *= order.n_antennas();

  // fixed-size blocks with per-block maxima keep the reduction deterministic
  constexpr int kBlock = 4096;
  const int n_blocks = (samples + kBlock - 1) / kBlock;
  std::vector<double> block_max(static_cast<std::size_t>(n_blocks), 0.0);
  parallel::run_indexed(static_cast<std::size_t>(n_blocks), policy, [&](std::size_t b) {
    const int lo = static_cast<int>(b) * kBlock;
    const int hi = std::min(samples, lo + kBlock);
    double worst = 0.0;
    for (int i = lo; i < hi; ++i) {
      const double t = -0.5 + (i + 0.5) / samples;
      if (std::fabs(t) < 1e-12) continue;
      const double r = std::fabs(steering::dirichlet(order, t, p + 2)) * std::fabs(t) / scale;
      worst = std::max(worst, r);
    }
    block_max[b] = worst;
  });
  double worst = 0.0;
  for (double v : block_max) worst = std::max(worst, v);
  return worst;
}

double lemma_norm_bound(steering::KernelOrder order, int n_paths, double delta, double Delta,
                        int p, NormBoundVariant variant) {
  if (p < 0 || p > 2) throw std::invalid_argument("lemma_norm_bound: p must be in {0, 1, 2}");
  check_separations(n_paths, delta, Delta, "lemma_norm_bound");

  const double sup = steering::dirichlet_sup_near_zero(order, p + 2, 2.0 * delta);
  double np1 = 1.0;
  for (int q = 0; q < p + 1; ++q) np1 *= order.n_antennas();
  const double cp = envelope_constant(p);

  double tail = 0.0;
  if (variant == NormBoundVariant::ExactSum) {
    const int m = n_paths / 2;  // ceil((L-1)/2)
    double sum = 0.0;
    for (int k = 1; k <= m; ++k) sum += 1.0 / (k * Delta - 2.0 * delta);
    tail = 2.0 * cp * np1 * sum;
  } else {
    const double lg = std::max(0.0, std::log(n_paths / 2.0));
    tail = cp * np1 * lg / (Delta * (1.0 - 2.0 * delta / Delta));
  }
  return 4.0 * delta * delta * (sup + tail);
}

double block_norm_bound(steering::KernelOrder order, int n_paths, double delta, double Delta,
                        NormBoundVariant variant) {
  const double s = std::sqrt(steering::v1_norm_squared(order));
  const double b0 = lemma_norm_bound(order, n_paths, delta, Delta, 0, variant);
  const double b1 = lemma_norm_bound(order, n_paths, delta, Delta, 1, variant);
  const double b2 = lemma_norm_bound(order, n_paths, delta, Delta, 2, variant);
  return std::max(b0 + b1 / s, b1 / s + b2 / (s * s));
}

BoundReport bob_crb_bound_aoa(steering::KernelOrder order, double Delta, double eta, double c_min,
                              BoundVariant variant) {
  const int N = order.n_antennas();
  if (!(Delta >= kPi * kPi / N)) {
    throw std::invalid_argument(
        "bob_crb_bound_aoa: separation hypothesis violated (requires Delta >= pi^2/N)");
  }
  if (!(c_min > 0.0)) throw std::invalid_argument("bob_crb_bound_aoa: c_min must be positive");
  const double denom = 1.0 - kPi * kPi / (N * Delta);
  const double eta2c = eta * eta / (c_min * c_min);
  double value = kInf;
  if (denom > 0.0) {
    value = (variant == BoundVariant::Closed)
                ? eta2c * (kPi * kPi / 3.0) * N * N / denom
                : eta2c * (3.0 / (kPi * kPi)) / (static_cast<double>(N) * N * denom);
  }
  return BoundReport{value, variant, BoundInputs{N, 0, Delta, 0.0, eta, c_min}};
}

BoundReport eve_crb_bound_aoa(steering::KernelOrder order, int n_paths, double Delta, double delta,
                              double eta, double c_max, BoundVariant variant) {
  check_separations(n_paths, delta, Delta, "eve_crb_bound_aoa");
  if (!(c_max > 0.0)) throw std::invalid_argument("eve_crb_bound_aoa: c_max must be positive");
  const int N = order.n_antennas();
  const double eta2c = eta * eta / (c_max * c_max);
  double value = kInf;
  if (variant == BoundVariant::Rigorous) {
    const double norm_bound =
        lemma_norm_bound(order, n_paths, delta, Delta, 2, NormBoundVariant::ExactSum);
    if (norm_bound > 0.0) value = eta2c / norm_bound;
  } else if (delta > 0.0) {
    const double n4 = static_cast<double>(N) * N * N * N;
    const double c_const = steering::dirichlet_sup_near_zero(order, 4, 2.0 * delta) / n4;
    const double lg = std::max(0.0, std::log(n_paths / 2.0));
    const double tail = envelope_constant(2) * lg / (N * Delta * (1.0 - 2.0 * delta / Delta));
    value = eta2c * n4 / (4.0 * delta * delta) / (c_const + tail);
  }
  return BoundReport{value, variant, BoundInputs{N, n_paths, Delta, delta, eta, c_max}};
}

BoundReport bob_crb_bound_full(steering::KernelOrder order, double Delta, double eta, double c_min,
                               BoundVariant variant) {
  const int N = order.n_antennas();
  if (!(Delta >= kPi * kPi / N)) {
    throw std::invalid_argument(
        "bob_crb_bound_full: separation hypothesis violated (requires Delta >= pi^2/N)");
  }
  if (!(c_min > 0.0)) throw std::invalid_argument("bob_crb_bound_full: c_min must be positive");
  const double denom = 1.0 - kPi * kPi / (N * Delta);
  double value = kInf;
  if (denom > 0.0) {
    value = (variant == BoundVariant::Closed) ? eta * eta / denom
                                              : eta * eta / (c_min * c_min * denom);
  }
  return BoundReport{value, variant, BoundInputs{N, 0, Delta, 0.0, eta, c_min}};
}

BoundReport eve_crb_bound_full(steering::KernelOrder order, int n_paths, double Delta, double delta,
                               double eta, double c_max, BoundVariant variant) {
  check_separations(n_paths, delta, Delta, "eve_crb_bound_full");
  if (!(c_max > 0.0)) throw std::invalid_argument("eve_crb_bound_full: c_max must be positive");
  const int N = order.n_antennas();
  const double eta2c = eta * eta / (c_max * c_max);
  double value = kInf;
  if (variant == BoundVariant::Rigorous) {
    const double norm_bound =
        block_norm_bound(order, n_paths, delta, Delta, NormBoundVariant::ExactSum);
    if (norm_bound > 0.0) value = eta2c / norm_bound;
  } else if (delta > 0.0) {
    const double n4 = static_cast<double>(N) * N * N * N;
    const double c_const = steering::dirichlet_sup_near_zero(order, 4, 2.0 * delta) / n4;
    const double lg = std::max(0.0, std::log(n_paths / 2.0));
    const double tail = envelope_constant(2) * lg / (N * Delta * (1.0 - 2.0 * delta / Delta));
    value = eta2c * static_cast<double>(N) * N / (4.0 * delta * delta) / (c_const + tail);
  }
  return BoundReport{value, variant, BoundInputs{N, n_paths, Delta, delta, eta, c_max}};
}

double margin_bound(MarginScenario scenario, const MarginParams& params, BoundVariant variant) {
  const BoundReport eve =
      (scenario == MarginScenario::AoAOnly)
          ? eve_crb_bound_aoa(params.order_eve, params.n_paths, params.min_sep_eve,
                              params.inter_sep_eve, params.noise_eve, params.coeff_max_eve, variant)
          : eve_crb_bound_full(params.order_eve, params.n_paths, params.min_sep_eve,
                               params.inter_sep_eve, params.noise_eve, params.coeff_max_eve,
                               variant);
  const BoundReport bob =
      (scenario == MarginScenario::AoAOnly)
          ? bob_crb_bound_aoa(params.order_bob, params.min_sep_bob, params.noise_bob,
                              params.coeff_min_bob, variant)
          : bob_crb_bound_full(params.order_bob, params.min_sep_bob, params.noise_bob,
                               params.coeff_min_bob, variant);
  return eve.value / bob.value;
}

}  // namespace fakepath::bounds
