// SPDX-License-Identifier: Apache-2.0

#include "fakepath/steering.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "fakepath/optimize.hpp"

namespace fakepath::steering {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

KernelOrder::KernelOrder(int n_antennas) : n_antennas_(n_antennas) {
  if (n_antennas < 1 || n_antennas % 2 == 0) {
    throw std::invalid_argument("KernelOrder: antenna count must be odd and >= 1");
  }
}

double dirichlet(KernelOrder order, double t, int p) {
  if (p < 0 || p > 4) {
    throw std::invalid_argument("dirichlet: derivative order must be in 0..4");
  }
  const int n = order.half_order();
  // k = 0 contributes only at p = 0; terms for k and -k combine to
  // 2 (2 pi k)^p Re[i^p e^{i 2 pi k t}]
  double acc = (p == 0) ? 1.0 : 0.0;
  for (int k = 1; k <= n; ++k) {
    const double a = kTwoPi * k;
    double ap = 1.0;
    for (int q = 0; q < p; ++q) ap *= a;
    const double arg = a * t;
    switch (p & 3) {
      case 0: acc += 2.0 * ap * std::cos(arg); break;
      case 1: acc -= 2.0 * ap * std::sin(arg); break;
      case 2: acc -= 2.0 * ap * std::cos(arg); break;
      case 3: acc += 2.0 * ap * std::sin(arg); break;
    }
  }
  return acc / order.n_antennas();
}

double v1_norm_squared(KernelOrder order) { return -dirichlet(order, 0.0, 2); }

double dirichlet_sup_near_zero(KernelOrder order, int p, double radius) {
  if (p < 0 || p > 4) {
    throw std::invalid_argument("dirichlet_sup_near_zero: derivative order must be in 0..4");
  }
  if (!(radius >= 0.0 && radius < 0.5)) {
    throw std::invalid_argument("dirichlet_sup_near_zero: radius must lie in [0, 1/2)");
  }
  const auto f = [&](double t) { return std::fabs(dirichlet(order, t, p)); };
  if (radius == 0.0) return f(0.0);

  // |D^(p)| is even, so scanning [0, radius] suffices.
  const int grid = std::max(1024, 64 * order.n_antennas());
  const double step = radius / grid;
  double best = f(0.0);
  int best_i = 0;
  for (int i = 1; i <= grid; ++i) {
    const double v = f(i * step);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  const double lo = std::max(0.0, (best_i - 1) * step);
  const double hi = std::min(radius, (best_i + 1) * step);
  const double refined = optimize::golden_maximize(f, lo, hi, 1e-8);
  return std::max(best, f(refined));
}

Eigen::VectorXcd steering_vector(KernelOrder order, torus::TorusPoint tau, int p) {
  if (p != 0 && p != 1) {
    throw std::invalid_argument("steering_vector: p must be 0 or 1");
  }
  const int N = order.n_antennas();
  const int n = order.half_order();
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  Eigen::VectorXcd v(N);
  for (int k = -n; k <= n; ++k) {
    const double phase = kTwoPi * k * tau.value();
    std::complex<double> e(std::cos(phase), std::sin(phase));
    if (p == 1) e *= std::complex<double>(0.0, kTwoPi * k);
    v[k + n] = scale * e;
  }
  return v;
}

Eigen::MatrixXcd vandermonde(KernelOrder order, const torus::PathSet& taus, int p) {
  Eigen::MatrixXcd m(order.n_antennas(), static_cast<Eigen::Index>(taus.size()));
  for (std::size_t l = 0; l < taus.size(); ++l) {
    m.col(static_cast<Eigen::Index>(l)) = steering_vector(order, taus[l], p);
  }
  return m;
}

Eigen::MatrixXcd concat_w(KernelOrder order, const torus::PathSet& taus) {
  if (order.n_antennas() < 3) {
    throw std::invalid_argument("concat_w: requires at least 3 antennas");
  }
  const auto L = static_cast<Eigen::Index>(taus.size());
  Eigen::MatrixXcd w(order.n_antennas(), 2 * L);
  w.leftCols(L) = vandermonde(order, taus, 0);
  w.rightCols(L) = vandermonde(order, taus, 1) / std::sqrt(v1_norm_squared(order));
  return w;
}

SteeringEnsemble make_ensemble(KernelOrder order, const torus::PathSet& taus) {
  return SteeringEnsemble{vandermonde(order, taus, 0), vandermonde(order, taus, 1),
                          concat_w(order, taus), order, taus};
}

}  // namespace fakepath::steering
