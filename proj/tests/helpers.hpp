// SPDX-License-Identifier: Apache-2.0
//
// Shared generators for randomized tests: separated path sets and admissible
// fake-path scenes (delta < Delta/2, moderate conditioning).

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fakepath/crb.hpp"
#include "fakepath/rng.hpp"
#include "fakepath/torus.hpp"

namespace fakepath::testing {

inline Eigen::VectorXcd random_coeffs(rng::Substream& stream, int L, double lo, double hi) {
  Eigen::VectorXcd c(L);
  for (int l = 0; l < L; ++l) {
    const double mag = stream.uniform(lo, hi);
    const double phase = stream.uniform(0.0, 2.0 * std::numbers::pi);
    c[l] = std::complex<double>(mag * std::cos(phase), mag * std::sin(phase));
  }
  return c;
}

/// L points with pairwise separation at least ~dmin (L = 1 allowed).
inline torus::PathSet random_separated_paths(rng::Substream& stream, int L, double dmin) {
  while (true) {
    std::vector<double> v;
    if (L >= 2) {
      std::vector<double> gaps(static_cast<std::size_t>(L));
      double sum = 0.0;
      for (int l = 0; l < L; ++l) {
        gaps[static_cast<std::size_t>(l)] = -std::log(std::max(stream.u01(), 1e-12));
        sum += gaps[static_cast<std::size_t>(l)];
      }
      double acc = stream.u01();
      for (int l = 0; l < L; ++l) {
        acc += dmin + gaps[static_cast<std::size_t>(l)] * (1.0 - L * dmin) / sum;
        v.push_back(acc);
      }
    } else {
      v.push_back(stream.u01());
    }
    try {
      return torus::PathSet::from_values(v);
    } catch (const std::invalid_argument&) {
    }
  }
}

struct FakePathConfig {
  torus::PathSet taus;
  torus::PathSet fakes;
  double Delta = 0.5;
  double delta = 0.0;
  steering::KernelOrder order{3};
};

/// Admissible configuration: realized delta in (0, Delta/2).
inline FakePathConfig random_fake_config(rng::Substream& stream, int max_half_n = 31,
                                         int max_paths = 8, double min_ratio = 0.02) {
  while (true) {
    const int L = 1 + static_cast<int>(stream.uniform_index(max_paths));
    const int N = 2 * (3 + static_cast<int>(stream.uniform_index(max_half_n - 2))) + 1;
    const double dmin = (L >= 2) ? stream.uniform(0.02, 1.0 / (2.0 * L)) : 0.0;
    torus::PathSet taus = random_separated_paths(stream, L, dmin);
    const double Delta = (L >= 2) ? torus::min_separation(taus) : 0.5;
    const double ratio = stream.uniform(min_ratio, 0.48);
    std::vector<double> fakes_v;
    for (int l = 0; l < L; ++l) {
      fakes_v.push_back(taus[static_cast<std::size_t>(l)].value() +
                        ratio * Delta * stream.uniform(-1.0, 1.0));
    }
    try {
      torus::PathSet fakes = torus::PathSet::from_values(fakes_v);
      const double delta = torus::inter_separation(taus, fakes);
      if (delta <= 0.0 || delta >= Delta / 2.0) continue;
      return FakePathConfig{std::move(taus), std::move(fakes), Delta, delta,
                            steering::KernelOrder(N)};
    } catch (const std::invalid_argument&) {
    }
  }
}

struct RandomScene {
  crb::ChannelScene scene;
  double Delta;
  double delta;
};

inline RandomScene random_admissible_scene(rng::Substream& stream, int max_half_n = 31,
                                           int max_paths = 8) {
  while (true) {
    FakePathConfig cfg = random_fake_config(stream, max_half_n, max_paths, 0.05);
    const int L = static_cast<int>(cfg.taus.size());
    const double eta = stream.uniform(0.3, 2.0);
    crb::ChannelScene scene(cfg.taus, cfg.fakes, random_coeffs(stream, L, 0.5, 2.0),
                            random_coeffs(stream, L, 0.5, 2.0), eta, cfg.order);
    // keep the stacked FIM invertible at working precision so both CRB
    // routes stay comparable
    const auto fim = crb::fim_aoa_known_coeffs(scene, crb::Receiver::Eve);
    const auto [lmin, lmax] = crb::extremal_eigenvalues(fim.matrix);
    if (lmin <= 1e-7 * lmax) continue;
    return RandomScene{std::move(scene), cfg.Delta, cfg.delta};
  }
}

}  // namespace fakepath::testing
