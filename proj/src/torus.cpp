// SPDX-License-Identifier: Apache-2.0

#include "fakepath/torus.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fakepath::torus {

double TorusPoint::wrap(double raw) {
  double v = raw - std::floor(raw);
  // raw values a hair below an integer can round up to exactly 1.0
  if (v >= 1.0) v = 0.0;
  return v;
}

double signed_difference(TorusPoint a, TorusPoint b) {
  const double d = a.value() - b.value();
  return d - std::floor(d + 0.5);
}

double wrap_distance(TorusPoint a, TorusPoint b) {
  return std::fabs(signed_difference(a, b));
}

PathSet::PathSet(std::vector<TorusPoint> points) : points_(std::move(points)) {
  if (points_.empty()) {
    throw std::invalid_argument("PathSet: at least one point required");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      if (wrap_distance(points_[i], points_[j]) <= 0.0) {
        throw std::invalid_argument("PathSet: duplicate points at indices " +
                                    std::to_string(i) + " and " + std::to_string(j));
      }
    }
  }
}

PathSet::PathSet(std::initializer_list<double> values)
    : PathSet([&] {
        std::vector<TorusPoint> pts;
        pts.reserve(values.size());
        for (double v : values) pts.emplace_back(v);
        return pts;
      }()) {}

PathSet PathSet::from_values(const std::vector<double>& values) {
  std::vector<TorusPoint> pts;
  pts.reserve(values.size());
  for (double v : values) pts.emplace_back(v);
  return PathSet(std::move(pts));
}

double min_separation(const PathSet& taus) {
  if (taus.size() < 2) {
    throw std::invalid_argument("min_separation: separation undefined for singleton");
  }
  double best = 0.5;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    for (std::size_t j = i + 1; j < taus.size(); ++j) {
      best = std::min(best, wrap_distance(taus[i], taus[j]));
    }
  }
  return best;
}

double inter_separation(const PathSet& taus, const PathSet& fakes) {
  if (taus.size() != fakes.size()) {
    throw std::invalid_argument("inter_separation: cardinality mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    worst = std::max(worst, wrap_distance(taus[i], fakes[i]));
  }
  return worst;
}

double inter_separation_all_pairs(const PathSet& taus, const PathSet& fakes) {
  double worst = 0.0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    for (std::size_t j = 0; j < fakes.size(); ++j) {
      worst = std::max(worst, wrap_distance(taus[i], fakes[j]));
    }
  }
  return worst;
}

AoA::AoA(double phi_radians) : phi(phi_radians) {
  constexpr double kHalfPi = 1.5707963267948966;
  if (!(phi >= -kHalfPi && phi < kHalfPi)) {
    throw std::invalid_argument("AoA: phi must lie in [-pi/2, pi/2)");
  }
}

TorusPoint aoa_to_tau(AoA aoa) { return TorusPoint(0.5 * std::sin(aoa.phi)); }

AoA tau_to_aoa(TorusPoint t) {
  const double rep = t.value() - std::floor(t.value() + 0.5);  // in [-1/2, 1/2)
  return AoA(std::asin(2.0 * rep));
}

}  // namespace fakepath::torus
