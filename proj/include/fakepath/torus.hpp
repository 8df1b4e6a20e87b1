// SPDX-License-Identifier: Apache-2.0
//
// Geometry of the unit torus T = R/Z: canonical representatives, wrap-around
// distances, separation metrics of path sets, and the AoA <-> torus mapping
// for half-wavelength uniform linear arrays.

#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace fakepath::torus {

/// A point on T = R/Z, stored as its canonical representative in [0, 1).
class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(double raw) : value_(wrap(raw)) {}

  double value() const { return value_; }

  static double wrap(double raw);

 private:
  double value_ = 0.0;
};

/// Signed difference a - b reduced to [-1/2, 1/2).
double signed_difference(TorusPoint a, TorusPoint b);

/// Wrap-around distance min_{j in Z} |a - b + j|, in [0, 1/2].
double wrap_distance(TorusPoint a, TorusPoint b);

/// An ordered set of distinct torus points.
class PathSet {
 public:
  explicit PathSet(std::vector<TorusPoint> points);
  PathSet(std::initializer_list<double> values);

  static PathSet from_values(const std::vector<double>& values);

  std::size_t size() const { return points_.size(); }
  const TorusPoint& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<TorusPoint>& points() const { return points_; }

 private:
  std::vector<TorusPoint> points_;
};

/// Minimal pairwise wrap-around distance (Delta). Requires >= 2 points.
double min_separation(const PathSet& taus);

/// Matched-index inter-separation (delta): max_l dist(tau_l, fake_l).
/// Requires equal cardinalities.
double inter_separation(const PathSet& taus, const PathSet& fakes);

/// Diagnostic variant: maximum over all index pairs, not just matched ones.
double inter_separation_all_pairs(const PathSet& taus, const PathSet& fakes);

/// Angle of arrival in radians, restricted to [-pi/2, pi/2).
struct AoA {
  explicit AoA(double phi_radians);
  double phi = 0.0;
};

/// tau = sin(phi)/2 reduced mod 1 (half-wavelength element spacing).
TorusPoint aoa_to_tau(AoA aoa);

/// Inverse map: phi = asin(2 t') with t' the representative in [-1/2, 1/2).
AoA tau_to_aoa(TorusPoint t);

}  // namespace fakepath::torus
