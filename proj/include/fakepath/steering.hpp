// SPDX-License-Identifier: Apache-2.0
//
// Dirichlet kernel and array steering machinery for uniform linear arrays
// with half-wavelength spacing.
//
// Conventions (used consistently everywhere):
//   antenna index     k = -n..n with N = 2n + 1
//   steering vector   v_p(tau)[k] = (1/sqrt(N)) (i 2 pi k)^p e^{i 2 pi k tau},  p in {0, 1}
//   Dirichlet kernel  D_N^{(p)}(t) = (1/N) sum_k (-i 2 pi k)^p e^{-i 2 pi k t}
//
// The kernel is real for every derivative order (k and -k pair up) and
// 1-periodic. The Gram identities tie the two together:
//   v_p(a)^H v_q(b) = (-1)^p D_N^{(p+q)}(b - a)
// in particular (V0^H V0)_{ij} = D_N(tau_i - tau_j) and
// (V1^H V1)_{ij} = -D_N''(tau_i - tau_j).

#pragma once

#include <Eigen/Dense>

#include "fakepath/torus.hpp"

namespace fakepath::steering {

/// Antenna count N = 2n + 1 of a uniform linear array.
class KernelOrder {
 public:
  explicit KernelOrder(int n_antennas);

  int n_antennas() const { return n_antennas_; }
  int half_order() const { return (n_antennas_ - 1) / 2; }

 private:
  int n_antennas_ = 3;
};

/// D_N^{(p)}(t) for p in {0,...,4}, evaluated by the explicit finite sum.
double dirichlet(KernelOrder order, double t, int p);

/// -D_N''(0) = (pi^2/3)(N-1)(N+1), the squared norm of v_1.
double v1_norm_squared(KernelOrder order);

/// sup over |eps| <= radius of |D_N^{(p)}(eps)|, radius in [0, 1/2).
/// Dense grid of max(1024, 64 N) points followed by golden-section
/// refinement around the best grid point; refinement tolerance 1e-8.
double dirichlet_sup_near_zero(KernelOrder order, int p, double radius);

/// v_p(tau), p in {0, 1}.
Eigen::VectorXcd steering_vector(KernelOrder order, torus::TorusPoint tau, int p);

/// Column-stack [v_p(tau_1), ..., v_p(tau_L)].
Eigen::MatrixXcd vandermonde(KernelOrder order, const torus::PathSet& taus, int p);

/// W(tau) = [V0(tau) | V1(tau)/sqrt(-D_N''(0))]; all 2L columns unit norm.
/// Requires N >= 3.
Eigen::MatrixXcd concat_w(KernelOrder order, const torus::PathSet& taus);

struct SteeringEnsemble {
  Eigen::MatrixXcd v0_matrix;
  Eigen::MatrixXcd v1_matrix;
  Eigen::MatrixXcd w_matrix;
  KernelOrder order;
  torus::PathSet taus;
};

SteeringEnsemble make_ensemble(KernelOrder order, const torus::PathSet& taus);

}  // namespace fakepath::steering
