// SPDX-License-Identifier: Apache-2.0
//
// Closed-form privacy bounds: difference-Gram matrices G_p, kernel-derivative
// envelopes, infinity-norm bounds on G_p, and the CRB / margin bounds for
// both receivers.
//
// Two variants are carried through most bounds:
//   Closed   - the headline closed-form expression.
//   Rigorous - the fully explicit numeric chain (the one validated against
//              realized CRBs in the tests).

#pragma once

#include <Eigen/Dense>

#include "fakepath/parallel.hpp"
#include "fakepath/steering.hpp"
#include "fakepath/torus.hpp"

namespace fakepath::bounds {

/// Difference-Gram matrix of order p in {0, 1, 2} with E_p = V_p(tau) - V_p(fake):
///   G_0 = E_0^H E_0,  G_1 = E_0^H E_1,  G_2 = E_1^H E_1.
/// Entrywise this is the four-term kernel combination
///   sigma_p [ D^(p)(t_i - t_j) - D^(p)(f_i - t_j) + D^(p)(f_i - f_j) - D^(p)(t_i - f_j) ]
/// with sigma = (+1, -1, -1); the sign makes the Gram identities above exact
/// and leaves every norm unchanged.
struct GpMatrix {
  int p = 0;
  Eigen::MatrixXd matrix;
  torus::PathSet taus;
  torus::PathSet fakes;
};

GpMatrix gp_matrix(steering::KernelOrder order, const torus::PathSet& taus,
                   const torus::PathSet& fakes, int p);

/// Max absolute row sum.
double inf_norm(const Eigen::MatrixXd& m);
double inf_norm(const Eigen::MatrixXcd& m);

/// Envelope constants of |D_N^{(p+2)}(t)| |t| <= C_p N^{p+1}.
double envelope_constant(int p);  // C_0 = 5, C_1 = 16, C_2 = 50

/// Worst ratio |D_N^{(p+2)}(t)| |t| / (C_p N^{p+1}) over a dense grid of
/// `samples` points on [-1/2, 1/2) excluding 0. The envelope claim holds iff
/// the result is <= 1.
double dirichlet_envelope_check(steering::KernelOrder order, int p, int samples,
                                const parallel::ExecPolicy& policy = {});

enum class NormBoundVariant { LogMajorized, ExactSum };

/// Upper bound on ||G_p||_inf for path sets with min separation Delta and
/// matched inter-separation delta < Delta/2:
///   4 delta^2 ( sup_{|eps|<=2 delta} |D^{(p+2)}(eps)| + tail )
/// ExactSum uses the explicit tail 2 C_p N^{p+1} sum_{k=1}^{ceil((L-1)/2)} 1/(k Delta - 2 delta);
/// LogMajorized replaces the sum by C_p N^{p+1} max(0, log(L/2)) / (Delta (1 - 2 delta/Delta)).
/// Only the ExactSum form is a proven majorant; see the tests.
double lemma_norm_bound(steering::KernelOrder order, int n_paths, double delta, double Delta,
                        int p, NormBoundVariant variant);

/// Assembled infinity-norm bound for the concatenated-steering difference
/// F = W(tau) - W(fake): max of the two block row sums built from
/// lemma_norm_bound values with the 1/sqrt(-D_N''(0)) scalings.
double block_norm_bound(steering::KernelOrder order, int n_paths, double delta, double Delta,
                        NormBoundVariant variant);

enum class BoundVariant { Closed, Rigorous };

struct BoundInputs {
  int n_antennas = 0;
  int n_paths = 0;
  double min_separation = 0.0;
  double inter_separation = 0.0;
  double noise_std = 0.0;
  double coeff_extreme = 0.0;  // c_min for Bob bounds, c_max for Eve bounds
};

struct BoundReport {
  double value = 0.0;
  BoundVariant variant = BoundVariant::Rigorous;
  BoundInputs inputs;
};

/// Upper bound on lambda_max(CRB_B(tau)); requires Delta >= pi^2/N.
BoundReport bob_crb_bound_aoa(steering::KernelOrder order, double Delta, double eta, double c_min,
                              BoundVariant variant);

/// Lower bound on lambda_min(CRB_E(tau)); requires delta < Delta/2.
BoundReport eve_crb_bound_aoa(steering::KernelOrder order, int n_paths, double Delta, double delta,
                              double eta, double c_max, BoundVariant variant);

/// Upper bound on lambda_max(CRB_B(theta)), theta = (c, u).
BoundReport bob_crb_bound_full(steering::KernelOrder order, double Delta, double eta, double c_min,
                               BoundVariant variant);

/// Lower bound on lambda_min(CRB_E(theta)).
BoundReport eve_crb_bound_full(steering::KernelOrder order, int n_paths, double Delta, double delta,
                               double eta, double c_max, BoundVariant variant);

enum class MarginScenario { AoAOnly, Full };

struct MarginParams {
  steering::KernelOrder order_bob{3};
  steering::KernelOrder order_eve{3};
  int n_paths = 1;
  double min_sep_bob = 0.0;
  double min_sep_eve = 0.0;
  double inter_sep_eve = 0.0;
  double noise_bob = 0.0;
  double noise_eve = 0.0;
  double coeff_min_bob = 1.0;
  double coeff_max_eve = 1.0;
};

/// Guaranteed margin: Eve lower bound divided by Bob upper bound, with
/// matching variants on both sides.
double margin_bound(MarginScenario scenario, const MarginParams& params, BoundVariant variant);

}  // namespace fakepath::bounds
