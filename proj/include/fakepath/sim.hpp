// SPDX-License-Identifier: Apache-2.0
//
// Observation synthesis, SNR accounting, and the Monte-Carlo CRB sweeps.
//
// Randomness contract: every trial draws from a Substream keyed by the root
// seed and the trial index only, so fake-path offsets are common random
// numbers across sweep ratios and results are independent of scheduling.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fakepath/crb.hpp"
#include "fakepath/parallel.hpp"
#include "fakepath/rng.hpp"
#include "fakepath/table.hpp"

namespace fakepath::sim {

struct Observation {
  Eigen::VectorXcd y;
  int snapshot_index = 0;
};

/// y = V0(tau) c + V0(fake) fake_c + w with w ~ CN(0, eta^2 I).
Observation synthesize(const crb::ChannelScene& scene, rng::Substream& stream,
                       int snapshot_index = 0);

/// SNR (linear) = ||V0(tau)||_F^2 / (N eta^2); the noise-norm denominator is
/// replaced by its expectation so the SNR is a scene property.
double snr_of(const crb::ChannelScene& scene);

/// Noise level realizing a target SNR for L unit-norm steering columns.
double noise_std_for_snr_db(int n_paths, int n_antennas, double snr_db);

/// True paths placed equispaced with spacing Delta starting at 0.
torus::PathSet equispaced_paths(int n_paths, double Delta);

struct SweepConfig {
  int n_antennas = 31;
  int n_paths = 5;
  double Delta = 0.2;
  std::vector<double> delta_ratios;
  double snr_db = 0.0;
  int n_trials = 200;
  std::uint64_t seed = 0;
};

/// Fig.-style realized-CRB sweep: per delta ratio, draws fake paths uniformly
/// within +-delta of each true path, computes realized lambda_min(CRB_E) with
/// unit known coefficients, and tabulates min/median/max together with the
/// theoretical bounds. Trials whose FIM is singular at working precision are
/// skipped and counted.
table::ExperimentTable mc_crb_realizations(const SweepConfig& config,
                                           const parallel::ExecPolicy& policy = {});

/// For each margin target, bisection over delta/Delta on the realized median
/// margin; reports the largest admissible ratio achieving the target.
table::ExperimentTable margin_sweep(const SweepConfig& config,
                                    const std::vector<double>& gamma_targets,
                                    const parallel::ExecPolicy& policy = {});

}  // namespace fakepath::sim
