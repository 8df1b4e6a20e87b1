// SPDX-License-Identifier: Apache-2.0
//
// Receiver-side inference: fake-path removal, MUSIC AoA estimation,
// least-squares coefficient recovery, exhaustive ML BPSK decoding, and the
// two-phase Monte-Carlo BER experiment.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fakepath/parallel.hpp"
#include "fakepath/steering.hpp"
#include "fakepath/table.hpp"
#include "fakepath/torus.hpp"

namespace fakepath::estimation {

struct SnapshotBlock {
  Eigen::MatrixXcd snapshots;                     // N x T
  std::optional<Eigen::MatrixXd> pilot_symbols;   // T x L, +-1 entries
};

/// y - V0(fakes) fake_coeffs; exact removal using side-channel parameters.
Eigen::VectorXcd remove_fake(steering::KernelOrder order, const Eigen::VectorXcd& y,
                             const torus::PathSet& fakes, const Eigen::VectorXcd& fake_coeffs);

class PeakCountError : public std::runtime_error {
 public:
  PeakCountError(const std::string& what, int found_count)
      : std::runtime_error(what), found(found_count) {}
  int found;
};

enum class PeakPolicy {
  Strict,       // fewer peaks than sources -> PeakCountError
  PadFromGrid,  // fill up from the highest remaining pseudo-spectrum values
};

/// MUSIC AoA estimation from the sample covariance of the snapshot block.
/// Evaluates the pseudo-spectrum 1/||Un^H v0(tau)||^2 on a uniform grid of
/// grid_size points, picks the n_sources largest well-separated peaks and
/// refines each by golden-section search (tolerance 1e-8). Output sorted
/// ascending.
torus::PathSet music_estimate(steering::KernelOrder order, const SnapshotBlock& block,
                              int n_sources, int grid_size,
                              PeakPolicy policy = PeakPolicy::Strict);

enum class RankPolicy { Strict, MinimumNorm };

/// Joint least squares over all pilot snapshots:
///   minimize sum_t || y_t - V0(tau_hat) diag(c) s_t ||^2.
/// Strict raises on a rank-deficient normal matrix; MinimumNorm returns the
/// eigenvalue-truncated minimum-norm solution.
Eigen::VectorXcd ls_coefficients(steering::KernelOrder order, const SnapshotBlock& block,
                                 const torus::PathSet& tau_hat,
                                 RankPolicy policy = RankPolicy::Strict);

/// Exhaustive ML BPSK decoding: argmin over b in {+-1}^L of
/// ||y - V0(tau_hat) diag(c_hat) b||^2, ties broken lexicographically
/// (-1 before +1). Requires L <= 20.
Eigen::VectorXd ml_decode(steering::KernelOrder order, const Eigen::VectorXcd& y,
                          const torus::PathSet& tau_hat, const Eigen::VectorXcd& c_hat);

/// Greedy one-to-one matching of estimated points to reference points by
/// increasing wrap distance; returns for each estimate the matched reference
/// index.
std::vector<std::size_t> greedy_wrap_match(const torus::PathSet& estimates,
                                           const torus::PathSet& reference);

struct BerConfig {
  int n_antennas = 15;
  int n_paths = 3;
  int n_pilots = 15;
  int n_data_symbols = 50;  // per trial
  int n_trials = 40;
  std::vector<double> snr_db_list;
  double delta_ratio = 0.1;
  std::uint64_t seed = 0;
  bool fake_in_data_phase = false;
  int music_grid = 4096;
};

/// Two-phase BER experiment. Pilot phase: users send known +-1 pilots while
/// the jammer adds fake paths with per-trial constant coefficients; Bob
/// removes them over the side channel, Eve estimates 2L paths. Data phase:
/// unknown +-1 messages, optionally with the jammer still active (Bob removes
/// the shared jammer sequence exactly, Eve cannot). Per-trial estimation
/// failures degrade that trial's CSI but never drop its symbols.
table::ExperimentTable ber_experiment(const BerConfig& config,
                                      const parallel::ExecPolicy& policy = {});

}  // namespace fakepath::estimation
